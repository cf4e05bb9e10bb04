#ifndef VMORT_RATES_HPP
#define VMORT_RATES_HPP

#include <utility>

#include "vmort/grid.hpp"

namespace vmort {

// Vasicek short-rate factor: dZ = (b0 - mean_rev * Z) dt + sigma_r dW',
// with the short rate r = lambda0 + lambda1 * Z (defaults r = Z).
struct AffineRateModel {
    double b0 = 0.0;
    double mean_rev = 1.0; // > 0
    double sigma_r = 0.0;  // >= 0
    double z0 = 0.0;
    double lambda0 = 0.0;
    double lambda1 = 1.0;

    void validate() const;
    double drift(double z) const { return b0 - mean_rev * z; }
    double long_run_mean() const { return b0 / mean_rev; }
};

// Exponential-affine coefficients for E[exp(-scale * int_t^T r du) | Z_t]
// = exp(alpha(tau) + beta(tau) Z_t), tau = T - t:
//
//   beta(tau)  = -scale*lambda1 (1 - e^(-k tau)) / k
//   alpha(tau) = -scale*lambda0 tau + b0 I1(tau) + 1/2 sigma_r^2 I2(tau)
//
// with I1 = int beta, I2 = int beta^2 in closed form. A piecewise-constant
// drift shift delta(u) (Girsanov tilt of b0) adds the exact correction
// int_t^T delta(u) beta(T-u) du to alpha.
struct BondCoeffs {
    double alpha = 0.0;
    double beta = 0.0;
};

BondCoeffs vasicek_coeffs(const AffineRateModel& model, double scale, double tau);
double vasicek_drift_shift_correction(const AffineRateModel& model, double scale,
                                      const StepFunction& shift, double t, double T);

// Zero-coupon bond B(t,T) = exp(alpha~ + beta~ Z_t).
double bond_price(const AffineRateModel& model, double t, double T, double z_t);

// Analytic d/dT of the bond price (enters the death-benefit integral).
double bond_price_dT(const AffineRateModel& model, double t, double T, double z_t);

// Discount factors under the measure shifts used by the hedging problem:
//   double_discount = E^hat[exp(-2 int_t^T0 r)]   (drift tilt -2 theta sigma_r)
//   acute_bond      = E^acute[exp(-int_t^s r)]    (drift tilt -theta sigma_r)
// phi (the mortality risk price) does not move the rate factor and is
// accepted for interface symmetry only.
std::pair<double, double> auxiliary_discounts(const AffineRateModel& model,
                                              const StepFunction& phi,
                                              const StepFunction& theta, double t, double s,
                                              double T0, double r_t);

} // namespace vmort

#endif
