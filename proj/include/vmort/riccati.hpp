#ifndef VMORT_RICCATI_HPP
#define VMORT_RICCATI_HPP

#include <cstdint>

#include "vmort/kernels.hpp"
#include "vmort/rates.hpp"

namespace vmort {

// Solution of the Riccati-Volterra equation
//
//   psi = (-eta + psi B + 1/2 A1 psi^2) * K
//
// tabulated in time-to-maturity on [0, horizon]. psi(0) = 0 by
// construction. With a constant kernel this collapses to the classical
// affine Riccati ODE psi' = c (-eta + B psi + 1/2 A1 psi^2).
struct RiccatiSolution {
    GridFunction psi;
    double eta = 0.0;
    std::uint64_t model_id = 0; // pairs the solution with its solve inputs

    double value(double tau) const { return psi.value(tau); }
    double horizon() const { return psi.back_time(); }
};

// Identifier over the exact solve inputs, used to reject mismatched
// (model, psi) pairs downstream.
std::uint64_t riccati_model_id(const KernelSpec& kernel, double eta, double B, double A1);

// Predictor-corrector product-integration scheme on a uniform grid: cell
// weights are exact integrals of K, the integrand is trapezoidal in its
// endpoint values; the newest cell is predicted with its left value and
// corrected once. Throws DivergenceError if |psi| exceeds 1e8.
RiccatiSolution solve_riccati_volterra(const KernelSpec& kernel, double eta, double B, double A0,
                                       double A1, double horizon, double dt);

// Backward coefficient ODEs of the exponential-affine transform
//
//   E[ e^{-int_t^T (lambda0 + lambda1 Z) ds} e^{c1 Z_T} (c2 Z_T + c3) | Z_t ]
//     = e^{alpha~(t) + beta~(t) Z_t} [alpha^(t) + beta^(t) Z_t]
//
// integrated by classical RK4 from the terminal data alpha~(T)=0,
// beta~(T)=c1, alpha^(T)=c3, beta^(T)=c2 and returned indexed by
// time-to-maturity tau = T - t. An optional piecewise-constant drift shift
// is added to the model's b0 (Girsanov-tilted dynamics).
struct AffineOdeCoefficients {
    GridFunction alpha_tilde;
    GridFunction beta_tilde;
    GridFunction alpha_hat;
    GridFunction beta_hat;
};

AffineOdeCoefficients solve_affine_odes(const AffineRateModel& model, double lambda0,
                                        double lambda1, double c1, double c2, double c3, double T,
                                        double dt, const StepFunction* drift_shift = nullptr);

} // namespace vmort

#endif
