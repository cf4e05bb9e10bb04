#ifndef VMORT_PRICING_HPP
#define VMORT_PRICING_HPP

#include <optional>
#include <string>

#include "vmort/mortality.hpp"
#include "vmort/rates.hpp"

namespace vmort {

enum class ProductKind {
    survival_benefit,
    death_benefit,
    longevity_bond,
    annuity,
    assurance,
    endowment,
    longevity_call,
};

ProductKind product_kind_from_string(const std::string& s);
std::string to_string(ProductKind k);

struct ProductSpec {
    ProductKind kind = ProductKind::survival_benefit;
    double C = 1.0;       // payoff amount (survival / death leg)
    double C2 = 0.0;      // death leg of an endowment
    double t_prime = 0.0; // annuity deferral, years
    double x_star = 0.0;  // maximum age, years
    double D = 0.0;       // option strike
    double T1 = 0.0;      // option expiry
    double T = 0.0;       // maturity
    std::string id = "product";

    void validate(double t) const;
};

// Everything a valuation needs: the mortality model with its Riccati
// solution and realized history to t, plus the rate factor level. Payoff
// streams are deterministic constants, so forward expectations of C are C
// itself and the bond leg separates multiplicatively.
struct PricingContext {
    const AffineVolterraModel& mortality;
    const RiccatiSolution& psi;
    const SamplePath& path;
    double t = 0.0;
    const AffineRateModel& rates;
    double z_t = 0.0;
    const MeanKit* kit = nullptr; // optional precomputed resolvent machinery
};

double survival_benefit(const PricingContext& ctx, double C, double T);

// Integration-by-parts form: C (1 - B(t,T) g(t,T) + int_t^T dB(t,u) g(t,u)).
// The integral is taken as a Riemann-Stieltjes sum against exact bond-price
// differences, so a vanishing hazard cancels to zero identically.
double death_benefit(const PricingContext& ctx, double C, double T);

double longevity_bond_price(const PricingContext& ctx, double T);

// sum_{T = t + t'}^{x* - 1} B(t,T) g(t,T), unit payment per year.
double annuity_value(const PricingContext& ctx, double t_prime, double x_star);

double assurance_value(const PricingContext& ctx, double T);

double endowment_value(const PricingContext& ctx, double C1, double C2, double T);

// European call on a longevity bond under a constant rate and zero
// baseline hazard. The displayed formula freezes the volatility at
// psi(T-t) sigma; the integrated variant uses v^2 = int_t^T1 psi(T-s)^2
// sigma^2 ds (the exact lognormal total variance of the stated dynamics).
enum class CallVariant { frozen_vol, integrated_variance };

double longevity_call_value(const RiccatiSolution& psi, double b_l, double sigma, double t,
                            double T1, double T, double D, double r_const,
                            CallVariant variant = CallVariant::frozen_vol);

// Convenience wrapper deriving B_L(t,T) = e^{-r (T-t)} g(t,T) from the
// model and history.
double longevity_call_price(const AffineVolterraModel& model, const RiccatiSolution& psi,
                            const SamplePath& path, double t, double T1, double T, double D,
                            double r_const, CallVariant variant = CallVariant::frozen_vol);

// Moment generating function M(theta) = E_t[ e^{-theta int_t^T mu} ]: the
// survival transform with (m, eta) scaled by theta. psi_scaled must be the
// Riccati solution at loading theta * eta.
double esscher_mgf(const AffineVolterraModel& model, const RiccatiSolution& psi_scaled,
                   const SamplePath& path, double t, double T, double theta);

// Solves M(theta + 1) / M(theta) = observed_ratio by bisection on
// [-10, 10] to 1e-8; every evaluation re-solves the two Riccati loadings.
double calibrate_esscher(const AffineVolterraModel& model, const SamplePath& path, double t,
                         double T, double observed_ratio, double dt);

// Girsanov drift shift b -> b + a(x) phi(t) that keeps the affine
// structure: b0 picks up A0 phi, the slope picks up A1 phi. A state-
// dependent diffusion with a time-varying phi would break the constant
// slope the transform machinery needs, and is rejected.
AffineVolterraModel affine_retaining_apply(const AffineVolterraModel& model,
                                           const StepFunction& phi);

double price_product(const PricingContext& ctx, const ProductSpec& spec,
                     double r_const_for_calls = 0.0);

} // namespace vmort

#endif
