#include "vmort/rates.hpp"

#include <cmath>

#include "vmort/errors.hpp"

namespace vmort {

namespace {

// B-bar(tau) = (1 - e^(-k tau)) / k and its first two integrals.
double bbar(double k, double tau) { return (1.0 - std::exp(-k * tau)) / k; }

double int_bbar(double k, double tau) { return (tau - bbar(k, tau)) / k; }

double int_bbar_sq(double k, double tau) {
    return (tau - 2.0 * bbar(k, tau) + (1.0 - std::exp(-2.0 * k * tau)) / (2.0 * k)) / (k * k);
}

} // namespace

void AffineRateModel::validate() const {
    if (!(mean_rev > 0.0)) throw DomainError("AffineRateModel: mean_rev must be positive");
    if (!(sigma_r >= 0.0)) throw DomainError("AffineRateModel: sigma_r must be nonnegative");
}

BondCoeffs vasicek_coeffs(const AffineRateModel& model, double scale, double tau) {
    model.validate();
    if (tau < 0.0) throw InputError("vasicek_coeffs: tau must be nonnegative");
    if (tau == 0.0) return {0.0, 0.0};
    const double k = model.mean_rev;
    const double lam = scale * model.lambda1;
    const double beta = -lam * bbar(k, tau);
    const double alpha = -scale * model.lambda0 * tau - model.b0 * lam * int_bbar(k, tau) +
                         0.5 * model.sigma_r * model.sigma_r * lam * lam * int_bbar_sq(k, tau);
    return {alpha, beta};
}

double vasicek_drift_shift_correction(const AffineRateModel& model, double scale,
                                      const StepFunction& shift, double t, double T) {
    // int_t^T delta(u) beta(T-u) du, exact over the constant pieces.
    const double k = model.mean_rev;
    const double lam = scale * model.lambda1;
    const auto ibeta = [&](double tau) { return -lam * int_bbar(k, tau); };
    double acc = 0.0;
    const auto& times = shift.times;
    for (std::size_t p = 0; p < times.size(); ++p) {
        const double lo = std::max(t, (p == 0) ? t : times[p]);
        const double hi = (p + 1 < times.size()) ? std::min(T, times[p + 1]) : T;
        if (hi > lo) acc += shift.values[p] * (ibeta(T - lo) - ibeta(T - hi));
    }
    return acc;
}

double bond_price(const AffineRateModel& model, double t, double T, double z_t) {
    if (T < t) throw InputError("bond_price: require t <= T");
    const BondCoeffs c = vasicek_coeffs(model, 1.0, T - t);
    return std::exp(c.alpha + c.beta * z_t);
}

double bond_price_dT(const AffineRateModel& model, double t, double T, double z_t) {
    if (T < t) throw InputError("bond_price_dT: require t <= T");
    const double tau = T - t;
    const double k = model.mean_rev;
    const double lam = model.lambda1;
    const double beta = -lam * bbar(k, tau);
    // coefficient ODEs in time-to-maturity
    const double dalpha = -model.lambda0 + model.b0 * beta +
                          0.5 * model.sigma_r * model.sigma_r * beta * beta;
    const double dbeta = -lam * std::exp(-k * tau);
    return bond_price(model, t, T, z_t) * (dalpha + dbeta * z_t);
}

std::pair<double, double> auxiliary_discounts(const AffineRateModel& model,
                                              const StepFunction& phi,
                                              const StepFunction& theta, double t, double s,
                                              double T0, double r_t) {
    (void)phi;
    if (!(t <= s && s <= T0)) throw InputError("auxiliary_discounts: require t <= s <= T0");
    const double sr = model.sigma_r;

    const BondCoeffs c1 = vasicek_coeffs(model, 2.0, T0 - t);
    const double corr1 =
        vasicek_drift_shift_correction(model, 2.0, theta.scaled(-2.0 * sr), t, T0);
    const double double_discount = std::exp(c1.alpha + corr1 + c1.beta * r_t);

    const BondCoeffs c2 = vasicek_coeffs(model, 1.0, s - t);
    const double corr2 = vasicek_drift_shift_correction(model, 1.0, theta.scaled(-sr), t, s);
    const double acute_bond = std::exp(c2.alpha + corr2 + c2.beta * r_t);

    return {double_discount, acute_bond};
}

} // namespace vmort
