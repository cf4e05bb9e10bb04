#include "vmort/pricing.hpp"

#include <cmath>

namespace vmort {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

SurvivalEvaluator make_evaluator(const PricingContext& ctx, double t_max) {
    return SurvivalEvaluator(ctx.mortality, &ctx.psi, ctx.path, ctx.t, t_max, 0.0, ctx.kit);
}

} // namespace

ProductKind product_kind_from_string(const std::string& s) {
    if (s == "survival_benefit") return ProductKind::survival_benefit;
    if (s == "death_benefit") return ProductKind::death_benefit;
    if (s == "longevity_bond") return ProductKind::longevity_bond;
    if (s == "annuity") return ProductKind::annuity;
    if (s == "assurance") return ProductKind::assurance;
    if (s == "endowment") return ProductKind::endowment;
    if (s == "longevity_call") return ProductKind::longevity_call;
    throw InputError("unknown product kind: " + s);
}

std::string to_string(ProductKind k) {
    switch (k) {
        case ProductKind::survival_benefit: return "survival_benefit";
        case ProductKind::death_benefit: return "death_benefit";
        case ProductKind::longevity_bond: return "longevity_bond";
        case ProductKind::annuity: return "annuity";
        case ProductKind::assurance: return "assurance";
        case ProductKind::endowment: return "endowment";
        case ProductKind::longevity_call: return "longevity_call";
    }
    return "?";
}

void ProductSpec::validate(double t) const {
    switch (kind) {
        case ProductKind::annuity:
            if (t_prime < 0.0) throw InputError("annuity: deferral must be nonnegative");
            if (t + t_prime > x_star - 1.0)
                throw InputError("annuity: empty sum range (t + t' > x* - 1)");
            break;
        case ProductKind::longevity_call:
            if (!(D > 0.0)) throw InputError("longevity_call: strike must be positive");
            if (!(t <= T1 && T1 < T)) throw InputError("longevity_call: need t <= T1 < T");
            break;
        default:
            if (T < t) throw InputError(to_string(kind) + ": maturity before valuation time");
    }
}

double survival_benefit(const PricingContext& ctx, double C, double T) {
    if (T < ctx.t) throw InputError("survival_benefit: require t <= T");
    const auto ev = make_evaluator(ctx, T);
    return C * bond_price(ctx.rates, ctx.t, T, ctx.z_t) * ev.survival(T);
}

double death_benefit(const PricingContext& ctx, double C, double T) {
    if (T < ctx.t) throw InputError("death_benefit: require t <= T");
    if (T == ctx.t) return 0.0;
    const auto ev = make_evaluator(ctx, T);
    const double dt = ctx.path.dt;
    const auto n = steps_for(T - ctx.t, dt);

    // int_t^T dB(t,u) g(t,u) as sum of exact bond increments against the
    // trapezoidal average of g; with g = 1 it telescopes to B(t,T) - 1.
    double integral = 0.0;
    double b_prev = 1.0; // B(t,t)
    double g_prev = 1.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double u = std::min(ctx.t + static_cast<double>(k) * dt, T);
        const double b = bond_price(ctx.rates, ctx.t, u, ctx.z_t);
        const double g = ev.survival(u);
        integral += 0.5 * (g_prev + g) * (b - b_prev);
        b_prev = b;
        g_prev = g;
    }
    return C * (1.0 - b_prev * g_prev + integral);
}

double longevity_bond_price(const PricingContext& ctx, double T) {
    return survival_benefit(ctx, 1.0, T);
}

double annuity_value(const PricingContext& ctx, double t_prime, double x_star) {
    if (t_prime < 0.0) throw InputError("annuity_value: deferral must be nonnegative");
    const double first = ctx.t + t_prime;
    const double last = x_star - 1.0;
    if (first > last + 1e-9) throw InputError("annuity_value: empty sum range");
    const auto ev = make_evaluator(ctx, last);
    double acc = 0.0;
    for (double T = first; T <= last + 1e-9; T += 1.0)
        acc += bond_price(ctx.rates, ctx.t, T, ctx.z_t) * ev.survival(T);
    return acc;
}

double assurance_value(const PricingContext& ctx, double T) { return death_benefit(ctx, 1.0, T); }

double endowment_value(const PricingContext& ctx, double C1, double C2, double T) {
    return survival_benefit(ctx, C1, T) + death_benefit(ctx, C2, T);
}

double longevity_call_value(const RiccatiSolution& psi, double b_l, double sigma, double t,
                            double T1, double T, double D, double r_const, CallVariant variant) {
    if (!(D > 0.0)) throw InputError("longevity_call: strike must be positive");
    if (!(t <= T1 && T1 < T)) throw InputError("longevity_call: need t <= T1 < T");
    if (!(b_l > 0.0)) throw InputError("longevity_call: bond price must be positive");
    const double horizon = T1 - t;

    double v; // total standard deviation of log B_L over [t, T1]
    if (variant == CallVariant::frozen_vol) {
        v = std::abs(psi.value(T - t)) * sigma * std::sqrt(horizon);
    } else {
        const std::size_t n = std::max<std::size_t>(steps_for(horizon, psi.psi.dt), 2);
        const double h = horizon / static_cast<double>(n);
        double acc = 0.0;
        for (std::size_t k = 0; k <= n; ++k) {
            const double s = t + static_cast<double>(k) * h;
            const double p = psi.value(T - s);
            acc += (k == 0 || k == n) ? 0.5 * p * p : p * p;
        }
        v = sigma * std::sqrt(acc * h);
    }

    const double df = std::exp(-r_const * horizon);
    if (v <= 0.0 || horizon == 0.0) return std::max(b_l - D * df, 0.0);
    const double d1 = (std::log(b_l / D) + r_const * horizon) / v + 0.5 * v;
    const double d2 = d1 - v;
    return b_l * norm_cdf(d1) - D * df * norm_cdf(d2);
}

double longevity_call_price(const AffineVolterraModel& model, const RiccatiSolution& psi,
                            const SamplePath& path, double t, double T1, double T, double D,
                            double r_const, CallVariant variant) {
    if (!model.m.empty())
        throw InputError("longevity_call_price: requires zero baseline hazard");
    SurvivalEvaluator ev(model, &psi, path, t, T);
    const double b_l = std::exp(-r_const * (T - t)) * ev.survival(T);
    return longevity_call_value(psi, b_l, std::sqrt(model.A0), t, T1, T, D, r_const, variant);
}

double esscher_mgf(const AffineVolterraModel& model, const RiccatiSolution& psi_scaled,
                   const SamplePath& path, double t, double T, double theta) {
    AffineVolterraModel scaled = model;
    scaled.eta = theta * model.eta;
    for (auto& r : scaled.m.rates) r *= theta;
    if (psi_scaled.model_id != scaled.psi_id())
        throw InputError("esscher_mgf: psi not solved at loading theta*eta");
    SurvivalEvaluator ev(scaled, &psi_scaled, path, t, T);
    return ev.survival(T);
}

double calibrate_esscher(const AffineVolterraModel& model, const SamplePath& path, double t,
                         double T, double observed_ratio, double dt) {
    if (!(observed_ratio > 0.0 && observed_ratio <= 1.0))
        throw CalibrationError("calibrate_esscher: observed ratio must lie in (0, 1]");
    const auto ratio_at = [&](double theta) {
        AffineVolterraModel scaled = model;
        scaled.eta = theta * model.eta;
        for (auto& r : scaled.m.rates) r *= theta;
        const auto psi_lo = scaled.solve_psi(T - t, dt);
        AffineVolterraModel scaled1 = model;
        scaled1.eta = (theta + 1.0) * model.eta;
        for (auto& r : scaled1.m.rates) r *= theta + 1.0;
        const auto psi_hi = scaled1.solve_psi(T - t, dt);
        return esscher_mgf(model, psi_hi, path, t, T, theta + 1.0) /
               esscher_mgf(model, psi_lo, path, t, T, theta);
    };
    double lo = -10.0, hi = 10.0;
    double flo = ratio_at(lo) - observed_ratio;
    double fhi = ratio_at(hi) - observed_ratio;
    if (flo * fhi > 0.0)
        throw CalibrationError("calibrate_esscher: no sign change on [-10, 10]");
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        const double fm = ratio_at(mid) - observed_ratio;
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

AffineVolterraModel affine_retaining_apply(const AffineVolterraModel& model,
                                           const StepFunction& phi) {
    AffineVolterraModel out = model;
    out.b0 = model.b0.plus(phi.scaled(model.A0));
    if (model.A1 != 0.0) {
        if (!phi.is_constant())
            throw ModelError(
                "affine_retaining_apply: A1 != 0 with non-constant phi breaks the affine slope");
        out.b_x = model.b_x + model.A1 * phi.values[0];
    }
    out.validate();
    return out;
}

double price_product(const PricingContext& ctx, const ProductSpec& spec,
                     double r_const_for_calls) {
    spec.validate(ctx.t);
    switch (spec.kind) {
        case ProductKind::survival_benefit: return survival_benefit(ctx, spec.C, spec.T);
        case ProductKind::death_benefit: return death_benefit(ctx, spec.C, spec.T);
        case ProductKind::longevity_bond: return longevity_bond_price(ctx, spec.T);
        case ProductKind::annuity: return annuity_value(ctx, spec.t_prime, spec.x_star);
        case ProductKind::assurance: return assurance_value(ctx, spec.T);
        case ProductKind::endowment: return endowment_value(ctx, spec.C, spec.C2, spec.T);
        case ProductKind::longevity_call:
            return longevity_call_price(ctx.mortality, ctx.psi, ctx.path, ctx.t, spec.T1, spec.T,
                                        spec.D, r_const_for_calls);
    }
    throw InputError("price_product: unknown kind");
}

} // namespace vmort
