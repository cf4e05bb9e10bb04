#include "doctest.h"

#include <cmath>

#include "models.hpp"
#include "oracles.hpp"
#include "vmort/pricing.hpp"
#include "vmort/simulation.hpp"

using namespace vmort;

namespace {

struct Setup {
    AffineVolterraModel model;
    RiccatiSolution psi;
    SamplePath path;
    AffineRateModel rates;
    double t, z;

    PricingContext ctx() const { return PricingContext{model, psi, path, t, rates, z}; }
};

Setup make_setup(const AffineVolterraModel& model, const AffineRateModel& rates, double t,
                 double horizon, double dt, std::uint64_t path_index = 0) {
    Setup s{model, model.solve_psi(horizon - t + 1.0, dt),
            t > 0.0 ? simulate_svie(model, RngPolicy{404}, path_index, t, dt)
                    : empty_path(model.x0, dt),
            rates, t, rates.z0};
    return s;
}

AffineVolterraModel zero_hazard_model() {
    AffineVolterraModel m; // mu = 0
    m.x0 = 0.3;
    m.kernel = constant_kernel(1.0);
    return m;
}

AffineRateModel zero_rate_model() {
    AffineRateModel r;
    r.b0 = 0.0;
    r.mean_rev = 1e-9;
    r.sigma_r = 0.0;
    r.z0 = 0.0;
    return r;
}

} // namespace

TEST_CASE("survival benefit trivial factorizations") {
    const double dt = 0.01;

    SUBCASE("no mortality leaves the bond") {
        const auto s = make_setup(zero_hazard_model(), fixtures::hedging_rates(), 1.0, 6.0, dt);
        CHECK(survival_benefit(s.ctx(), 1.0, 6.0) ==
              doctest::Approx(bond_price(s.rates, 1.0, 6.0, s.z)).epsilon(1e-12));
    }
    SUBCASE("no rates leave the survival probability") {
        const auto s = make_setup(fixtures::projection_a(), zero_rate_model(), 1.0, 6.0, dt);
        SurvivalEvaluator ev(s.model, &s.psi, s.path, 1.0, 6.0);
        CHECK(survival_benefit(s.ctx(), 1.0, 6.0) ==
              doctest::Approx(ev.survival(6.0)).epsilon(1e-9));
    }
}

TEST_CASE("survival benefit against a factorized Monte Carlo oracle") {
    const double dt = 0.02, T = 5.0;
    const auto model = fixtures::projection_a();
    const auto rates = fixtures::annuity_rates();
    const auto s = make_setup(model, rates, 0.0, T, dt);
    const double price = survival_benefit(s.ctx(), 1.0, T);

    const std::size_t n_paths = 4000;
    std::vector<double> disc(n_paths), surv(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        auto mp = simulate_svie(model, RngPolicy{7771}, p, T, dt);
        integrate_hazard(mp, model);
        surv[p] = std::exp(-mp.int_mu.back());
        const auto rp = simulate_rate(rates, RngPolicy{7771}, p, T, dt);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < rp.r.size(); ++i)
            acc += 0.5 * dt * (rp.r[i] + rp.r[i + 1]);
        disc[p] = std::exp(-acc);
    }
    const auto md = oracle::mean_se(disc);
    const auto ms = oracle::mean_se(surv);
    const double mc = md.mean * ms.mean;
    const double se = std::abs(md.mean) * ms.se + std::abs(ms.mean) * md.se;
    CHECK(std::abs(price - mc) < 3.0 * se);
}

TEST_CASE("death benefit limits") {
    const double dt = 0.01;

    SUBCASE("no mortality means nothing is ever paid") {
        const auto s = make_setup(zero_hazard_model(), fixtures::annuity_rates(), 0.5, 8.0, dt);
        CHECK(death_benefit(s.ctx(), 3.0, 8.0) == doctest::Approx(0.0).epsilon(1e-14));
    }
    SUBCASE("no discounting prices the death probability") {
        const auto s = make_setup(fixtures::projection_a(), zero_rate_model(), 1.0, 7.0, dt);
        SurvivalEvaluator ev(s.model, &s.psi, s.path, 1.0, 7.0);
        CHECK(death_benefit(s.ctx(), 1.0, 7.0) ==
              doctest::Approx(1.0 - ev.survival(7.0)).epsilon(1e-9));
    }
}

TEST_CASE("death benefit against a sampled-death-time oracle") {
    // First-crossing sampling needs mu >= 0 pathwise, so this check runs a
    // positivity-safe variant of the projection (the row-A sigma swamps
    // its tiny X0 and sends mu negative on half the paths).
    const double dt = 0.02, T = 8.0;
    AffineVolterraModel model = fixtures::projection_a();
    model.x0 = 0.01;
    model.b0 = StepFunction::constant(0.5 * 0.01);
    model.A0 = 1e-6;
    AffineRateModel rates = fixtures::hedging_rates();
    const auto s = make_setup(model, rates, 0.0, T, dt);
    const double price = death_benefit(s.ctx(), 1.0, T);

    // sample tau by inverting int mu against an exponential draw; pay
    // e^{-int_0^tau r} if tau <= T
    const std::size_t n_paths = 20000;
    std::vector<double> pay(n_paths);
    Rng death_draws(99);
    for (std::size_t p = 0; p < n_paths; ++p) {
        auto mp = simulate_svie(model, RngPolicy{515}, p, T, dt);
        integrate_hazard(mp, model);
        const auto rp = simulate_rate(rates, RngPolicy{515}, p, T, dt);
        const double e = death_draws.exponential();
        double tau = -1.0;
        for (std::size_t i = 0; i + 1 < mp.int_mu.size(); ++i) {
            if (mp.int_mu[i + 1] >= e) {
                const double lo = mp.int_mu[i], hi = mp.int_mu[i + 1];
                tau = (static_cast<double>(i) + (hi > lo ? (e - lo) / (hi - lo) : 1.0)) * dt;
                break;
            }
        }
        if (tau < 0.0) {
            pay[p] = 0.0;
            continue;
        }
        double acc = 0.0;
        const auto k = static_cast<std::size_t>(tau / dt);
        for (std::size_t i = 0; i < k; ++i) acc += 0.5 * dt * (rp.r[i] + rp.r[i + 1]);
        acc += (tau - k * dt) * rp.r[k];
        pay[p] = std::exp(-acc);
    }
    const auto ms = oracle::mean_se(pay);
    CHECK(std::abs(price - ms.mean) < 3.0 * ms.se);
}

TEST_CASE("longevity bond price limits and joint MC") {
    const double dt = 0.02, T = 5.0;

    SUBCASE("limits") {
        const auto s1 = make_setup(zero_hazard_model(), fixtures::annuity_rates(), 0.0, T, dt);
        CHECK(longevity_bond_price(s1.ctx(), T) ==
              doctest::Approx(bond_price(s1.rates, 0.0, T, s1.z)).epsilon(1e-12));
        const auto s2 = make_setup(fixtures::projection_a(), zero_rate_model(), 0.0, T, dt);
        SurvivalEvaluator ev(s2.model, &s2.psi, s2.path, 0.0, T);
        CHECK(longevity_bond_price(s2.ctx(), T) ==
              doctest::Approx(ev.survival(T)).epsilon(1e-9));
    }

    SUBCASE("joint Monte Carlo") {
        const auto model = fixtures::projection_a();
        const auto rates = fixtures::hedging_rates();
        const auto s = make_setup(model, rates, 0.0, T, dt);
        const double price = longevity_bond_price(s.ctx(), T);
        const std::size_t n_paths = 4000;
        std::vector<double> vals(n_paths);
        for (std::size_t p = 0; p < n_paths; ++p) {
            auto mp = simulate_svie(model, RngPolicy{2222}, p, T, dt);
            integrate_hazard(mp, model);
            const auto rp = simulate_rate(rates, RngPolicy{2222}, p, T, dt);
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < rp.r.size(); ++i)
                acc += 0.5 * dt * (rp.r[i] + rp.r[i + 1]);
            vals[p] = std::exp(-acc - mp.int_mu.back());
        }
        const auto ms = oracle::mean_se(vals);
        CHECK(std::abs(price - ms.mean) < 3.0 * ms.se);
    }
}

TEST_CASE("annuity value") {
    const double dt = 0.05;
    const auto model = fixtures::projection_a();
    const auto rates = fixtures::annuity_rates();

    SUBCASE("single-term sum") {
        const auto s = make_setup(model, rates, 10.0, 12.0, dt);
        // t + t' = x* - 1 leaves exactly one summand
        const double one = annuity_value(s.ctx(), 1.0, 12.0);
        CHECK(one == doctest::Approx(survival_benefit(s.ctx(), 1.0, 11.0)).epsilon(1e-12));
    }
    SUBCASE("degenerate models count the summands") {
        const auto s = make_setup(zero_hazard_model(), zero_rate_model(), 2.0, 40.0, dt);
        CHECK(annuity_value(s.ctx(), 3.0, 15.0) == doctest::Approx(10.0).epsilon(1e-9));
    }
    SUBCASE("empty range is an input error") {
        const auto s = make_setup(model, rates, 10.0, 12.0, dt);
        CHECK_THROWS_AS(annuity_value(s.ctx(), 5.0, 12.0), InputError);
    }
    SUBCASE("matches an independent summation oracle") {
        const auto s = make_setup(model, rates, 40.0, 109.0, 0.1, 3);
        const double an = annuity_value(s.ctx(), 20.0, 109.0);
        SurvivalEvaluator ev(s.model, &s.psi, s.path, 40.0, 108.0);
        double acc = 0.0;
        for (double T = 60.0; T <= 108.0 + 1e-9; T += 1.0)
            acc += bond_price(s.rates, 40.0, T, s.z) * ev.survival(T);
        CHECK(an == doctest::Approx(acc).epsilon(1e-12));
    }
}

TEST_CASE("assurance and endowment identities") {
    const double dt = 0.02;
    const auto s = make_setup(fixtures::projection_a(), fixtures::hedging_rates(), 1.0, 9.0, dt);
    const auto ctx = s.ctx();

    CHECK(assurance_value(ctx, 9.0) == death_benefit(ctx, 1.0, 9.0));

    // EN(C1, C2) = C1 B g + C2 AS for random payoff pairs
    Rng rng(5);
    for (int i = 0; i < 5; ++i) {
        const double c1 = 10.0 * rng.uniform(), c2 = 10.0 * rng.uniform();
        const double en = endowment_value(ctx, c1, c2, 9.0);
        const double bg = survival_benefit(ctx, 1.0, 9.0);
        const double as = assurance_value(ctx, 9.0);
        CHECK(en == doctest::Approx(c1 * bg + c2 * as).epsilon(1e-12));
    }

    // C1 = C2 = C collapses to C (AS + B g)
    const double c = 4.2;
    CHECK(endowment_value(ctx, c, c, 9.0) ==
          doctest::Approx(c * (assurance_value(ctx, 9.0) + survival_benefit(ctx, 1.0, 9.0)))
              .epsilon(1e-12));
}

TEST_CASE("longevity call: limits and lognormal MC oracle") {
    // alpha = 1 so psi has a closed form; pricing-measure drift -lam
    const double eta = 0.2, lam = 0.5, sigma = 0.01;
    const double r = 0.01, T = 5.0, T1 = 2.0, b_l = 0.8;
    const auto psi = solve_riccati_volterra(constant_kernel(1.0), eta, -lam, 0.0, 0.0, T, 1e-3);

    SUBCASE("tiny strike returns the bond") {
        CHECK(longevity_call_value(psi, b_l, sigma, 0.0, T1, T, 1e-12, r) ==
              doctest::Approx(b_l).epsilon(1e-10));
    }
    SUBCASE("zero volatility returns the discounted intrinsic value") {
        CHECK(longevity_call_value(psi, b_l, 0.0, 0.0, T1, T, 0.78, r) ==
              doctest::Approx(std::max(b_l - 0.78 * std::exp(-r * T1), 0.0)).epsilon(1e-12));
        CHECK(longevity_call_value(psi, b_l, 0.0, 0.0, T1, T, 0.9, r) == 0.0);
    }
    SUBCASE("strike must be positive") {
        CHECK_THROWS_AS(longevity_call_value(psi, b_l, sigma, 0.0, T1, T, 0.0, r), InputError);
    }

    SUBCASE("integrated-variance variant matches a 1e5-draw lognormal oracle") {
        // total variance of the stated dynamics
        const int nq = 2000;
        double v2 = 0.0;
        for (int k = 0; k <= nq; ++k) {
            const double s = T1 * k / nq;
            const double p = psi.value(T - s) * sigma;
            v2 += (k == 0 || k == nq ? 0.5 : 1.0) * p * p;
        }
        v2 *= T1 / nq;
        const double v = std::sqrt(v2);
        const double price =
            longevity_call_value(psi, b_l, sigma, 0.0, T1, T, 0.8, r,
                                 CallVariant::integrated_variance);
        Rng rng(314);
        const std::size_t n = 100000;
        std::vector<double> pays(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double bT = b_l * std::exp(r * T1 - 0.5 * v2 + v * rng.normal());
            pays[i] = std::exp(-r * T1) * std::max(bT - 0.8, 0.0);
        }
        const auto ms = oracle::mean_se(pays);
        CHECK(std::abs(price - ms.mean) < 3.0 * ms.se);
        // and the formula is the exact lognormal expectation
        CHECK(price == doctest::Approx(oracle::bs_call(b_l, 0.8, r, T1, v)).epsilon(1e-12));
    }
}

TEST_CASE("esscher transform mgf and calibration") {
    const double dt = 0.02, T = 10.0;
    const auto model = fixtures::projection_a();
    const auto path = empty_path(model.x0, dt);

    SUBCASE("theta = 0 gives 1, theta = 1 gives g") {
        AffineVolterraModel m0 = model;
        m0.eta = 0.0;
        for (auto& x : m0.m.rates) x = 0.0;
        const auto psi0 = m0.solve_psi(T, dt);
        CHECK(esscher_mgf(model, psi0, path, 0.0, T, 0.0) == 1.0);

        const auto psi1 = model.solve_psi(T, dt);
        SurvivalEvaluator ev(model, &psi1, path, 0.0, T);
        CHECK(esscher_mgf(model, psi1, path, 0.0, T, 1.0) ==
              doctest::Approx(ev.survival(T)).epsilon(1e-12));
    }

    SUBCASE("calibration roundtrips a planted theta") {
        for (double theta_star : {0.0, 0.5}) {
            AffineVolterraModel lo = model, hi = model;
            lo.eta = theta_star * model.eta;
            hi.eta = (theta_star + 1.0) * model.eta;
            for (auto& x : lo.m.rates) x *= theta_star;
            for (auto& x : hi.m.rates) x *= theta_star + 1.0;
            const double ratio = esscher_mgf(model, hi.solve_psi(T, dt), path, 0.0, T,
                                             theta_star + 1.0) /
                                 esscher_mgf(model, lo.solve_psi(T, dt), path, 0.0, T,
                                             theta_star);
            const double got = calibrate_esscher(model, path, 0.0, T, ratio, dt);
            CHECK(std::abs(got - theta_star) < 1e-6);
        }
    }

    SUBCASE("unreachable ratio raises a calibration error") {
        CHECK_THROWS_AS(calibrate_esscher(model, path, 0.0, T, 1.5, dt), CalibrationError);
    }

    SUBCASE("log M is convex in theta") {
        std::vector<double> logm;
        for (double th = -1.0; th <= 2.0 + 1e-9; th += 0.5) {
            AffineVolterraModel sc = model;
            sc.eta = th * model.eta;
            for (auto& x : sc.m.rates) x *= th;
            logm.push_back(std::log(esscher_mgf(model, sc.solve_psi(T, dt), path, 0.0, T, th)));
        }
        for (std::size_t i = 1; i + 1 < logm.size(); ++i)
            CHECK(logm[i + 1] - 2.0 * logm[i] + logm[i - 1] >= -1e-8);
    }
}

TEST_CASE("affine retaining transform") {
    const auto model = fixtures::hedging_mortality(); // A0 = 0.0025

    SUBCASE("zero tilt is the identity") {
        const auto out = affine_retaining_apply(model, StepFunction::constant(0.0));
        CHECK(out.b0.value(1.0) == model.b0.value(1.0));
        CHECK(out.b_x == model.b_x);
        CHECK(out.A0 == model.A0);
        CHECK(out.A1 == model.A1);
    }
    SUBCASE("VV shifts the drift level by sigma^2 phi") {
        const auto out = affine_retaining_apply(model, StepFunction::constant(0.1));
        CHECK(out.b0.value(0.0) == doctest::Approx(0.1 + 0.05 * 0.05 * 0.1).epsilon(1e-15));
        CHECK(out.b_x == model.b_x);
    }
    SUBCASE("VCIR shifts the slope and keeps the affine structure") {
        AffineVolterraModel vcir = model;
        vcir.A0 = 0.0;
        vcir.A1 = 0.04;
        const auto out = affine_retaining_apply(vcir, StepFunction::constant(0.25));
        CHECK(out.b_x == doctest::Approx(vcir.b_x + 0.04 * 0.25));
        CHECK(out.A1 == vcir.A1);
        CHECK_NOTHROW(out.validate());
        // time-varying tilt would break the constant slope
        CHECK_THROWS_AS(affine_retaining_apply(vcir, StepFunction({0.0, 1.0}, {0.1, 0.2})),
                        ModelError);
    }
    SUBCASE("step tilt produces a step drift level") {
        const auto out = affine_retaining_apply(model, StepFunction({0.0, 2.0}, {0.1, 0.3}));
        CHECK(out.b0.value(1.0) == doctest::Approx(0.1 + 0.0025 * 0.1));
        CHECK(out.b0.value(3.0) == doctest::Approx(0.1 + 0.0025 * 0.3));
    }
}

TEST_CASE("pricing bounds") {
    const double dt = 0.02;
    // positive-hazard model and positive rates for the bound checks
    AffineVolterraModel m;
    m.x0 = 0.01;
    m.b0 = StepFunction::constant(0.005);
    m.b_x = -0.5;
    m.A0 = 1e-6;
    m.eta = 0.2;
    m.m = fixtures::baseline_hazard();
    m.kernel = fractional_kernel(1.0, 1.33);
    const auto rates = fixtures::hedging_rates();
    const auto s = make_setup(m, rates, 2.0, 30.0, dt);
    const auto ctx = s.ctx();
    for (double T : {3.0, 10.0, 25.0}) {
        const double bl = longevity_bond_price(ctx, T);
        CHECK(bl >= 0.0);
        CHECK(bl <= bond_price(rates, 2.0, T, s.z));
        const double as = assurance_value(ctx, T);
        CHECK(as >= -1e-12);
        CHECK(as <= 1.0 + 1e-12);
    }
    CHECK(annuity_value(ctx, 1.0, 20.0) <= 17.0); // at most the number of terms
}
