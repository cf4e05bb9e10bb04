#include "doctest.h"

#include <cmath>

#include "models.hpp"
#include "oracles.hpp"
#include "vmort/riccati.hpp"
#include "vmort/simulation.hpp"

using namespace vmort;

TEST_CASE("bond price boundary and degenerate cases") {
    const auto m = fixtures::annuity_rates();
    CHECK(bond_price(m, 3.0, 3.0, 0.07) == 1.0);
    CHECK_THROWS_AS(bond_price(m, 3.0, 2.0, 0.07), InputError);

    AffineRateModel frozen;
    frozen.b0 = 0.0;
    frozen.mean_rev = 1e-9; // no pull, no diffusion: r stays at z
    frozen.sigma_r = 0.0;
    CHECK(bond_price(frozen, 0.0, 4.0, 0.03) == doctest::Approx(std::exp(-0.12)).epsilon(1e-6));
}

TEST_CASE("bond price equals the ODE solver at the annuity-study parameters") {
    const auto m = fixtures::annuity_rates();
    const auto c = solve_affine_odes(m, 0.0, 1.0, 0.0, 0.0, 0.0, 20.0, 1e-3);
    const double got = bond_price(m, 40.0, 60.0, 0.01);
    const double ode = std::exp(c.alpha_tilde.value(20.0) + c.beta_tilde.value(20.0) * 0.01);
    CHECK(got == doctest::Approx(ode).epsilon(1e-8));
}

TEST_CASE("bond price monotone decreasing in maturity for positive rates") {
    AffineRateModel m;
    m.b0 = 0.02;
    m.mean_rev = 0.6;
    m.sigma_r = 0.01;
    double prev = 1.0;
    for (double T = 0.5; T <= 15.0; T += 0.5) {
        const double b = bond_price(m, 0.0, T, 0.04);
        CHECK(b < prev);
        CHECK(vasicek_coeffs(m, 1.0, T).beta <= 0.0);
        prev = b;
    }
}

TEST_CASE("bond_price_dT matches a finite difference") {
    const auto m = fixtures::hedging_rates();
    const double h = 1e-6;
    for (double T : {1.0, 5.0, 12.0}) {
        const double fd =
            (bond_price(m, 0.0, T + h, 0.04) - bond_price(m, 0.0, T - h, 0.04)) / (2.0 * h);
        CHECK(bond_price_dT(m, 0.0, T, 0.04) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("auxiliary discounts: degenerate and identity cases") {
    SUBCASE("deterministic constant rate") {
        AffineRateModel m;
        m.b0 = 0.05 * 1e-9; // theta = r0 so the path is flat
        m.mean_rev = 1e-9;
        m.sigma_r = 0.0;
        const auto [dd, ab] = auxiliary_discounts(m, StepFunction::constant(0.1),
                                                  StepFunction::constant(0.1), 0.0, 2.0, 5.0,
                                                  0.05);
        CHECK(dd == doctest::Approx(std::exp(-2.0 * 0.05 * 5.0)).epsilon(1e-6));
        CHECK(ab == doctest::Approx(std::exp(-0.05 * 2.0)).epsilon(1e-6));
    }

    SUBCASE("zero rate risk premium collapses the acute bond to the bond price") {
        const auto m = fixtures::hedging_rates();
        const auto [dd, ab] = auxiliary_discounts(m, StepFunction::constant(0.3),
                                                  StepFunction::constant(0.0), 1.0, 4.0, 5.0,
                                                  0.03);
        CHECK(ab == bond_price(m, 1.0, 4.0, 0.03)); // identical code path, bitwise
        (void)dd;
    }

    SUBCASE("ordering violations are input errors") {
        const auto m = fixtures::hedging_rates();
        const auto theta = StepFunction::constant(0.1);
        CHECK_THROWS_AS(auxiliary_discounts(m, theta, theta, 2.0, 1.0, 5.0, 0.03), InputError);
        CHECK_THROWS_AS(auxiliary_discounts(m, theta, theta, 0.0, 6.0, 5.0, 0.03), InputError);
    }
}

TEST_CASE("auxiliary discounts: beta_1 closed form and shifted-measure MC") {
    const auto m = fixtures::hedging_rates();
    const double T0 = 5.0, theta_mkt = 0.1;

    // beta_1 = -2 (1 - e^{-k T0}) / k, independent of the drift shift
    const BondCoeffs c1 = vasicek_coeffs(m, 2.0, T0);
    CHECK(c1.beta ==
          doctest::Approx(-2.0 * (1.0 - std::exp(-m.mean_rev * T0)) / m.mean_rev).epsilon(1e-12));

    // E^hat[e^{-2 int r}] against Monte Carlo under the tilted drift
    AffineRateModel tilted = m;
    tilted.b0 = m.b0 - 2.0 * theta_mkt * m.sigma_r;
    const double dt = 0.005;
    const std::size_t n_paths = 10000;
    std::vector<double> vals(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        const auto rp = simulate_rate(tilted, RngPolicy{31337}, p, T0, dt);
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < rp.r.size(); ++i)
            acc += 0.5 * dt * (rp.r[i] + rp.r[i + 1]);
        vals[p] = std::exp(-2.0 * acc);
    }
    const auto ms = oracle::mean_se(vals);
    const auto [dd, ab] = auxiliary_discounts(m, StepFunction::constant(0.1),
                                              StepFunction::constant(theta_mkt), 0.0, T0, T0,
                                              m.z0);
    CHECK(std::abs(dd - ms.mean) < 3.0 * ms.se);
    (void)ab;
}

TEST_CASE("auxiliary discounts: step-function risk price matches the ODE route") {
    const auto m = fixtures::hedging_rates();
    const StepFunction theta({0.0, 2.0, 3.5}, {0.05, 0.2, -0.1});
    const double t = 0.5, s = 5.0, T0 = 5.0, r_t = 0.03;

    const auto [dd, ab] =
        auxiliary_discounts(m, StepFunction::constant(0.0), theta, t, s, T0, r_t);

    // dense-quadrature oracle: alpha correction is int_t^s delta(u) beta(s-u) du
    const auto quad_corr = [&](double scale, double a, double b) {
        const int nq = 400000;
        const double h = (b - a) / nq;
        double acc = 0.0;
        for (int k = 0; k <= nq; ++k) {
            const double u = a + k * h;
            const double delta = -scale * theta.value(u) * m.sigma_r;
            const double beta = vasicek_coeffs(m, scale, b - u).beta;
            acc += (k == 0 || k == nq ? 0.5 : 1.0) * delta * beta;
        }
        return acc * h;
    };
    const double dd_quad = std::exp(vasicek_coeffs(m, 2.0, T0 - t).alpha +
                                    quad_corr(2.0, t, T0) + vasicek_coeffs(m, 2.0, T0 - t).beta * r_t);
    CHECK(dd == doctest::Approx(dd_quad).epsilon(1e-7)); // oracle jump error ~2e-9
    const double ab_quad = std::exp(vasicek_coeffs(m, 1.0, s - t).alpha + quad_corr(1.0, t, s) +
                                    vasicek_coeffs(m, 1.0, s - t).beta * r_t);
    CHECK(ab == doctest::Approx(ab_quad).epsilon(1e-7));

    // RK4 route crosses the jumps mid-stage, so it only holds to ~1e-5
    const StepFunction shift2 = theta.scaled(-m.sigma_r);
    const auto ode2 = solve_affine_odes(m, 0.0, 1.0, 0.0, 0.0, 0.0, s, 1e-4, &shift2);
    const double ab_ode =
        std::exp(ode2.alpha_tilde.value(s - t) + ode2.beta_tilde.value(s - t) * r_t);
    CHECK(ab == doctest::Approx(ab_ode).epsilon(1e-5));
}

TEST_CASE("step function algebra") {
    const StepFunction f({0.0, 1.0}, {2.0, 3.0});
    const StepFunction g({0.0, 0.5}, {1.0, -1.0});
    const StepFunction s = f.plus(g);
    CHECK(s.value(0.25) == 3.0);
    CHECK(s.value(0.75) == 1.0);
    CHECK(s.value(1.5) == 2.0);
    CHECK(f.integral(0.0, 2.0) == doctest::Approx(5.0));
    CHECK(f.scaled(2.0).value(1.5) == 6.0);
}
