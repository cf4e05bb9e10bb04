#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "vmort/riccati.hpp"

using namespace vmort;

TEST_CASE("riccati: zero loading gives psi = 0") {
    const auto sol = solve_riccati_volterra(fractional_kernel(1.0, 1.33), 0.0, -0.5, 1e-4, 0.0,
                                            5.0, 0.01);
    for (std::size_t i = 0; i < sol.psi.size(); ++i) CHECK(sol.psi[i] == 0.0);
}

TEST_CASE("riccati: linear case closed form") {
    // constant K = 1, A1 = 0 reduces to psi' = -eta + B psi
    const auto sol =
        solve_riccati_volterra(constant_kernel(1.0), 0.2, -0.5, 1e-4, 0.0, 2.0, 1e-3);
    const double exact = -(0.2 / 0.5) * (1.0 - std::exp(-0.5));
    CHECK(sol.value(1.0) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(sol.value(1.0) == doctest::Approx(-0.157388).epsilon(1e-4));
    CHECK(sol.value(0.0) == 0.0);
}

TEST_CASE("riccati: CIR-type quadratic term against an ODE integrator") {
    const double eta = 1.0, B = -0.8, A1 = 0.09;
    const double dt = 1e-3, horizon = 2.0;
    const auto sol = solve_riccati_volterra(constant_kernel(1.0), eta, B, 0.0, A1, horizon, dt);
    const auto ode = oracle::rk4(
        [&](double, double p) { return -eta + B * p + 0.5 * A1 * p * p; }, 0.0, 0.0, horizon,
        20000);
    const std::size_t n = sol.psi.size() - 1;
    for (std::size_t i = 0; i <= n; i += 50) {
        const double tau = i * dt;
        const std::size_t oi = static_cast<std::size_t>(std::llround(tau / horizon * 20000));
        CHECK(std::abs(sol.psi[i] - ode[oi]) < 1e-5);
    }
}

TEST_CASE("riccati: Markovian-limit equivalence on [0, 15]") {
    struct Params {
        double eta, B, A0, A1;
    };
    // survival study rows (VV) and the hedging set (eta = 1)
    const Params sets[] = {{0.2, -0.5, 1e-4, 0.0}, {1.0, -0.5, 0.0025, 0.0}};
    for (const auto& p : sets) {
        const double dt = 2e-3, horizon = 15.0;
        const auto sol =
            solve_riccati_volterra(constant_kernel(1.0), p.eta, p.B, p.A0, p.A1, horizon, dt);
        const auto ode = oracle::rk4(
            [&](double, double v) { return -p.eta + p.B * v + 0.5 * p.A1 * v * v; }, 0.0, 0.0,
            horizon, 60000);
        double worst = 0.0;
        for (std::size_t i = 0; i < sol.psi.size(); i += 25) {
            const double tau = i * dt;
            const auto oi = static_cast<std::size_t>(std::llround(tau / horizon * 60000));
            worst = std::max(worst, std::abs(sol.psi[i] - ode[oi]));
        }
        CAPTURE(p.eta);
        CHECK(worst < 1e-5);
    }
}

TEST_CASE("riccati: grid refinement converges at order >= 1 on the fractional kernel") {
    const auto kernel = fractional_kernel(1.0, 1.33);
    const double horizon = 2.0;
    double prev_diff = 0.0;
    double dt = 0.02;
    const auto at = [&](const RiccatiSolution& s, double tau) { return s.value(tau); };
    const auto coarse = solve_riccati_volterra(kernel, 0.2, -0.5, 1e-4, 0.0, horizon, dt);
    const auto mid = solve_riccati_volterra(kernel, 0.2, -0.5, 1e-4, 0.0, horizon, dt / 2);
    const auto fine = solve_riccati_volterra(kernel, 0.2, -0.5, 1e-4, 0.0, horizon, dt / 4);
    const double d1 = std::abs(at(coarse, horizon) - at(mid, horizon));
    const double d2 = std::abs(at(mid, horizon) - at(fine, horizon));
    prev_diff = d1;
    CHECK(d2 < 0.55 * prev_diff); // order >= 1 halves the change
}

TEST_CASE("riccati: sign propagation") {
    // eta > 0, B <= 0, A1 = 0 forces psi <= 0
    for (const auto& kernel :
         {constant_kernel(1.0), fractional_kernel(1.0, 1.33), exponential_kernel(1.0, 0.3)}) {
        const auto sol = solve_riccati_volterra(kernel, 0.7, -0.2, 1e-4, 0.0, 4.0, 0.01);
        for (std::size_t i = 0; i < sol.psi.size(); ++i) CHECK(sol.psi[i] <= 1e-15);
    }
}

TEST_CASE("riccati: blow-up raises a divergence error with a time") {
    try {
        solve_riccati_volterra(constant_kernel(1.0), -5.0, 2.0, 0.0, 8.0, 50.0, 0.01);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.time > 0.0);
        CHECK(e.time <= 50.0);
    }
}

TEST_CASE("affine odes: zero data stays zero") {
    AffineRateModel m;
    m.b0 = 0.01;
    m.mean_rev = 0.5;
    m.sigma_r = 0.3;
    const auto c = solve_affine_odes(m, 0.0, 0.0, 0.0, 0.0, 0.0, 2.0, 1e-3);
    for (std::size_t i = 0; i < c.beta_tilde.size(); ++i) {
        CHECK(c.alpha_tilde[i] == 0.0);
        CHECK(c.beta_tilde[i] == 0.0);
        CHECK(c.alpha_hat[i] == 0.0);
        CHECK(c.beta_hat[i] == 0.0);
    }
}

TEST_CASE("affine odes: Vasicek closed form") {
    AffineRateModel m;
    m.b0 = 0.0;
    m.mean_rev = 0.5;
    m.sigma_r = 0.0;
    const auto c = solve_affine_odes(m, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1e-3);
    CHECK(c.beta_tilde.value(1.0) ==
          doctest::Approx(-(1.0 - std::exp(-0.5)) / 0.5).epsilon(1e-9));
    CHECK(c.beta_tilde.value(1.0) == doctest::Approx(-0.786939).epsilon(1e-5));
    CHECK(c.beta_tilde[0] == 0.0); // terminal condition, exactly
    CHECK(c.alpha_tilde[0] == 0.0);
}

TEST_CASE("affine odes: cross-check against the closed-form bond coefficients") {
    AffineRateModel m;
    m.b0 = 0.01;
    m.mean_rev = 0.5;
    m.sigma_r = 0.3;
    const auto c = solve_affine_odes(m, 0.0, 1.0, 0.0, 0.0, 0.0, 20.0, 1e-3);
    for (double tau : {0.5, 1.0, 5.0, 10.0, 20.0}) {
        const BondCoeffs cf = vasicek_coeffs(m, 1.0, tau);
        CHECK(c.beta_tilde.value(tau) == doctest::Approx(cf.beta).epsilon(1e-8));
        CHECK(c.alpha_tilde.value(tau) == doctest::Approx(cf.alpha).epsilon(1e-8));
    }
}

TEST_CASE("affine odes: hat functions carry terminal data") {
    AffineRateModel m;
    m.b0 = 0.02;
    m.mean_rev = 0.6;
    m.sigma_r = 0.01;
    const auto c = solve_affine_odes(m, 0.0, 1.0, 0.0, 0.7, 0.3, 2.0, 1e-3);
    CHECK(c.beta_hat[0] == 0.7);
    CHECK(c.alpha_hat[0] == 0.3);
    // beta^ decays at the mean-reversion rate when A~1 = 0
    CHECK(c.beta_hat.value(2.0) == doctest::Approx(0.7 * std::exp(-0.6 * 2.0)).epsilon(1e-9));
}
