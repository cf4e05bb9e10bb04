#include "vmort/riccati.hpp"

#include <array>
#include <cmath>

namespace vmort {

namespace {

constexpr double kBlowUp = 1e8;

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t riccati_model_id(const KernelSpec& kernel, double eta, double B, double A1) {
    std::array<double, 7> buf{static_cast<double>(static_cast<int>(kernel.family)),
                              kernel.c,
                              kernel.uses_alpha() ? kernel.alpha : 0.0,
                              (kernel.family == KernelFamily::exponential ||
                               kernel.family == KernelFamily::gamma)
                                  ? kernel.lambda
                                  : 0.0,
                              eta,
                              B,
                              A1};
    return fnv1a(buf.data(), sizeof(buf));
}

RiccatiSolution solve_riccati_volterra(const KernelSpec& kernel, double eta, double B, double A0,
                                       double A1, double horizon, double dt) {
    (void)A0; // enters Y, not psi
    kernel.validate();
    const std::size_t n = steps_for(horizon, dt);
    const std::vector<double> w = kernel_cell_weights(kernel, dt, n);

    const auto rhs = [&](double p) { return -eta + B * p + 0.5 * A1 * p * p; };

    std::vector<double> psi(n + 1, 0.0);
    std::vector<double> g(n + 1, 0.0);
    g[0] = rhs(0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        // history cells with trapezoidal endpoint values, exact K weights
        double base = 0.0;
        for (std::size_t j = 0; j + 1 < i; ++j) base += 0.5 * (g[j] + g[j + 1]) * w[i - j];
        const double predicted = base + w[1] * g[i - 1];
        psi[i] = base + 0.5 * w[1] * (g[i - 1] + rhs(predicted));
        if (!std::isfinite(psi[i]) || std::abs(psi[i]) > kBlowUp)
            throw DivergenceError("solve_riccati_volterra: blow-up",
                                  static_cast<double>(i) * dt);
        g[i] = rhs(psi[i]);
    }
    return RiccatiSolution{GridFunction(0.0, dt, std::move(psi)), eta,
                           riccati_model_id(kernel, eta, B, A1)};
}

AffineOdeCoefficients solve_affine_odes(const AffineRateModel& model, double lambda0,
                                        double lambda1, double c1, double c2, double c3, double T,
                                        double dt, const StepFunction* drift_shift) {
    model.validate();
    const std::size_t n = steps_for(T, dt);
    const double h = dt;
    const double k = model.mean_rev;
    const double a0 = model.sigma_r * model.sigma_r; // A~0; A~1 = 0 (Vasicek)

    const auto b0_at = [&](double t) {
        return model.b0 + (drift_shift ? drift_shift->value(t) : 0.0);
    };

    // State y = (alpha~, beta~, alpha^, beta^); forward in tau = T - t.
    using State = std::array<double, 4>;
    const auto deriv = [&](double tau, const State& y) {
        const double b0 = b0_at(T - tau);
        State d;
        d[1] = -lambda1 - k * y[1];                        // beta~'
        d[0] = -lambda0 + b0 * y[1] + 0.5 * a0 * y[1] * y[1]; // alpha~'
        d[3] = -k * y[3];                                  // beta^'
        d[2] = b0 * y[3] + a0 * y[1] * y[3];               // alpha^'
        return d;
    };

    std::vector<double> at(n + 1), bt(n + 1), ah(n + 1), bh(n + 1);
    State y{0.0, c1, c3, c2};
    at[0] = y[0];
    bt[0] = y[1];
    ah[0] = y[2];
    bh[0] = y[3];
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = static_cast<double>(i) * h;
        const State k1 = deriv(tau, y);
        State y2;
        for (int j = 0; j < 4; ++j) y2[j] = y[j] + 0.5 * h * k1[j];
        const State k2 = deriv(tau + 0.5 * h, y2);
        State y3;
        for (int j = 0; j < 4; ++j) y3[j] = y[j] + 0.5 * h * k2[j];
        const State k3 = deriv(tau + 0.5 * h, y3);
        State y4;
        for (int j = 0; j < 4; ++j) y4[j] = y[j] + h * k3[j];
        const State k4 = deriv(tau + h, y4);
        for (int j = 0; j < 4; ++j)
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        for (double v : y)
            if (!std::isfinite(v))
                throw DivergenceError("solve_affine_odes: non-finite state", tau + h);
        at[i + 1] = y[0];
        bt[i + 1] = y[1];
        ah[i + 1] = y[2];
        bh[i + 1] = y[3];
    }
    return AffineOdeCoefficients{GridFunction(0.0, h, std::move(at)),
                                 GridFunction(0.0, h, std::move(bt)),
                                 GridFunction(0.0, h, std::move(ah)),
                                 GridFunction(0.0, h, std::move(bh))};
}

} // namespace vmort
