#include "vmort/kernels.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

namespace vmort {

namespace {

// 1/Gamma(x), with the convention 1/Gamma = 0 at the poles (non-positive
// integers). Needed by the Mittag-Leffler asymptotic series.
double reciprocal_gamma(double x) {
    if (x <= 0.0) {
        const double r = std::round(x);
        if (std::abs(x - r) < 1e-12) return 0.0;
    }
    return 1.0 / std::tgamma(x);
}

double mittag_leffler_series(double alpha, double beta, double z) {
    // Terms via exp(n ln|z| - lgamma(alpha n + beta)) to dodge overflow in
    // intermediate powers; Kahan compensation tames the cancellation for
    // moderately negative z.
    const double ln_az = std::log(std::abs(z));
    double sum = 0.0, comp = 0.0;
    constexpr int max_terms = 4000;
    for (int n = 0; n < max_terms; ++n) {
        double term;
        if (n == 0) {
            term = reciprocal_gamma(beta);
        } else {
            const double ln_t = static_cast<double>(n) * ln_az - std::lgamma(alpha * n + beta);
            term = std::exp(ln_t);
            if (z < 0.0 && (n & 1)) term = -term;
        }
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (n > 1 && std::abs(term) <= 1e-16 * std::abs(sum) + 1e-300) return sum;
    }
    throw AccuracyError("mittag_leffler: series did not converge");
}

double mittag_leffler_asymptotic(double alpha, double beta, double z) {
    // E_{a,b}(z) ~ -sum_{k>=1} z^-k / Gamma(b - a k) for z -> -inf. Terms
    // at reciprocal-gamma poles vanish and must not trip the divergence
    // stop, which compares against the last nonzero magnitude.
    double sum = 0.0;
    double zk = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 24; ++k) {
        zk *= z;
        const double term = -reciprocal_gamma(beta - alpha * k) / zk;
        if (term == 0.0) continue;
        if (std::abs(term) > prev) break; // divergent tail reached
        sum += term;
        prev = std::abs(term);
    }
    return sum;
}

} // namespace

void KernelSpec::validate() const {
    if (!(c > 0.0)) throw DomainError("KernelSpec: c must be positive");
    if (uses_alpha() && !(alpha > 0.5 && alpha < 2.0))
        throw DomainError("KernelSpec: alpha must lie in (0.5, 2)");
    if (family == KernelFamily::exponential || family == KernelFamily::gamma) {
        if (!(lambda >= 0.0)) throw DomainError("KernelSpec: lambda must be nonnegative");
    }
}

KernelSpec constant_kernel(double c) {
    KernelSpec k{KernelFamily::constant, c, 1.0, 0.0};
    k.validate();
    return k;
}

KernelSpec fractional_kernel(double c, double alpha) {
    KernelSpec k{KernelFamily::fractional, c, alpha, 0.0};
    k.validate();
    return k;
}

KernelSpec exponential_kernel(double c, double lambda) {
    KernelSpec k{KernelFamily::exponential, c, 1.0, lambda};
    k.validate();
    return k;
}

KernelSpec gamma_kernel(double c, double alpha, double lambda) {
    KernelSpec k{KernelFamily::gamma, c, alpha, lambda};
    k.validate();
    return k;
}

double mittag_leffler(double alpha, double beta, double z) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(z))
        throw DomainError("mittag_leffler: require alpha > 0, beta > 0, finite z");
    if (z == 0.0) return reciprocal_gamma(beta);
    if (z < -15.0) return mittag_leffler_asymptotic(alpha, beta, z);
    const double value = mittag_leffler_series(alpha, beta, z);
    if (!std::isfinite(value)) throw AccuracyError("mittag_leffler: overflow in series");
    return value;
}

double eval_kernel(const KernelSpec& spec, double t) {
    spec.validate();
    if (t < 0.0) throw DomainError("eval_kernel: t must be nonnegative");
    if (t == 0.0 && spec.singular_at_zero())
        throw DomainError("eval_kernel: kernel singular at t=0");
    switch (spec.family) {
        case KernelFamily::constant:
            return spec.c;
        case KernelFamily::fractional:
            return spec.c * std::pow(t, spec.alpha - 1.0) / std::tgamma(spec.alpha);
        case KernelFamily::exponential:
            return spec.c * std::exp(-spec.lambda * t);
        case KernelFamily::gamma:
            return spec.c * std::exp(-spec.lambda * t) * std::pow(t, spec.alpha - 1.0) /
                   std::tgamma(spec.alpha);
    }
    throw DomainError("eval_kernel: unknown family");
}

double eval_resolvent(const KernelSpec& spec, double t) {
    spec.validate();
    if (t < 0.0) throw DomainError("eval_resolvent: t must be nonnegative");
    if (t == 0.0 && spec.singular_at_zero())
        throw DomainError("eval_resolvent: resolvent singular at t=0");
    switch (spec.family) {
        case KernelFamily::constant:
            return spec.c * std::exp(-spec.c * t);
        case KernelFamily::fractional:
            return spec.c * std::pow(t, spec.alpha - 1.0) *
                   mittag_leffler(spec.alpha, spec.alpha, -spec.c * std::pow(t, spec.alpha));
        case KernelFamily::exponential:
            return spec.c * std::exp(-spec.lambda * t) * std::exp(-spec.c * t);
        case KernelFamily::gamma:
            return spec.c * std::exp(-spec.lambda * t) * std::pow(t, spec.alpha - 1.0) *
                   mittag_leffler(spec.alpha, spec.alpha, -spec.c * std::pow(t, spec.alpha));
    }
    throw DomainError("eval_resolvent: unknown family");
}

double kernel_integral(const KernelSpec& spec, double t) {
    spec.validate();
    if (t < 0.0) throw DomainError("kernel_integral: t must be nonnegative");
    if (t == 0.0) return 0.0;
    switch (spec.family) {
        case KernelFamily::constant:
            return spec.c * t;
        case KernelFamily::fractional:
            return spec.c * std::pow(t, spec.alpha) / std::tgamma(spec.alpha + 1.0);
        case KernelFamily::exponential:
            if (spec.lambda == 0.0) return spec.c * t;
            return spec.c * (1.0 - std::exp(-spec.lambda * t)) / spec.lambda;
        case KernelFamily::gamma:
            if (spec.lambda == 0.0)
                return spec.c * std::pow(t, spec.alpha) / std::tgamma(spec.alpha + 1.0);
            // int_0^t e^(-l s) s^(a-1)/Gamma(a) ds = P(a, l t) / l^a
            return spec.c * boost::math::gamma_p(spec.alpha, spec.lambda * t) /
                   std::pow(spec.lambda, spec.alpha);
    }
    throw DomainError("kernel_integral: unknown family");
}

std::vector<double> kernel_cell_weights(const KernelSpec& spec, double dt, std::size_t n) {
    if (dt <= 0.0) throw InputError("kernel_cell_weights: dt must be positive");
    std::vector<double> w(n + 1, 0.0);
    double prev = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
        const double cur = kernel_integral(spec, static_cast<double>(m) * dt);
        w[m] = cur - prev;
        prev = cur;
    }
    return w;
}

GridFunction sample_kernel(const KernelSpec& spec, double dt, std::size_t n) {
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = eval_kernel(spec, static_cast<double>(i) * dt);
    return GridFunction(0.0, dt, std::move(v));
}

GridFunction sample_resolvent(const KernelSpec& spec, double dt, std::size_t n) {
    std::vector<double> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = eval_resolvent(spec, static_cast<double>(i) * dt);
    return GridFunction(0.0, dt, std::move(v));
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    if (std::abs(f.t0) > 1e-12 || std::abs(g.t0) > 1e-12)
        throw GridError("convolve: grids must start at t0=0");
    if (!f.same_grid(g)) throw GridError("convolve: mismatched grids");
    const std::size_t n = std::min(f.size(), g.size());
    const double dt = f.dt;
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double acc = 0.5 * (f[i] * g[0] + f[0] * g[i]);
        for (std::size_t j = 1; j < i; ++j) acc += f[i - j] * g[j];
        out[i] = acc * dt;
    }
    return GridFunction(0.0, dt, std::move(out));
}

GridFunction resolvent_second_kind(const GridFunction& F) {
    if (std::abs(F.t0) > 1e-12) throw GridError("resolvent_second_kind: grid must start at 0");
    const std::size_t n = F.size();
    const double dt = F.dt;
    std::vector<double> R(n, 0.0);
    R[0] = F[0];
    const double diag = 1.0 + 0.5 * dt * F[0];
    for (std::size_t i = 1; i < n; ++i) {
        double acc = 0.5 * F[i] * R[0];
        for (std::size_t j = 1; j < i; ++j) acc += F[i - j] * R[j];
        R[i] = (F[i] - dt * acc) / diag;
        if (!std::isfinite(R[i]))
            throw DivergenceError("resolvent_second_kind: non-finite step",
                                  static_cast<double>(i) * dt);
    }
    return GridFunction(0.0, dt, std::move(R));
}

ResolventPair e_b(const KernelSpec& spec, double B, double horizon, double dt) {
    const std::size_t n = steps_for(horizon, dt);
    const GridFunction K = sample_kernel(spec, dt, n);
    std::vector<double> mkb(K.size());
    for (std::size_t i = 0; i < K.size(); ++i) mkb[i] = -K[i] * B;
    GridFunction r_b = resolvent_second_kind(GridFunction(0.0, dt, std::move(mkb)));
    GridFunction rk = convolve(r_b, K);
    std::vector<double> eb(K.size());
    for (std::size_t i = 0; i < K.size(); ++i) eb[i] = K[i] - rk[i];
    return {std::move(r_b), GridFunction(0.0, dt, std::move(eb))};
}

} // namespace vmort
