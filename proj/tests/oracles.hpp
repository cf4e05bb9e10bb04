#ifndef VMORT_TESTS_ORACLES_HPP
#define VMORT_TESTS_ORACLES_HPP

// Independent reference implementations used only by tests. These stay
// deliberately naive (plain series, classical RK4, textbook closed forms)
// and must not share code with the library paths they check.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// Mittag-Leffler by direct 200-term summation over lgamma.
inline double ml_series(double alpha, double beta, double z, int terms = 200) {
    double sum = 0.0;
    for (int n = terms - 1; n >= 0; --n) {
        const double lg = std::lgamma(alpha * n + beta);
        double term = (n == 0) ? std::exp(-lg) : std::exp(n * std::log(std::abs(z)) - lg);
        if (z < 0.0 && (n & 1)) term = -term;
        sum += term;
    }
    return sum;
}

// Classical RK4 for a scalar ODE y' = f(t, y); returns the full trajectory
// including y0.
inline std::vector<double> rk4(const std::function<double(double, double)>& f, double y0,
                               double t0, double t1, int n) {
    std::vector<double> ys(n + 1);
    double y = y0, t = t0;
    const double h = (t1 - t0) / n;
    ys[0] = y;
    for (int i = 0; i < n; ++i) {
        const double k1 = f(t, y);
        const double k2 = f(t + 0.5 * h, y + 0.5 * h * k1);
        const double k3 = f(t + 0.5 * h, y + 0.5 * h * k2);
        const double k4 = f(t + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += h;
        ys[i + 1] = y;
    }
    return ys;
}

// Markov affine transform E[exp(-eta int_t^T X ds) | X_t] = exp(a + b X_t)
// for dX = (b0 + bx X) dt + sqrt(A0 + A1 X) dW, by RK4 on the coupled
// Riccati system in time-to-maturity.
struct AffinePair {
    double a, b;
};
inline AffinePair markov_affine(double eta, double b0, double bx, double A0, double A1,
                                double tau, int n = 4000) {
    double a = 0.0, b = 0.0;
    const double h = tau / n;
    const auto fb = [&](double bv) { return -eta + bx * bv + 0.5 * A1 * bv * bv; };
    const auto fa = [&](double bv) { return b0 * bv + 0.5 * A0 * bv * bv; };
    for (int i = 0; i < n; ++i) {
        const double k1b = fb(b), k1a = fa(b);
        const double k2b = fb(b + 0.5 * h * k1b), k2a = fa(b + 0.5 * h * k1b);
        const double k3b = fb(b + 0.5 * h * k2b), k3a = fa(b + 0.5 * h * k2b);
        const double k4b = fb(b + h * k3b), k4a = fa(b + h * k3b);
        a += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        b += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    return {a, b};
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Black-Scholes call on a lognormal forward with total standard deviation v.
inline double bs_call(double spot, double strike, double rate, double horizon, double v) {
    if (v <= 0.0) return std::max(spot - strike * std::exp(-rate * horizon), 0.0);
    const double d1 = (std::log(spot / strike) + rate * horizon) / v + 0.5 * v;
    return spot * norm_cdf(d1) - strike * std::exp(-rate * horizon) * norm_cdf(d1 - v);
}

struct MeanSe {
    double mean, se;
};
inline MeanSe mean_se(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    const double m = s / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    const double var = xs.size() > 1 ? ss / (xs.size() - 1) : 0.0;
    return {m, std::sqrt(var / xs.size())};
}

// Population variance (divisor n).
inline double pop_var(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    const double m = s / xs.size();
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / xs.size();
}

// Golden-section minimizer on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b,
                         double tol = 1e-8) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace oracle

#endif
