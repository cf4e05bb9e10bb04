#include "vmort/grid.hpp"

#include <cmath>

namespace vmort {

GridFunction::GridFunction(double t0_, double dt_, std::vector<double> vals)
    : t0(t0_), dt(dt_), values(std::move(vals)) {
    if (dt <= 0.0) throw GridError("GridFunction: dt must be positive");
    if (values.empty()) throw GridError("GridFunction: values must be nonempty");
}

double GridFunction::value(double t) const {
    if (values.empty()) throw GridError("GridFunction: empty");
    const double u = (t - t0) / dt;
    if (u < -0.5 || u > static_cast<double>(values.size() - 1) + 0.5)
        throw InputError("GridFunction: lookup outside grid range");
    if (u <= 0.0) return values.front();
    const auto last = static_cast<double>(values.size() - 1);
    if (u >= last) return values.back();
    const auto i = static_cast<std::size_t>(u);
    const double w = u - static_cast<double>(i);
    return values[i] * (1.0 - w) + values[i + 1] * w;
}

GridFunction GridFunction::cumulative_integral() const {
    std::vector<double> out(values.size(), 0.0);
    for (std::size_t i = 1; i < values.size(); ++i)
        out[i] = out[i - 1] + 0.5 * dt * (values[i - 1] + values[i]);
    return GridFunction(t0, dt, std::move(out));
}

bool GridFunction::same_grid(const GridFunction& other) const {
    const double scale = std::max(std::abs(dt), std::abs(other.dt));
    return std::abs(t0 - other.t0) <= 1e-12 * std::max(1.0, std::abs(t0)) &&
           std::abs(dt - other.dt) <= 1e-12 * scale;
}

StepFunction::StepFunction(std::vector<double> t, std::vector<double> v)
    : times(std::move(t)), values(std::move(v)) {
    if (times.empty() || times.size() != values.size())
        throw InputError("StepFunction: times and values must be nonempty and equally sized");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw InputError("StepFunction: times must increase");
}

double StepFunction::value(double t) const {
    std::size_t k = 0;
    while (k + 1 < times.size() && t >= times[k + 1]) ++k;
    return values[k];
}

double StepFunction::integral(double a, double b) const {
    if (b < a) throw InputError("StepFunction::integral: require a <= b");
    double acc = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double lo = std::max(a, times[k]);
        const double hi = (k + 1 < times.size()) ? std::min(b, times[k + 1]) : b;
        if (hi > lo) acc += values[k] * (hi - lo);
    }
    // piece extending left of times[0]
    if (a < times[0]) acc += values[0] * (std::min(b, times[0]) - a);
    return acc;
}

StepFunction StepFunction::plus(const StepFunction& other) const {
    std::vector<double> t;
    t.reserve(times.size() + other.times.size());
    std::size_t i = 0, j = 0;
    while (i < times.size() || j < other.times.size()) {
        double next;
        if (j == other.times.size() || (i < times.size() && times[i] <= other.times[j]))
            next = times[i++];
        else
            next = other.times[j++];
        if (t.empty() || next > t.back()) t.push_back(next);
    }
    std::vector<double> v(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) v[k] = value(t[k]) + other.value(t[k]);
    return StepFunction(std::move(t), std::move(v));
}

StepFunction StepFunction::scaled(double factor) const {
    StepFunction out = *this;
    for (auto& v : out.values) v *= factor;
    return out;
}

std::size_t steps_for(double horizon, double dt) {
    if (dt <= 0.0) throw InputError("dt must be positive");
    if (horizon <= 0.0) throw InputError("horizon must be positive");
    const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
    return n == 0 ? 1 : n;
}

double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

} // namespace vmort
