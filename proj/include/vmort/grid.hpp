#ifndef VMORT_GRID_HPP
#define VMORT_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "vmort/errors.hpp"

namespace vmort {

// A real-valued function sampled on a uniform time grid: value i lives at
// t0 + i*dt. This is the carrier for every tabulated coefficient function
// (psi, resolvents, bond coefficients, ...).
struct GridFunction {
    double t0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double t0_, double dt_, std::vector<double> vals);

    std::size_t size() const { return values.size(); }
    double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
    double back_time() const { return time(values.size() - 1); }

    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    // Linear interpolation; t clamped to the grid range up to a half-step
    // of slack, outside of which it is an input error.
    double value(double t) const;

    // Trapezoidal running integral from t0; result lives on the same grid.
    GridFunction cumulative_integral() const;

    bool same_grid(const GridFunction& other) const;
};

// Right-continuous piecewise-constant function of time. values[k] applies
// on [times[k], times[k+1]); the first piece extends left, the last piece
// extends right. Used for step-valued drifts and market prices of risk.
struct StepFunction {
    std::vector<double> times;
    std::vector<double> values;

    StepFunction() : times{0.0}, values{0.0} {}
    StepFunction(std::vector<double> t, std::vector<double> v);
    static StepFunction constant(double v) { return StepFunction({0.0}, {v}); }

    bool is_constant() const { return values.size() == 1; }
    double value(double t) const;
    double integral(double a, double b) const;

    StepFunction plus(const StepFunction& other) const;
    StepFunction scaled(double factor) const;
};

// Number of steps n such that n*dt covers [0, horizon]; horizon must be a
// positive multiple-ish of dt (rounded to nearest).
std::size_t steps_for(double horizon, double dt);

// Numerically stable summation with a deterministic reduction order that
// does not depend on any thread partitioning.
double pairwise_sum(std::span<const double> x);

} // namespace vmort

#endif
