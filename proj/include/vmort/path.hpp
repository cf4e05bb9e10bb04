#ifndef VMORT_PATH_HPP
#define VMORT_PATH_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "vmort/errors.hpp"

namespace vmort {

struct Claim {
    double time = 0.0;
    double size = 0.0;
};

// One simulated scenario on the uniform grid {0, dt, ..., n dt}. State
// vectors hold n+1 nodes, increment vectors n steps. Unused components may
// be left empty (a mortality-only path has no r / dwp).
struct SamplePath {
    double dt = 0.0;
    std::vector<double> x;      // mortality factor X
    std::vector<double> dw;     // mortality Brownian increments
    std::vector<double> dwp;    // rate Brownian increments
    std::vector<double> r;      // short rate
    std::vector<double> int_mu; // running int_0^t mu ds
    std::vector<Claim> claims;  // arrival times and sizes, sorted

    std::size_t steps() const { return dw.size(); }
    double horizon() const { return static_cast<double>(steps()) * dt; }

    // index of grid time t; t must sit on the grid
    std::size_t index_of(double t) const {
        if (dt <= 0.0) throw InputError("SamplePath: empty grid");
        const double u = t / dt;
        const auto i = static_cast<std::size_t>(u + 0.5);
        if (std::abs(u - static_cast<double>(i)) > 1e-6)
            throw InputError("SamplePath: time not on grid");
        return i;
    }

    void check_consistent() const;
};

// Path with a single node at t=0 (empty history); useful for valuations
// anchored at time zero.
SamplePath empty_path(double x0, double dt);

} // namespace vmort

#endif
