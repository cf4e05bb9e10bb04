#ifndef VMORT_SIMULATION_HPP
#define VMORT_SIMULATION_HPP

#include <span>

#include "vmort/mortality.hpp"
#include "vmort/path.hpp"
#include "vmort/rates.hpp"
#include "vmort/rng.hpp"

namespace vmort {

// Claim-size law for the insurance jump process.
struct ClaimLaw {
    enum class Kind { constant, exponential };
    Kind kind = Kind::exponential;
    double mean = 1.0;

    double draw(Rng& rng) const;
    double second_moment() const;
};

// Explicit Euler product-integration of the SVIE: with exact cell
// integrals W_m = int_{(m-1)dt}^{m dt} K,
//
//   X_i = X_0 + sum_{j<i} (W_{i-j}/dt) [ b(t_j, X_j) dt + sigma(X_j) dW_j ].
//
// Exact weights keep the scheme honest for kernels with a power-law start.
SamplePath simulate_svie(const AffineVolterraModel& model, const RngPolicy& rng,
                         std::uint64_t path_index, double horizon, double dt);

// Same scheme driven by caller-supplied increments (common-random-number
// refinement studies, scenario replay).
SamplePath simulate_svie_with_increments(const AffineVolterraModel& model,
                                         std::span<const double> dw, double dt);

struct RatePath {
    std::vector<double> r;
    std::vector<double> dw;
};

// Euler-Maruyama for dr = (b0 - mean_rev r) dt + sigma_r dW'.
RatePath simulate_rate(const AffineRateModel& model, const RngPolicy& rng,
                       std::uint64_t path_index, double horizon, double dt);
RatePath simulate_rate_with_increments(const AffineRateModel& model, std::span<const double> dw,
                                       double dt);

// Fills int_mu with the trapezoidal running integral of mu = m(t) + eta X.
void integrate_hazard(SamplePath& path, const AffineVolterraModel& model);

// Doubly stochastic claim arrivals with intensity k1 * mu, generated by
// time-change inversion of k1 * int_mu against unit-exponential spacings;
// sizes drawn iid from the claim law. A negative mu is a model error
// unless truncate_negative is set, in which case the claim clock runs on
// int max(mu, 0) (same full-truncation treatment as the diffusion).
void simulate_claims(SamplePath& path, double k1, const ClaimLaw& law, const RngPolicy& rng,
                     std::uint64_t path_index, bool truncate_negative = false);

// Optional per-path dump: header t,X,r,int_mu, plus the standard metadata
// trailer when a config hash / seed pair is supplied.
void write_path_csv(const SamplePath& path, const std::string& file,
                    std::uint64_t config_hash = 0, std::uint64_t seed = 0);

} // namespace vmort

#endif
