#include "vmort/simulation.hpp"

#include <cmath>
#include <fstream>

#include "vmort/io.hpp"

namespace vmort {

double ClaimLaw::draw(Rng& rng) const {
    switch (kind) {
        case Kind::constant: return mean;
        case Kind::exponential: return mean * rng.exponential();
    }
    throw InputError("ClaimLaw: unknown kind");
}

double ClaimLaw::second_moment() const {
    switch (kind) {
        case Kind::constant: return mean * mean;
        case Kind::exponential: return 2.0 * mean * mean;
    }
    throw InputError("ClaimLaw: unknown kind");
}

SamplePath simulate_svie_with_increments(const AffineVolterraModel& model,
                                         std::span<const double> dw, double dt) {
    model.validate();
    if (dt <= 0.0) throw InputError("simulate_svie: dt must be positive");
    const std::size_t n = dw.size();
    const std::vector<double> w = kernel_cell_weights(model.kernel, dt, n);

    SamplePath path;
    path.dt = dt;
    path.x.assign(n + 1, model.x0);
    path.dw.assign(dw.begin(), dw.end());

    // incr_j = b(t_j, X_j) dt + sigma(X_j) dW_j, folded with averaged
    // kernel cell weights
    std::vector<double> incr(n, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t j = i - 1;
        const double tj = static_cast<double>(j) * dt;
        incr[j] = model.drift(tj, path.x[j]) * dt + model.sigma(path.x[j]) * dw[j];
        double acc = 0.0;
        for (std::size_t m = 0; m < i; ++m) acc += w[i - m] * incr[m];
        path.x[i] = model.x0 + acc / dt;
    }
    return path;
}

SamplePath simulate_svie(const AffineVolterraModel& model, const RngPolicy& rng,
                         std::uint64_t path_index, double horizon, double dt) {
    const std::size_t n = steps_for(horizon, dt);
    Rng stream = make_stream(rng, path_index, StreamKind::mortality);
    const double sq = std::sqrt(dt);
    std::vector<double> dw(n);
    for (auto& d : dw) d = sq * stream.normal();
    return simulate_svie_with_increments(model, dw, dt);
}

RatePath simulate_rate_with_increments(const AffineRateModel& model, std::span<const double> dw,
                                       double dt) {
    model.validate();
    if (dt <= 0.0) throw InputError("simulate_rate: dt must be positive");
    RatePath out;
    out.dw.assign(dw.begin(), dw.end());
    out.r.assign(dw.size() + 1, model.z0);
    for (std::size_t i = 0; i < dw.size(); ++i)
        out.r[i + 1] = out.r[i] + model.drift(out.r[i]) * dt + model.sigma_r * dw[i];
    return out;
}

RatePath simulate_rate(const AffineRateModel& model, const RngPolicy& rng,
                       std::uint64_t path_index, double horizon, double dt) {
    const std::size_t n = steps_for(horizon, dt);
    Rng stream = make_stream(rng, path_index, StreamKind::rate);
    const double sq = std::sqrt(dt);
    std::vector<double> dw(n);
    for (auto& d : dw) d = sq * stream.normal();
    return simulate_rate_with_increments(model, dw, dt);
}

void integrate_hazard(SamplePath& path, const AffineVolterraModel& model) {
    path.check_consistent();
    const std::size_t n = path.x.size();
    path.int_mu.assign(n, 0.0);
    double prev = model.mu(0.0, path.x[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double cur = model.mu(static_cast<double>(i) * path.dt, path.x[i]);
        path.int_mu[i] = path.int_mu[i - 1] + 0.5 * path.dt * (prev + cur);
        prev = cur;
    }
}

void simulate_claims(SamplePath& path, double k1, const ClaimLaw& law, const RngPolicy& rng,
                     std::uint64_t path_index, bool truncate_negative) {
    if (!(k1 > 0.0)) throw InputError("simulate_claims: k1 must be positive");
    if (path.int_mu.size() != path.x.size())
        throw InputError("simulate_claims: int_mu not populated");
    path.claims.clear();
    Rng stream = make_stream(rng, path_index, StreamKind::claims);

    double target = stream.exponential();
    double clock = 0.0;
    for (std::size_t i = 0; i + 1 < path.int_mu.size(); ++i) {
        double inc = k1 * (path.int_mu[i + 1] - path.int_mu[i]);
        if (inc < -1e-12) {
            if (!truncate_negative)
                throw ModelError("simulate_claims: negative intensity encountered");
            inc = 0.0;
        }
        inc = std::max(inc, 0.0);
        const double lo = clock;
        const double hi = clock + inc;
        while (hi >= target) {
            const double frac = (hi > lo) ? (target - lo) / (hi - lo) : 1.0;
            const double time = (static_cast<double>(i) + frac) * path.dt;
            path.claims.push_back({time, law.draw(stream)});
            target += stream.exponential();
        }
        clock = hi;
    }
}

void write_path_csv(const SamplePath& path, const std::string& file, std::uint64_t config_hash,
                    std::uint64_t seed) {
    CsvWriter csv(file, {"t", "X", "r", "int_mu"});
    for (std::size_t i = 0; i < path.x.size(); ++i)
        csv.row_values({static_cast<double>(i) * path.dt, path.x[i],
                        i < path.r.size() ? path.r[i] : 0.0,
                        i < path.int_mu.size() ? path.int_mu[i] : 0.0});
    csv.finish(config_hash, seed);
}

} // namespace vmort
