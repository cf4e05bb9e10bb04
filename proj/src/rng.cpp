#include "vmort/rng.hpp"

#include <cmath>

namespace vmort {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next_u64() {
    // xoshiro256**
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    // 53-bit mantissa, shifted to avoid exact 0
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

double Rng::exponential() { return -std::log(uniform()); }

Rng make_stream(const RngPolicy& policy, std::uint64_t path_index, StreamKind kind) {
    std::uint64_t sm = policy.master_seed;
    std::uint64_t a = splitmix64(sm);
    sm = a ^ (path_index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    std::uint64_t b = splitmix64(sm);
    sm = b ^ static_cast<std::uint64_t>(kind);
    return Rng(splitmix64(sm));
}

} // namespace vmort
