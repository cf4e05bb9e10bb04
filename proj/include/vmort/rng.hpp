#ifndef VMORT_RNG_HPP
#define VMORT_RNG_HPP

#include <cstdint>

namespace vmort {

// Deterministic stream derivation: (master_seed, path_index, stream kind)
// always yields the same substream, independent of how work is scheduled.
// Streams for distinct (index, kind) pairs are decorrelated by splitmix64
// seeding of a xoshiro256** state.
struct RngPolicy {
    std::uint64_t master_seed = 0;
};

enum class StreamKind : std::uint64_t {
    mortality = 0x9e3779b97f4a7c15ULL,
    rate = 0xbf58476d1ce4e5b9ULL,
    claims = 0x94d049bb133111ebULL,
    generic = 0x2545f4914f6cdd1dULL,
};

class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();
    double uniform();     // in (0, 1)
    double normal();      // standard normal, Box-Muller (no cached spare)
    double exponential(); // unit mean

private:
    std::uint64_t s_[4];
};

Rng make_stream(const RngPolicy& policy, std::uint64_t path_index, StreamKind kind);

} // namespace vmort

#endif
