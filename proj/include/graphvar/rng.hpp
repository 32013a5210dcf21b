#pragma once

#include <cstdint>

namespace graphvar {

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream keyed by (seed, stream). Draw k of a stream depends
/// only on (seed, stream, k), so work split across threads reproduces the
/// serial sequence exactly. Uniform doubles are built from the top 53 bits,
/// independent of the standard library's distributions.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
        : key_(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

    std::uint64_t next() noexcept { return mix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }

    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t n) noexcept { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace graphvar
