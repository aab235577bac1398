#pragma once

#include <cstdint>
#include <random>

namespace seafarm {

/// Seed configuration carried through every randomized pipeline stage.
/// Identical seed + identical inputs must give bit-identical outputs.
struct RngConfig {
    std::uint64_t seed = 0;
};

namespace detail {

// splitmix64; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic random stream. All helpers are fully specified arithmetic
/// over std::mt19937_64 output words, so sequences do not depend on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}
    explicit Rng(const RngConfig& cfg) : Rng(cfg.seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0. Rejection sampling keeps the
    /// draw unbiased and platform independent.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    /// Independent substream for (this seed, stream id). Used to give every
    /// image its own stream so worker scheduling cannot change outputs.
    Rng fork(std::uint64_t stream_id) const {
        return Rng(detail::mix64(seed_ ^ detail::mix64(stream_id)));
    }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

}  // namespace seafarm
