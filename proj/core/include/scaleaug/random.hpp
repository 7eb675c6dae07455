#ifndef SCALEAUG_RANDOM_HPP
#define SCALEAUG_RANDOM_HPP

#include <cassert>
#include <cstdint>
#include <random>

namespace scaleaug {

// ---------------------------------------------------------------------------
// Deterministic random source
//
// All randomness flows through Rng so that runs are reproducible bit-for-bit
// across platforms and standard libraries.  The mappings from raw 64-bit
// words to bounded integers / unit doubles are implemented here instead of
// relying on std::uniform_*_distribution, whose algorithms are
// implementation-defined.
// ---------------------------------------------------------------------------

/// SplitMix64 finalizer; used to decorrelate derived seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a stream id
/// (e.g. an image id).  Stable regardless of processing order, so parallel
/// per-image pipelines stay deterministic.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t base,
                                                  std::uint64_t stream) noexcept {
    return splitmix64(splitmix64(base) ^ splitmix64(~stream));
}

/// Seeded random source.  Cheap to copy; copies continue independently.
class Rng {
 public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Raw 64-bit word.
    [[nodiscard]] std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [0, n).  Lemire's multiply-shift rejection method;
    /// unbiased for every n >= 1.
    [[nodiscard]] std::uint64_t uniform_index(std::uint64_t n) {
        assert(n >= 1);
        while (true) {
            const std::uint64_t x = engine_();
            const unsigned __int128 m =
                static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(n);
            const std::uint64_t low = static_cast<std::uint64_t>(m);
            if (low >= n) {
                return static_cast<std::uint64_t>(m >> 64);
            }
            // Rejection zone: only the first (2^64 mod n) low words are biased.
            const std::uint64_t threshold = (0ULL - n) % n;
            if (low >= threshold) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    [[nodiscard]] double uniform_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Bernoulli draw with success probability expressed in tenths (0..10).
    [[nodiscard]] bool bernoulli_tenths(int tenths) {
        assert(tenths >= 0 && tenths <= 10);
        return uniform_unit() < static_cast<double>(tenths) / 10.0;
    }

    /// Uniform sign draw: +1 or -1.
    [[nodiscard]] int sign() { return uniform_index(2) == 0 ? 1 : -1; }

 private:
    std::mt19937_64 engine_;
};

}  // namespace scaleaug

#endif  // SCALEAUG_RANDOM_HPP
