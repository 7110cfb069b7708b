#ifndef MDFS_RNG_HPP
#define MDFS_RNG_HPP

#include <cstdint>

namespace mdfs {

// splitmix64 finalizer (Vigna / Steele et al., public domain constants).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Substream key derivation: fold one word into a key. The multiplier is odd,
// so distinct words map to distinct inputs of the mix and hence to
// well-separated keys. Keys are chained, e.g.
//   derive_key(derive_key(derive_key(seed, TAG), t), v)
// gives the stream for discretization t of variable v.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t word) noexcept {
    return mix64(key + kGoldenGamma * (word + 1));
}

// Counter-based generator: output i is mix64(key + (i+1)*gamma), i.e. the
// splitmix64 sequence started at `key`. State is one word; streams derived
// from distinct keys are independent for our purposes.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : state_(key) {}

    std::uint64_t next_u64() noexcept {
        state_ += kGoldenGamma;
        return mix64(state_);
    }

    // [0, 1), 53-bit resolution
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // [lo, hi); returns exactly lo when hi == lo
    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_double();
    }

    // Unbiased draw from [0, bound) by rejection.
    std::uint64_t uniform_int(std::uint64_t bound) noexcept {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x < threshold);
        return x % bound;
    }

private:
    std::uint64_t state_;
};

}  // namespace mdfs

#endif
