#pragma once

#include <cstdint>
#include <random>

namespace xicor {

// splitmix64 finalizer, used both as a seed scrambler and to derive
// independent streams from (seed, stream-index).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seedable, splittable generator. Uniform doubles are produced from the raw
// 64-bit output (top 53 bits), so a given (seed, call sequence) yields the
// same values on every platform with the same mt19937_64.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : root_(seed), gen_(mix64(seed)) {}

    // Independent stream derived from this generator's root seed. Streams for
    // distinct indices never share state with the parent or each other.
    Rng split(std::uint64_t stream) const {
        return Rng(mix64(root_ ^ mix64(stream ^ 0x5851f42d4c957f2dULL)));
    }

    std::uint64_t root_seed() const noexcept { return root_; }

    std::uint64_t u64() { return gen_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // Uniform index in [0, n), rejection sampled (unbiased).
    std::size_t index(std::size_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return static_cast<std::size_t>(v % n);
    }

private:
    std::uint64_t root_;
    std::mt19937_64 gen_;
};

}  // namespace xicor
