#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>

#include "augbias/core/error.hpp"

namespace augbias {

// Deterministic random source.
//
// Generator: SplitMix64 (Steele, Lea & Flood 2014), 64-bit state advanced by
// the golden-ratio increment 0x9E3779B97F4A7C15 and finalized with the
// Stafford variant-13 mixer. The full stream is a function of the seed only,
// so the same seed gives the same numbers on every platform.
//
//   uniform()      top 53 bits of the next word scaled by 2^-53, in [0, 1)
//   normal()       Box-Muller; both variates of a pair are used, the second
//                  one is cached until the next call
//   uniform_int(n) Lemire's multiply-shift with rejection, unbiased in [0, n)
//   shuffle()      Fisher-Yates, walking from the back
class Rng {
public:
    static constexpr const char* kAlgorithm = "splitmix64";

    explicit Rng(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw InvalidInput("uniform_int: empty range");
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(uniform_int(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    template <typename Container>
    void shuffle(Container& items) {
        shuffle(std::span{items});
    }

    // Independent child stream. The child seed mixes the parent seed with the
    // stream id; the parent stream is not advanced.
    Rng fork(std::uint64_t stream) const noexcept {
        return Rng(derive_seed(seed_, stream));
    }

    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
        return mix(seed ^ mix(stream + 0x632BE59BD9B4E019ULL));
    }

    static std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace augbias
