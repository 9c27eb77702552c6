#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace glp {

/// xoshiro256** seeded through splitmix64.
///
/// Every output is a pure function of the 64-bit seed and the number of
/// draws, using only unsigned 64-bit integer arithmetic, so streams are
/// bit-identical on every platform. Derived draws (bounded integers,
/// unit doubles, Bernoulli) are also integer-exact. Only the continuous
/// samplers that go through std::log can differ in the last ulp across libm
/// implementations; the graph process never uses them.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept
    {
        std::uint64_t x = seed;
        for (auto& s : state_) {
            s = splitmix64(x);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform integer in [0, n) by Lemire's multiply-and-reject. n > 0.
    std::uint64_t below(std::uint64_t n) noexcept
    {
        __extension__ using u128 = unsigned __int128;
        u128 m = static_cast<u128>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<u128>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform double in (0, 1].
    double uniform_open_low() noexcept { return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Exponential with the given rate, by inversion.
    double exponential(double rate) noexcept { return -std::log(uniform_open_low()) / rate; }

    /// Geometric on {1, 2, ...} with success probability p in (0, 1], by inversion.
    std::uint64_t geometric(double p) noexcept
    {
        if (p >= 1.0) {
            return 1;
        }
        const double g = std::floor(std::log(uniform_open_low()) / std::log1p(-p));
        return static_cast<std::uint64_t>(g) + 1;
    }

    const std::array<std::uint64_t, 4>& state() const noexcept { return state_; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    static constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept
    {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
};

/// Seed of replica `replica` in a batch rooted at `base_seed`.
constexpr std::uint64_t replica_seed(std::uint64_t base_seed, std::uint64_t replica) noexcept
{
    return base_seed + replica;
}

}  // namespace glp
