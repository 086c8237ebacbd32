#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "qseries/errors.hpp"
#include "qseries/types.hpp"

namespace qseries {

/// SplitMix64 (Steele, Lea, Flood). Same seed, same stream on every platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi].
    int integer(int lo, int hi) noexcept
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next() % span);
    }

private:
    std::uint64_t state_;
};

enum class Profile { real, complex };

struct SampleConfig {
    std::vector<double> qs{0.3, 0.5, 0.7};
    /// Largest modulus drawn for a free parameter.
    double cap = 0.5;
    /// Smallest modulus drawn for a free parameter.
    double floor = 0.05;
    Profile profile = Profile::real;

    void validate() const
    {
        if (qs.empty())
            throw domain_error("sampling needs at least one value of q");
        for (double q : qs)
            if (!(q > 0.0 && q < 1.0))
                throw domain_error("every sampled q must lie in (0, 1)");
        if (!(cap > 0.0 && cap < 1.0))
            throw domain_error("modulus cap must lie in (0, 1)");
        if (!(floor > 0.0 && floor < cap))
            throw domain_error("modulus floor must lie in (0, cap)");
    }
};

/// Seed of sample `index` of identity `id`: independent of the order in which
/// (identity, sample) pairs are visited.
inline std::uint64_t sample_seed(std::uint64_t seed, std::string_view id, std::size_t index) noexcept
{
    std::uint64_t h = 0xCBF29CE484222325ULL; // FNV-1a
    for (unsigned char ch : id) {
        h ^= ch;
        h *= 0x100000001B3ULL;
    }
    SplitMix64 mix(seed ^ h);
    mix.next();
    SplitMix64 out(mix.next() + 0x9E3779B97F4A7C15ULL * (index + 1));
    return out.next();
}

/// Draws parameter values for one sample point.
class Draw {
public:
    Draw(SplitMix64& rng, const SampleConfig& cfg) : rng_(rng), cfg_(cfg) {}

    const SampleConfig& config() const noexcept { return cfg_; }
    SplitMix64& rng() noexcept { return rng_; }

    /// Modulus uniform in [lo, hi]; a uniform phase under the complex profile,
    /// a positive real otherwise.
    QComplex param(double lo, double hi)
    {
        const double m = rng_.uniform(lo, hi);
        if (cfg_.profile == Profile::real)
            return {m, 0.0};
        return std::polar(m, rng_.uniform(0.0, 2.0 * pi));
    }

    QComplex param() { return param(cfg_.floor, cfg_.cap); }

    /// A real positive value regardless of profile.
    double real(double lo, double hi) { return rng_.uniform(lo, hi); }

    int integer(int lo, int hi) { return rng_.integer(lo, hi); }

private:
    SplitMix64& rng_;
    const SampleConfig& cfg_;
};

/// True when (b; q)_k vanishes, to within tol, for some k >= 0, i.e. b is
/// close to q^{-k}.
inline bool near_pole(QComplex b, double q, double tol = 1e-6)
{
    double qk = 1.0;
    for (int k = 0; std::abs(b) * qk > 0.5; ++k, qk *= q)
        if (std::abs(1.0 - b * qk) < tol)
            return true;
    return false;
}

} // namespace qseries
