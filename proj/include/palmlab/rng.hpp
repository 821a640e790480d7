#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace palmlab {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based key derivation: the seed of replication `counter` in
/// stream `stream` under `root`. A pure function of its arguments, so a
/// replication draws the same numbers no matter which thread runs it.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                                    std::uint64_t counter) noexcept
{
    constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t k = mix64(root + golden);
    k = mix64(k ^ (stream + 2 * golden));
    return mix64(k ^ (counter + 3 * golden));
}

/// Stable 64-bit id for a named stream (FNV-1a).
constexpr std::uint64_t stream_id(std::string_view name) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// xoshiro256** seeded through SplitMix64. Satisfies
/// UniformRandomBitGenerator so it also drives <random> distributions.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    double exponential(double rate) noexcept;

    /// Gamma with the given shape and rate (mean shape / rate).
    double gamma(double shape, double rate);

private:
    std::uint64_t s_[4];
};

}  // namespace palmlab
