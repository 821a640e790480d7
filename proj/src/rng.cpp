#include "palmlab/rng.hpp"

#include <cmath>
#include <random>

namespace palmlab {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept
{
    std::uint64_t state = seed;
    for (auto& word : s_) {
        state += 0x9E3779B97F4A7C15ULL;
        word = mix64(state);
    }
}

Rng::result_type Rng::operator()() noexcept
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::exponential(double rate) noexcept
{
    // 1 - u lies in (0, 1], so the logarithm is finite.
    return -std::log1p(-uniform()) / rate;
}

double Rng::gamma(double shape, double rate)
{
    const double rounded = std::round(shape);
    if (rounded == shape && shape >= 1.0 && shape <= 16.0) {
        double sum = 0.0;
        for (int i = 0; i < static_cast<int>(shape); ++i)
            sum += exponential(1.0);
        return sum / rate;
    }
    std::gamma_distribution<double> dist(shape, 1.0 / rate);
    return dist(*this);
}

}  // namespace palmlab
