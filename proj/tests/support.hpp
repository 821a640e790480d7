#pragma once

#include "palmlab/events.hpp"
#include "palmlab/pattern.hpp"
#include "palmlab/replicate.hpp"
#include "palmlab/rng.hpp"

#include <cmath>
#include <vector>

namespace palmlab::test {

// Random straddling pattern with `n_left` points <= 0 and `n_right` points
// > 0, gaps drawn from a mix of short and long exponentials so that ties
// with round thresholds are rare but gap lengths vary a lot.
inline PointPattern random_pattern(Rng& rng, int n_left, int n_right, double pad = 0.5)
{
    std::vector<double> pts;
    auto gap = [&rng] { return rng.uniform() < 0.3 ? rng.exponential(4.0) + 1e-6 : rng.exponential(0.8) + 1e-6; };
    double t = -rng.uniform() * gap();
    std::vector<double> left{t};
    for (int i = 1; i < n_left; ++i) {
        t -= gap();
        left.push_back(t);
    }
    pts.assign(left.rbegin(), left.rend());
    t = 0.0;
    for (int i = 0; i < n_right; ++i) {
        t += gap();
        pts.push_back(t);
    }
    return PointPattern(pts, Window{pts.front() - pad, pts.back() + pad});
}

inline double combined_se(const Estimate& a, const Estimate& b)
{
    return std::hypot(a.std_error, b.std_error);
}

// Default agreement rule of the test suite.
inline bool agrees(const Estimate& a, const Estimate& b, double z = 3.0, double atol = 0.002)
{
    return std::abs(a.value - b.value) <= z * combined_se(a, b) + atol;
}

inline bool near_value(const Estimate& a, double expected, double z = 3.0, double atol = 0.002)
{
    return std::abs(a.value - expected) <= z * a.std_error + atol;
}

inline RunOptions quick(std::size_t reps, std::uint64_t stream = 0)
{
    RunOptions o;
    o.reps = reps;
    o.seed = 424242;
    o.stream = stream;
    o.threads = 1;
    return o;
}

}  // namespace palmlab::test
