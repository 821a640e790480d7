#include "doctest.h"
#include "support.hpp"

#include "palmlab/error.hpp"
#include "palmlab/pattern.hpp"

#include <cmath>
#include <sstream>

using namespace palmlab;
using palmlab::test::random_pattern;

namespace {

PointPattern pat(std::vector<double> pts, double pad = 1.0)
{
    const double lo = std::min(pts.empty() ? 0.0 : pts.front(), 0.0) - pad;
    const double hi = std::max(pts.empty() ? 0.0 : pts.back(), 0.0) + pad;
    return PointPattern(std::move(pts), Window{lo, hi});
}

ErrorCode code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("locate_indices")
{
    const auto p = pat({-1.5, -0.2, 0.7, 2.1});
    const auto [i0, i1] = p.locate_indices();
    CHECK(p.points()[i0] == -0.2);
    CHECK(p.points()[i1] == 0.7);
    CHECK(p.T(0) == -0.2);
    CHECK(p.T(1) == 0.7);

    const auto q = pat({0.0, 1.0});
    CHECK(q.T(0) == 0.0);
    CHECK(q.T(1) == 1.0);

    CHECK(code_of([] { pat({0.3, 1.2}).locate_indices(); }) == ErrorCode::NoStraddle);
    CHECK(code_of([] { pat({-0.3, -0.1}).locate_indices(); }) == ErrorCode::NoStraddle);
}

TEST_CASE("interval")
{
    CHECK(pat({-0.2, 0.7}).interval(0) == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(pat({-3, -1, 2}).interval(-1) == 2.0);
    CHECK(code_of([] { pat({-1, 4}).interval(1); }) == ErrorCode::IndexOutOfPattern);
}

TEST_CASE("construction validates")
{
    CHECK(code_of([] { PointPattern({0.5, 0.2}, Window{-1, 1}); }) == ErrorCode::InvalidPattern);
    CHECK(code_of([] { PointPattern({0.2, 0.2}, Window{-1, 1}); }) == ErrorCode::InvalidPattern);
    CHECK(code_of([] { PointPattern({0.2, 0.2 + 1e-13}, Window{-1, 1}); }) == ErrorCode::InvalidPattern);
    CHECK(code_of([] { PointPattern({0.2, 3.0}, Window{-1, 1}); }) == ErrorCode::InvalidPattern);
    CHECK(code_of([] { PointPattern({}, Window{1, -1}); }) == ErrorCode::InvalidPattern);
    CHECK_NOTHROW(PointPattern({0.2, 0.2 + 1e-11}, Window{-1, 1}));
}

TEST_CASE("shift_time")
{
    const auto p = pat({-1.5, -0.2, 0.7});
    const auto s = p.shift_time(0.7);
    REQUIRE(s.size() == 3);
    CHECK(s.points()[0] == doctest::Approx(-2.2));
    CHECK(s.points()[1] == doctest::Approx(-0.9));
    CHECK(s.points()[2] == 0.0);
    CHECK(s.window().lo == p.window().lo - 0.7);
    CHECK(p.shift_time(0.0) == p);

    const auto back = p.shift_time(1.3).shift_time(-1.3);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(std::abs(back.points()[i] - p.points()[i]) <= 4e-16 * (std::abs(p.points()[i]) + 1.3));
}

TEST_CASE("shift_event")
{
    const auto p = pat({-0.2, 0.7, 2.1});
    const auto s = p.shift_event(1);
    CHECK(s.points()[0] == doctest::Approx(-0.9));
    CHECK(s.points()[1] == 0.0);
    CHECK(s.points()[2] == doctest::Approx(1.4));
    CHECK(s.T(0) == 0.0);

    const auto z = pat({-1.0, 0.0, 0.5});
    CHECK(z.shift_event(0) == z);

    CHECK(code_of([] { pat({-0.2, 0.7}).shift_event(5); }) == ErrorCode::IndexOutOfPattern);
}

TEST_CASE("count uses half-open intervals")
{
    const auto p = pat({-0.2, 0.7, 2.1});
    CHECK(p.count(0, 2) == 1);
    CHECK(p.count(0.5, 0.5) == 0);
    CHECK(p.count(0.7, 2.1) == 1);
    CHECK(p.count(-0.2, 0.7) == 1);
    CHECK(code_of([&] { p.count(-5, 0); }) == ErrorCode::OutsideWindow);
    CHECK(code_of([&] { p.count(1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("view accessors stay inside the window")
{
    const auto p = pat({-0.2, 0.7, 2.1});
    const auto v = p.view();
    CHECK(v.T(-1) == std::nullopt);
    CHECK(v.T(3) == std::nullopt);
    CHECK(v.alpha(2) == std::nullopt);
    CHECK(*v.alpha(1) == doctest::Approx(1.4));
    CHECK(v.count(-10, 0) == std::nullopt);

    const auto at = v.at_event(2);
    REQUIRE(at);
    CHECK(*at->T(0) == 0.0);
    CHECK(*at->T(-1) == doctest::Approx(-1.4));
    CHECK(v.count_closed_open(0.7, 2.1) == 1u);
}

TEST_CASE("clip keeps the sub-window")
{
    const auto p = pat({-3, -1, 0.5, 2, 4});
    const auto c = p.clip(Window{-1, 2});
    CHECK(c.window() == Window{-1, 2});
    CHECK(c.size() == 3);
    CHECK(c.points()[0] == -1);
    CHECK(code_of([&] { p.clip(Window{50, 60}); }) == ErrorCode::OutsideWindow);
}

TEST_CASE("pattern text round trip")
{
    const std::vector<PointPattern> ps{pat({-0.1, 0.3}), pat({-0.1, 1.0 / 3.0}), PointPattern({}, Window{-1, 1})};
    const std::vector<double> w{1.0, 0.25, 2.0};
    std::stringstream ss;
    write_patterns(ss, ps, w);
    const auto back = read_patterns(ss);
    REQUIRE(back.patterns.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.patterns[i] == ps[i]);
        CHECK(back.weights[i] == w[i]);
    }

    std::istringstream bad("0.1,0.2\n");
    CHECK(code_of([&] { read_patterns(bad); }) == ErrorCode::ParseError);
}

TEST_CASE("properties on random patterns")
{
    Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_pattern(rng, 1 + static_cast<int>(rng.uniform() * 8), 1 + static_cast<int>(rng.uniform() * 8));
        CAPTURE(trial);

        // Straddling convention.
        CHECK(p.T(0) <= 0.0);
        CHECK(p.T(1) > 0.0);
        CHECK(p.interval(0) == p.T(1) - p.T(0));

        // shift_event = shift_time(T_n).
        const auto [i0, i1] = p.locate_indices();
        const int lo_n = -static_cast<int>(i0);
        const int hi_n = static_cast<int>(p.size() - i1);
        const int n = lo_n + static_cast<int>(rng.uniform() * (hi_n - lo_n + 1));
        CHECK(p.shift_event(n) == p.shift_time(p.T(n)));
        CHECK(p.shift_event(n).T(0) == 0.0);

        // Additivity and shift covariance of counts.
        const double lo = p.window().lo, hi = p.window().hi;
        double a = lo + rng.uniform() * (hi - lo), b = lo + rng.uniform() * (hi - lo),
               c = lo + rng.uniform() * (hi - lo);
        if (a > b)
            std::swap(a, b);
        if (b > c)
            std::swap(b, c);
        if (a > b)
            std::swap(a, b);
        CHECK(p.count(a, c) == p.count(a, b) + p.count(b, c));

        const double y = (rng.uniform() - 0.5) * 4;
        const auto s = p.shift_time(y);
        // The shifted window is [lo - y, hi - y], so (a - y, b - y] sits inside it.
        CHECK(s.count(a - y, b - y) == p.count(a, b));
    }
}
