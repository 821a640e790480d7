#include "doctest.h"
#include "support.hpp"

#include "palmlab/error.hpp"
#include "palmlab/estimate.hpp"
#include "palmlab/events.hpp"
#include "palmlab/models.hpp"

#include <cmath>

using namespace palmlab;
using palmlab::test::random_pattern;

namespace {

PointPattern pat(std::vector<double> pts)
{
    return PointPattern(std::move(pts), Window{-5, 5});
}

Outcome at(const Eventuality& e, const PointPattern& p)
{
    return e(p.view());
}

constexpr Outcome T = Outcome::True;
constexpr Outcome F = Outcome::False;
constexpr Outcome I = Outcome::Indeterminate;

// Eventualities with a finite radius, used by the locality property.
std::vector<Eventuality> local_catalog()
{
    return {
        ev_count_eq(0, 1, 0),
        ev_count_eq(-0.5, 0.5, 1),
        ev_count(-2, 1, Comparison::GreaterEqual, 2),
        ev_not(ev_count(0, 0.3, Comparison::Less, 1)),
        ev_or(ev_count_eq(-1, 0, 0), ev_count(0, 2, Comparison::LessEqual, 1)),
        ev_interval_gt(0, 1.0, 3.0),
        ev_interval_gt(-1, 0.5, 3.0),
        ev_first_point_le(0.7, 2.0),
        ev_point(0, Comparison::Greater, -0.4, 2.0),
        ev_and(ev_interval_gt(1, 0.3, 2.5), ev_count_eq(-1, 1, 2)),
    };
}

}  // namespace

TEST_CASE("interval atoms")
{
    const auto p = pat({-0.2, 0.7, 2.1});
    CHECK(at(ev_interval_gt(0, 0.5), p) == T);
    CHECK(at(ev_interval_gt(0, 0.0), p) == T);
    CHECK(at(ev_interval_gt(-1, 2), pat({-3, -1, 2})) == F);
    CHECK(at(ev_interval_gt(-1, 1.999), pat({-3, -1, 2})) == T);
    // α_{-1} needs T_{-1}, which is not stored.
    CHECK(at(ev_interval_gt(-1, 0.5), p) == I);
    CHECK(at(ev_interval(0, Comparison::Equal, 0.9), pat({-0.25, 0.75})) == F);
    CHECK(at(ev_interval(0, Comparison::Equal, 1.0), pat({-0.25, 0.75})) == T);
}

TEST_CASE("count atoms")
{
    const auto p = pat({-0.2, 0.7, 2.1});
    CHECK(at(ev_count_eq(0, 2, 1), p) == T);
    CHECK(at(ev_count_eq(0, 2, 0), p) == F);
    CHECK(at(ev_count_eq(0, 2.1, 2), p) == T);
    CHECK(at(ev_count_eq(-7, 0, 0), p) == I);
    CHECK(ev_count_eq(-3, 2, 1).radius() == 3.0);
}

TEST_CASE("first point atoms")
{
    const auto p = pat({-0.2, 0.7});
    CHECK(at(ev_first_point_le(1.0), p) == T);
    CHECK(at(ev_first_point_le(0.5), p) == F);
    // Past the horizon, T_1 is not trusted.
    CHECK(at(ev_first_point_le(1.0, 0.5), p) == I);
}

TEST_CASE("horizons turn far-away reads into Indeterminate")
{
    const auto p = pat({-0.2, 3.5});
    const auto e = ev_interval_gt(0, 1.0);
    CHECK(at(e, p) == T);
    CHECK(at(e.bounded(2.0), p) == I);
    CHECK(e.bounded(2.0).radius() == 2.0);
    CHECK(at(e.bounded(4.0), p) == T);
}

TEST_CASE("combinators")
{
    const auto p = pat({-0.2, 0.7, 2.1});
    const auto a = ev_interval_gt(0, 0.5);
    const auto b = ev_count_eq(0, 2, 0);
    const auto ind = ev_interval_gt(-1, 0.5);
    CHECK(at(ev_and(a, b), p) == F);
    CHECK(at(ev_or(a, b), p) == T);
    CHECK(at(ev_not(a), p) == F);
    CHECK(at(ev_true(), p) == T);
    CHECK(at(ev_false(), p) == F);
    // Indeterminate is never resolved by the other operand.
    CHECK(at(ev_and(b, ind), p) == I);
    CHECK(at(ev_or(a, ind), p) == I);
    CHECK(at(ev_not(ind), p) == I);
    CHECK(ev_and(ev_count_eq(-3, 0, 1), ev_count_eq(0, 1, 0)).radius() == 3.0);
}

TEST_CASE("combinator identities hold pointwise on random patterns")
{
    Rng rng(11);
    const auto cat = local_catalog();
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_pattern(rng, 6, 6);
        for (const auto& a : cat) {
            CAPTURE(a.label());
            const Outcome v = at(a, p);
            CHECK(at(ev_not(ev_not(a)), p) == v);
            CHECK(at(ev_and(a, ev_true()), p) == v);
            CHECK(at(ev_or(a, ev_false()), p) == v);
            if (v != I)
                CHECK(at(ev_or(a, ev_not(a)), p) == T);
        }
    }
}

TEST_CASE("locality: clipping to the radius does not change the value")
{
    Rng rng(12);
    const auto cat = local_catalog();
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = random_pattern(rng, 10, 10, 4.0);
        for (const auto& a : cat) {
            const double r = a.radius();
            if (p.window().lo > -r || p.window().hi < r)
                continue;
            CAPTURE(a.label());
            const auto clipped = p.clip(Window{-r, r});
            const Outcome full = at(a, p);
            const Outcome local = at(a, clipped);
            if (full != I)
                CHECK(local == full);
        }
    }
}

TEST_CASE("evaluating at eta_n equals evaluating A composed with eta_n")
{
    Rng rng(13);
    const auto cat = local_catalog();
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_pattern(rng, 8, 8, 4.0);
        for (int n = -2; n <= 2; ++n) {
            const auto view = p.view().at_event(n);
            REQUIRE(view);
            const auto moved = p.shift_event(n);
            for (const auto& a : cat)
                CHECK(a(*view) == at(a, moved));
        }
    }
}

TEST_CASE("parser round trip")
{
    const char* inputs[] = {
        "alpha(0)>0.5",
        "count(0,1]==0",
        "T1<=0.7",
        "T(-2)>-3",
        "!(alpha(-1)<=0.5)&count(-0.5,0.5]==1",
        "count(0,2]<=1|alpha(0)>2",
        "(alpha(0)>1|alpha(1)>1)&!T1<=0.25",
        "true",
        "!false",
        "alpha(3)>=1e-3",
        "alpha(0)==1",
    };
    for (const char* text : inputs) {
        CAPTURE(text);
        const auto e = parse_eventuality(text);
        const auto again = parse_eventuality(e.label());
        CHECK(again.label() == e.label());
    }
    CHECK(parse_eventuality(" alpha( 0 ) > 0.5 ").label() == "alpha(0)>0.5");
    CHECK(parse_eventuality("T1<=0.7").label() == parse_eventuality("T(1)<=0.7").label());
    CHECK(parse_eventuality_list("alpha(0)>1; count(0,1]==0").size() == 2);

    for (const char* bad : {"", "alpha(0)>", "alpha>1", "count(0,1)==0", "count(0,1]==0.5", "alpha(0)>1 &",
                            "(alpha(0)>1", "beta(0)>1", "alpha(0)>1)"}) {
        CAPTURE(bad);
        try {
            parse_eventuality(bad);
            FAIL("parsed");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
        }
    }
}

TEST_CASE("parsed and constructed eventualities agree on random patterns")
{
    Rng rng(14);
    const auto parsed = parse_eventuality("!(alpha(-1)<=0.5)&count(-0.5,0.5]==1");
    const auto built = ev_and(ev_not(ev_interval(-1, Comparison::LessEqual, 0.5)), ev_count_eq(-0.5, 0.5, 1));
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_pattern(rng, 5, 5);
        CHECK(at(parsed, p) == at(built, p));
    }
}

TEST_CASE("count_marked")
{
    const auto p = PointPattern({-3, -2, -1, 0.5, 1, 2.5, 3, 4}, Window{-10, 10});
    CHECK(count_marked(p, -1.5, 3, ev_true()) == p.count(-1.5, 3));
    CHECK(count_marked(p, -1.5, 3, ev_interval_gt(0, 10, 5.0)) == 0);
    // Gaps starting at -1, 0.5, 1, 2.5: 1.5, 0.5, 1.5, 0.5.
    CHECK(count_marked(p, -1.5, 3, ev_interval_gt(0, 1, 5.0)) == 2);
    // Without a horizon the radius is unbounded and no window suffices.
    CHECK_THROWS_AS(count_marked(p, -1.5, 3, ev_interval_gt(0, 1)), Error);
    CHECK_THROWS_AS(count_marked(p, 3, 4, ev_interval_gt(0, 1)), Error);

    const auto small = PointPattern({-0.5, 0.5}, Window{-1, 1});
    try {
        count_marked(small, -1, 1, ev_count_eq(-2, 0, 1));
        FAIL("no context error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InsufficientContext);
    }

    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const auto q = random_pattern(rng, 8, 8, 5.0);
        for (const auto& a : local_catalog()) {
            std::size_t marked = 0;
            try {
                marked = count_marked(q, -1, 1, a);
            } catch (const Error&) {
                continue;
            }
            CHECK(marked <= q.count(-1, 1));
        }
    }
}

TEST_CASE("occupation time is exact on a hand-built pattern")
{
    // Points at -1, 0.5, 2: [N(0,1] = 0] holds for y with no point in (y, y+1].
    const auto p = PointPattern({-1, 0.5, 2, 5}, Window{-3, 7});
    const auto v = p.view();
    const auto occ = occupation_time(v, ev_count_eq(0, 1, 0), 0.0, 4.0);
    REQUIRE(occ);
    // Empty for y in (0.5, 1) and (2, 4]: 0.5 + 2.
    CHECK(*occ == doctest::Approx(2.5));
    CHECK(*occupation_time(v, ev_true(), 0.0, 4.0) == doctest::Approx(4.0));
    CHECK(occupation_time(v, ev_count_eq(0, 1, 0), 0.0, 6.5) == std::nullopt);
}

TEST_CASE("void probability of Poisson(1) is e^-1")
{
    const std::vector<Eventuality> ev{ev_count_eq(0, 1, 0)};
    const auto est = est_probability(*poisson_ts(1.0), ev, test::quick(20000));
    CHECK(test::near_value(est[0], std::exp(-1.0)));
}
