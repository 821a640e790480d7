#include "doctest.h"
#include "support.hpp"

#include "palmlab/error.hpp"
#include "palmlab/estimate.hpp"
#include "palmlab/models.hpp"

#include <cmath>

using namespace palmlab;
using test::agrees;
using test::near_value;
using test::quick;

namespace {

std::optional<double> alpha(const PatternView& v, int n)
{
    return v.alpha(n);
}

Estimate mean_of(const ModelPtr& model, PatternFunctional f, std::size_t reps, Window w = {-30, 30},
                 std::uint64_t stream = 0)
{
    const std::vector<PatternFunctional> fs{std::move(f)};
    return est_mean(*model, fs, w, quick(reps, stream))[0];
}

Estimate prob_of(const ModelPtr& model, const Eventuality& e, std::size_t reps, std::uint64_t stream = 0)
{
    const std::vector<Eventuality> ev{e};
    return est_probability(*model, ev, quick(reps, stream))[0];
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

// Gamma(shape, 1) survival by Simpson quadrature of the density, an oracle
// independent of the closed forms used elsewhere.
double gamma_survival_quadrature(int shape, double x)
{
    double fact = 1;
    for (int k = 2; k < shape; ++k)
        fact *= k;
    const auto f = [&](double t) { return std::pow(t, shape - 1) * std::exp(-t) / fact; };
    const int n = 20000;
    const double h = x / n;
    double s = f(0) + f(x);
    for (int i = 1; i < n; ++i)
        s += f(i * h) * (i % 2 ? 4 : 2);
    return 1.0 - s * h / 3;
}

}  // namespace

TEST_CASE("samplers are reproducible")
{
    const std::vector<ModelPtr> models{poisson_ts(1), renewal_es(IntervalDistribution::gamma(2, 1)),
                                       renewal_ts_from_es(IntervalDistribution::uniform(0.5, 1.5)),
                                       tilted_ts(poisson_ts(1), Tilt::scaled_alpha0(0.5)), example84_exact(1),
                                       pstar(poisson_ts(1))};
    for (const auto& m : models) {
        CAPTURE(m->descriptor().label());
        const auto a = m->sample(99, Window{-20, 20});
        const auto b = m->sample(99, Window{-20, 20});
        CHECK(a.pattern == b.pattern);
        CHECK(a.weight == b.weight);
        CHECK(a.pattern.T(0) <= 0.0);
        CHECK(a.pattern.T(1) > 0.0);
    }
}

TEST_CASE("ES samplers put a point at 0")
{
    for (const auto& d : {IntervalDistribution::exponential(2), IntervalDistribution::gamma(2, 1),
                          IntervalDistribution::uniform(0.2, 0.4), IntervalDistribution::deterministic(0.7)}) {
        const auto m = renewal_es(d);
        CHECK(m->law() == LawTag::ES);
        for (std::uint64_t s = 0; s < 50; ++s)
            CHECK(m->sample(s, Window{-10, 10}).pattern.T(0) == 0.0);
    }
}

TEST_CASE("deterministic renewal is the integer lattice")
{
    const auto p = renewal_es(IntervalDistribution::deterministic(1))->sample(1, Window{-5.5, 5.5}).pattern;
    REQUIRE(p.size() == 11);
    for (std::size_t i = 0; i < p.size(); ++i)
        CHECK(p.points()[i] == doctest::Approx(static_cast<double>(i) - 5.0).epsilon(1e-12));
}

TEST_CASE("interval distributions")
{
    CHECK(IntervalDistribution::gamma(2, 4).mean() == 0.5);
    CHECK(IntervalDistribution::uniform(1, 3).mean() == 2);
    CHECK(IntervalDistribution::exponential(1).survival(1) == doctest::Approx(std::exp(-1.0)));
    CHECK(IntervalDistribution::gamma(2, 1).survival(1) == doctest::Approx(gamma_survival_quadrature(2, 1)));
    CHECK(IntervalDistribution::uniform(1, 3).survival(2.5) == doctest::Approx(0.25));
    CHECK(IntervalDistribution::deterministic(1).survival(1) == 0.0);
    CHECK(code_of([] { IntervalDistribution::gamma(-1, 1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { IntervalDistribution::uniform(2, 1); }) == ErrorCode::InvalidArgument);

    // Length-biased Uniform(1, 3): mean E x² / E x = (13/3) / 2.
    Rng rng(3);
    const auto u = IntervalDistribution::uniform(1, 3);
    double s = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
        s += u.sample_length_biased(rng);
    CHECK(std::abs(s / n - 13.0 / 6.0) < 4 * 0.58 / std::sqrt(n));
}

TEST_CASE("poisson_ts")
{
    const auto m = poisson_ts(1);
    CHECK(m->law() == LawTag::TS);
    CHECK(code_of([&] { m->sample(1, Window{-1, 1}); }) == ErrorCode::DegenerateWindow);

    const auto n10 = mean_of(m, [](const PatternView& v) { return std::optional<double>(*v.count(0, 10)); }, 10000);
    CHECK(near_value(n10, 10.0));

    // P_ts[α0 > 1] = 2/e.
    CHECK(near_value(prob_of(m, ev_interval_gt(0, 1), 20000), 2 * std::exp(-1.0)));

    // E(1/α0) = λ, from time averages of 1/α0∘θ_y, which have finite variance.
    const auto inv = mean_of(
        m,
        [](const PatternView& v) -> std::optional<double> {
            const std::vector<double> off{0.0};
            const auto total = integrate_shifts(v, 0.0, 10.0, off, [](const PatternView& s) -> std::optional<double> {
                const auto a = s.alpha(0);
                return a ? std::optional<double>(1.0 / *a) : std::nullopt;
            });
            return total ? std::optional<double>(*total / 10.0) : std::nullopt;
        },
        10000);
    CHECK(near_value(inv, 1.0));
}

TEST_CASE("renewal_es moments")
{
    const auto e = renewal_es(IntervalDistribution::exponential(2));
    CHECK(near_value(mean_of(e, [](const PatternView& v) { return alpha(v, 0); }, 20000), 0.5));
    const auto g = renewal_es(IntervalDistribution::gamma(2, 1));
    CHECK(near_value(mean_of(g, [](const PatternView& v) { return alpha(v, 0); }, 20000), 2.0));
    CHECK(near_value(mean_of(g, [](const PatternView& v) { return alpha(v, -3); }, 20000), 2.0));
}

TEST_CASE("renewal_ts_from_es")
{
    const auto e = renewal_ts_from_es(IntervalDistribution::exponential(1));
    CHECK(e->law() == LawTag::TS);
    CHECK(near_value(mean_of(e, [](const PatternView& v) { return std::optional<double>(*v.count(0, 1)); }, 20000),
                     1.0));

    const auto g = renewal_ts_from_es(IntervalDistribution::gamma(2, 1));
    const auto ratio = [](const PatternView& v) -> std::optional<double> { return *v.T(1) / *v.alpha(0); };
    const auto ratio2 = [](const PatternView& v) -> std::optional<double> {
        const double r = *v.T(1) / *v.alpha(0);
        return r * r;
    };
    CHECK(near_value(mean_of(g, ratio, 20000), 0.5));
    CHECK(near_value(mean_of(g, ratio2, 20000), 1.0 / 3.0));

    const auto lattice = renewal_ts_from_es(IntervalDistribution::deterministic(1));
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto p = lattice->sample(s, Window{-10, 10}).pattern;
        CHECK(p.interval(0) == doctest::Approx(1.0));
        CHECK(p.interval(-3) == doctest::Approx(1.0));
    }
    CHECK(near_value(mean_of(lattice, ratio, 20000), 0.5));

    // Palm law of the inversion sampler is the ES renewal.
    const auto pz = est_palm_zero(*g, ev_interval_gt(0, 1.5), 10.0, quick(10000, 1));
    const auto es = prob_of(renewal_es(IntervalDistribution::gamma(2, 1)), ev_interval_gt(0, 1.5), 20000, 2);
    CHECK(agrees(pz, es));
}

TEST_CASE("identity tilt reproduces the base")
{
    const auto base = poisson_ts(1);
    const auto tilted = tilted_ts(base, Tilt::identity());
    for (const auto& e : {ev_interval_gt(0, 1), ev_count_eq(0, 1, 0), ev_first_point_le(0.5)})
        CHECK(agrees(prob_of(base, e, 10000, 1), prob_of(tilted, e, 10000, 2)));
}

TEST_CASE("tilted Poisson with sigma = alpha0/2")
{
    const auto m = tilted_ts(poisson_ts(1), Tilt::scaled_alpha0(0.5));
    CHECK(m->weighted());
    CHECK(m->law() == LawTag::TiltedTS);
    const auto est = prob_of(m, ev_interval_gt(0, 1), 40000);
    // Gamma(3) survival at 1, checked against quadrature first.
    const double oracle = gamma_survival_quadrature(3, 1.0);
    CHECK(oracle == doctest::Approx(std::exp(-1.0) * 2.5).epsilon(1e-9));
    CHECK(near_value(est, oracle));
    CHECK(est.ess < static_cast<double>(est.reps));
    CHECK(est.ess > 0.5 * static_cast<double>(est.reps));
}

TEST_CASE("example84_exact matches its importance-sampling oracle")
{
    const auto exact = example84_exact(1);
    const auto is = tilted_ts(poisson_ts(1), Tilt::scaled_alpha0(0.5));
    const std::vector<Eventuality> battery{ev_interval_gt(0, 2), ev_interval_gt(-1, 1), ev_count_eq(0, 1, 0),
                                           ev_first_point_le(0.5), ev_count(-1, 1, Comparison::GreaterEqual, 2)};
    const auto a = est_probability(*exact, battery, quick(20000, 1));
    const auto b = est_probability(*is, battery, quick(40000, 2));
    for (std::size_t i = 0; i < battery.size(); ++i) {
        CAPTURE(battery[i].label());
        CHECK(agrees(a[i], b[i]));
    }
    // 5/e² at x = 2.
    CHECK(near_value(a[0], gamma_survival_quadrature(3, 2.0)));
    CHECK(gamma_survival_quadrature(3, 2.0) == doctest::Approx(5 * std::exp(-2.0)).epsilon(1e-9));
    CHECK(near_value(mean_of(exact, [](const PatternView& v) { return alpha(v, 0); }, 20000), 3.0));
    CHECK(near_value(mean_of(exact, [](const PatternView& v) -> std::optional<double> {
                         return *v.T(1) / *v.alpha(0);
                     }, 20000),
                     0.5));
}

TEST_CASE("gamma_mix tilt: independence of alpha0 and alpha1")
{
    // Under σ = γ0 α0 + γ1 α1 on Poisson(1), with α0 ~ Gamma(2) and α1 ~ Exp(1)
    // independent under the base law:
    //   (0, 1):       Cov(α0, α1) = 4 - 2·2 = 0
    //   (0.25, 0.5):  Cov(α0, α1) = 3.5 - 2.5·1.5 = -0.25
    const auto cov = [](double g0, double g1) {
        const auto m = tilted_ts(poisson_ts(1), Tilt::gamma_mix(g0, g1));
        const std::vector<PatternFunctional> fs{
            [](const PatternView& v) { return v.alpha(0); },
            [](const PatternView& v) { return v.alpha(1); },
            [](const PatternView& v) -> std::optional<double> { return *v.alpha(0) * *v.alpha(1); },
        };
        const auto e = est_mean(*m, fs, Window{-30, 30}, quick(80000));
        return e[2].value - e[0].value * e[1].value;
    };
    CHECK(std::abs(cov(0, 1)) < 0.08);
    CHECK(std::abs(cov(0.5, 0)) < 0.08);
    const double dep = cov(0.25, 0.5);
    CHECK(dep < -0.15);
    CHECK(std::abs(dep + 0.25) < 0.08);
}

TEST_CASE("example44 sequences")
{
    const std::vector<std::uint64_t> a{4, 4, 8, 8, 24, 24, 72};
    const std::vector<std::uint64_t> b{4, 8, 16, 24, 48, 72};
    CHECK(example44_a(7) == a);
    CHECK(example44_b(6) == b);

    CHECK(example44_cesaro(8) == Rational{1, 2});
    CHECK(example44_cesaro(24) == Rational{1, 2});
    CHECK(example44_cesaro(16) == Rational{3, 4});
    CHECK(example44_cesaro(48) == Rational{3, 4});
    CHECK(example44_cesaro(4) == Rational{1, 1});

    // Cesàro values from the labels agree with the exact rationals.
    const auto x = example44_labels(200);
    std::uint64_t ones = 0;
    for (std::uint64_t n = 1; n <= 200; ++n) {
        ones += x[n - 1];
        const auto r = example44_cesaro(n);
        CHECK(r.num * n == ones * r.den);
    }
}

TEST_CASE("example44 realizes the labels as gaps")
{
    const auto m = example44(100);
    CHECK(m->deterministic());
    const auto p1 = m->sample(1, Window{-20, 400}).pattern;
    const auto p2 = m->sample(987654, Window{-20, 400}).pattern;
    CHECK(p1 == p2);
    CHECK(p1.T(0) == 0.0);
    CHECK(p1.T(1) == 1.0);
    const auto x = example44_labels(100);
    const auto e = ev_example44();
    for (int i = 1; i <= 100; ++i) {
        CHECK(p1.interval(i) == (x[i - 1] ? 1.0 : 2.0));
        CHECK(e(*p1.view().at_event(i)) == (x[i - 1] ? Outcome::True : Outcome::False));
    }
    CHECK(p1.interval(-5) == 1.0);
    CHECK(p1.points().back() == p1.T(101));
}

TEST_CASE("pstar pushforward")
{
    const auto m = pstar(renewal_es(IntervalDistribution::deterministic(1)));
    // Origin uniform inside the lattice gap.
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto p = m->sample(s, Window{-10, 10}).pattern;
        CHECK(p.interval(0) == doctest::Approx(1.0));
        CHECK(p.T(1) > 0.0);
    }
}

TEST_CASE("make_model")
{
    const auto m = make_model({{{"model", "renewal_ts_from_es"}, {"interval", "gamma"}, {"shape", "2"}, {"rate", "1"}}});
    CHECK(m->law() == LawTag::TS);
    CHECK(m->mean_gap() == 2.0);
    CHECK(m->descriptor().label() == "renewal_ts_from_es(interval=gamma,shape=2,rate=1)");

    const auto t = make_model({{{"model", "tilted_ts"}, {"base", "poisson_ts"}, {"rate", "1"}, {"tilt", "gamma_mix"},
                                {"gamma0", "0"}, {"gamma1", "1"}}});
    CHECK(t->weighted());

    CHECK(code_of([] { make_model({{{"model", "nope"}}}); }) == ErrorCode::UnknownModel);
    CHECK(code_of([] { make_model({{{"model", "poisson_ts"}}}); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { make_model({{{"model", "poisson_ts"}, {"rate", "x"}}}); }) == ErrorCode::ConfigError);
    CHECK(code_of([] {
              make_model({{{"model", "tilted_ts"}, {"base", "poisson_ts"}, {"rate", "1"}, {"tilt", "weird"}}});
          }) == ErrorCode::UnknownTilt);
    try {
        make_model({{{"model", "poisson_ts"}, {"rate", "x"}}});
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("rate") != std::string::npos);
    }
}
