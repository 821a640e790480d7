#include "palmlab/identities.hpp"

#include "palmlab/ams.hpp"
#include "palmlab/error.hpp"
#include "palmlab/estimate.hpp"
#include "palmlab/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace palmlab {

namespace {

using Events = std::span<const Eventuality>;
using Rows = std::vector<IdentityRow>;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

Estimate exact_value(double v)
{
    Estimate e;
    e.value = v;
    e.std_error = 0.0;
    e.denominator = 1.0;
    return e;
}

/// 1 / e with a first-order standard error.
Estimate reciprocal(const Estimate& e)
{
    Estimate out = e;
    out.value = 1.0 / e.value;
    out.std_error = e.std_error / (e.value * e.value);
    return out;
}

std::vector<Eventuality> bind_all(Events events, double horizon)
{
    std::vector<Eventuality> out;
    for (const auto& e : events)
        out.push_back(e.bounded(horizon));
    return out;
}

/// Window padding that keeps every evaluation and breakpoint of `bound`
/// inside the sample with overwhelming probability.
double pad_for(const ProcessModel& model, const std::vector<Eventuality>& bound, const RunOptions& options)
{
    double pad = horizon_for(model, options);
    double reach = 0.0;
    for (const auto& e : bound) {
        if (std::isfinite(e.radius()))
            pad = std::max(pad, e.radius());
        for (double s : e.breakpoint_offsets())
            reach = std::max(reach, std::abs(s));
    }
    return pad + reach;
}

std::optional<double> indicator(const Eventuality& A, const PatternView& at)
{
    const Outcome o = A.evaluate(at);
    if (o == Outcome::Indeterminate)
        return std::nullopt;
    return o == Outcome::True ? 1.0 : 0.0;
}

std::optional<double> reciprocal_alpha0(const PatternView& v)
{
    const auto a = v.alpha(0);
    if (!a)
        return std::nullopt;
    return 1.0 / *a;
}

constexpr double gap_offsets[] = {0.0};

/// Storage positions with relative time in [a, b).
std::optional<std::pair<std::size_t, std::size_t>> positions_closed_open(const PatternView& v, double a, double b)
{
    if (a < v.lo() || b > v.hi())
        return std::nullopt;
    const auto pts = v.points();
    const auto first = std::lower_bound(pts.begin(), pts.end(), a + v.origin());
    const auto last = std::lower_bound(pts.begin(), pts.end(), b + v.origin());
    return std::pair{static_cast<std::size_t>(first - pts.begin()), static_cast<std::size_t>(last - pts.begin())};
}

Rows pair_rows(const std::string& prefix, const std::vector<Eventuality>& events, const std::vector<Estimate>& lhs,
               const std::vector<Estimate>& rhs)
{
    Rows rows;
    for (std::size_t j = 0; j < events.size(); ++j)
        rows.push_back({prefix + events[j].label(), lhs[j], rhs[j]});
    return rows;
}

/// E N(0, x] / x.
Estimate count_rate(const ProcessModel& model, double x, const RunOptions& options)
{
    const double pad = horizon_for(model, options);
    const PatternFunctional f = [x](const PatternView& v) -> std::optional<double> {
        const auto n = v.count(0.0, x);
        if (!n)
            return std::nullopt;
        return static_cast<double>(*n) / x;
    };
    return est_mean(model, std::span(&f, 1), {-pad, x + pad}, options).front();
}

/// E_es(α_0).
Estimate es_mean_gap(const ProcessModel& es, const RunOptions& options)
{
    const double pad = horizon_for(es, options);
    const PatternFunctional f = [](const PatternView& v) { return v.alpha(0); };
    return est_mean(es, std::span(&f, 1), {-pad, pad}, options).front();
}

/// Per-unit-time sums E Σ_{T_i ∈ (0, x]} f(η_i φ, j) / x, which equal
/// λ E⁰ f(·, j) on a TS model.
std::vector<Estimate> occurrence_rate(const ProcessModel& model, std::size_t k, double x, double pad,
                                      const RunOptions& options,
                                      const std::function<std::optional<double>(const PatternView&, std::size_t)>& f)
{
    const Window window{-pad, x + pad};
    const RatioAccumulator acc = replicate(options, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto [first, last] = view.positions_in(0.0, x);
        for (std::size_t j = 0; j < k; ++j) {
            double sum = 0.0;
            bool ok = true;
            for (std::size_t i = first; i < last && ok; ++i) {
                const auto v = f(view.at_position(i), j);
                ok = v.has_value();
                if (ok)
                    sum += *v;
            }
            if (ok)
                sink.accept(j, sum / x, 1.0);
            else
                sink.reject(j);
        }
    });
    return acc.finalize(model.deterministic());
}

bool is_ts(const ProcessModel& m) { return m.law() == LawTag::TS; }

bool is_ergodic_ts(const ProcessModel& m) { return is_ts(m) && m.es_companion() != nullptr; }

bool has_tilt(const ProcessModel& m)
{
    return m.law() == LawTag::TiltedTS && m.tilt().has_value() && m.es_companion() && m.ts_companion();
}

/// P = P*: TS laws and tilts that are invariant under η_0.
bool equals_pstar(const ProcessModel& m)
{
    if (m.descriptor().name() == "pstar")
        return false;
    return is_ts(m) || (has_tilt(m) && m.tilt()->event_invariant());
}

double ts_rate(const ProcessModel& m) { return 1.0 / m.ts_companion()->mean_gap(); }

// ---------------------------------------------------------------------------

Rows i23(const ModelPtr& model, Events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const Estimate rate = count_rate(*model, 10.0 * m, lo);

    // E(1/α_0) through the time average (1/m)∫_0^m 1/α_0∘θ_y dy, which
    // keeps the variance finite when α_0 has mass near 0.
    const double pad = horizon_for(*model, ro);
    const PatternFunctional inv = [m](const PatternView& v) -> std::optional<double> {
        const auto total = integrate_shifts(v, 0.0, m, gap_offsets, reciprocal_alpha0);
        if (!total)
            return std::nullopt;
        return *total / m;
    };
    const Estimate inv_alpha = est_mean(*model, std::span(&inv, 1), {-pad, m + pad}, ro).front();
    const Estimate inv_palm_mean = reciprocal(es_mean_gap(*model->es_companion(), ro));
    return {{"E(1/alpha(0))", rate, inv_alpha}, {"1/E0(alpha(0))", rate, inv_palm_mean}};
}

Rows i24(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const auto lhs = est_palm_zero(*model, events, 5.0 * m, lo);
    const auto rhs = est_palm_zero(*model, events, 20.0 * m, ro);
    return pair_rows("", bind_all(events, horizon_for(*model, lo)), lhs, rhs);
}

Rows i26(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const auto direct = est_probability(*model, events, lo);
    const double pad = pad_for(*model, bound, ro);
    Rows rows;
    for (int k : {0, 1}) {
        const auto rhs = occurrence_rate(*model, bound.size(), 4.0 * m, pad, ro.with_stream(ro.stream + k),
                                         [&](const PatternView& at, std::size_t j) -> std::optional<double> {
                                             const auto a = at.T(-k);
                                             const auto b = at.T(-k + 1);
                                             if (!a || !b)
                                                 return std::nullopt;
                                             return occupation_time(at, bound[j], *a, *b);
                                         });
        auto part = pair_rows("k=" + std::to_string(k) + ": ", bound, direct, rhs);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

Rows i27a(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const double pad = pad_for(*model, bound, ro);
    Rows rows;
    for (int n : {0, 1}) {
        const auto lhs = est_intermediate(*model, n, events, lo.with_stream(lo.stream + n)).estimates;
        const auto rhs = occurrence_rate(*model, bound.size(), 4.0 * m, pad, ro.with_stream(ro.stream + n),
                                         [&](const PatternView& at, std::size_t j) -> std::optional<double> {
                                             const auto a = at.alpha(-n);
                                             const auto o = indicator(bound[j], at);
                                             if (!a || !o)
                                                 return std::nullopt;
                                             return *a * *o;
                                         });
        auto part = pair_rows("n=" + std::to_string(n) + ": ", bound, lhs, rhs);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

Rows i27b(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const double x = 4.0 * m;
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const auto lhs = est_palm_zero(*model, events, x, lo);
    const double pad = pad_for(*model, bound, ro);
    const std::size_t k = bound.size();
    Rows rows;
    for (int n : {0, 1}) {
        // (1/λ) E(1/α_0 · 1_A∘η_n), with both expectations taken as time
        // averages over (0, x] so that the 1/α_0 singularity integrates out.
        const RatioAccumulator acc =
            replicate(ro.with_stream(ro.stream + n), k, [&](Rng& rng, std::size_t, RepSink& sink) {
                const WeightedPattern wp = model->sample(rng, {-pad, x + pad});
                sink.set_weight(wp.weight);
                const PatternView view = wp.pattern.view();
                const auto den = integrate_shifts(view, 0.0, x, gap_offsets, reciprocal_alpha0);
                for (std::size_t j = 0; j < k; ++j) {
                    const auto num = integrate_shifts(
                        view, 0.0, x, gap_offsets, [&](const PatternView& v) -> std::optional<double> {
                            const auto inv = reciprocal_alpha0(v);
                            const auto at = v.at_event(n);
                            if (!inv || !at)
                                return std::nullopt;
                            const auto o = indicator(bound[j], *at);
                            if (!o)
                                return std::nullopt;
                            return *inv * *o;
                        });
                    if (num && den)
                        sink.accept(j, *num, *den);
                    else
                        sink.reject(j);
                }
            });
        auto part = pair_rows("n=" + std::to_string(n) + ": ", bound, lhs, acc.finalize());
        rows.insert(rows.end(), part.begin(), part.end());
    }
    return rows;
}

Rows i28c(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const double pad = pad_for(*model, bound, lo);
    // f · (1/α_0) ∫_{T_0}^{T_1} g∘θ_y dy.
    auto side = [&](std::size_t f, std::size_t g) -> PatternFunctional {
        return [&bound, f, g](const PatternView& v) -> std::optional<double> {
            const auto t0 = v.T(0);
            const auto t1 = v.T(1);
            const auto o = indicator(bound[f], v);
            if (!t0 || !t1 || !o)
                return std::nullopt;
            const auto occ = occupation_time(v, bound[g], *t0, *t1);
            if (!occ)
                return std::nullopt;
            return *o * *occ / (*t1 - *t0);
        };
    };
    const std::size_t half = bound.size() / 2;
    std::vector<PatternFunctional> left, right;
    for (std::size_t i = 0; i < half; ++i) {
        left.push_back(side(i, i + half));
        right.push_back(side(i + half, i));
    }
    const auto lhs = est_mean(*model, left, {-pad, pad}, lo);
    const auto rhs = est_mean(*model, right, {-pad, pad}, ro);
    Rows rows;
    for (std::size_t i = 0; i < half; ++i)
        rows.push_back({"f=" + bound[i].label() + "; g=" + bound[i + half].label(), lhs[i], rhs[i]});
    return rows;
}

Rows i210c(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const double pad = pad_for(*model, bound, lo) + 3.0 * m;
    const Estimate rate = count_rate(*model, 10.0 * m, ro);
    Rows rows;

    const double xs[] = {0.5 * m, m, 3.0 * m};
    std::vector<PatternFunctional> per_x;
    for (double x : xs)
        per_x.push_back([x](const PatternView& v) -> std::optional<double> {
            const auto t0 = v.T(0);
            const auto t1 = v.T(1);
            if (!t0 || !t1)
                return std::nullopt;
            const auto n = v.count_closed_open(x + *t0, x + *t1);
            if (!n)
                return std::nullopt;
            return static_cast<double>(*n) / (*t1 - *t0);
        });
    const auto lhs = est_mean(*model, per_x, {-pad, pad}, lo);
    for (std::size_t i = 0; i < 3; ++i)
        rows.push_back({"x=" + format_double(xs[i]) + ": N[x+T0,x+T1)/alpha(0)", lhs[i], rate});

    // P⁰(A) against E(N_A[x + T_0, x + T_1) / α_0) / E(N[x + T_0, x + T_1) / α_0).
    const auto palm = est_palm_zero(*model, events, 10.0 * m, lo);
    const double x = m;
    const std::size_t k = bound.size();
    const RatioAccumulator acc = replicate(ro, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model->sample(rng, {-pad, pad});
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto t0 = view.T(0);
        const auto t1 = view.T(1);
        const auto range = t0 && t1 ? positions_closed_open(view, x + *t0, x + *t1) : std::nullopt;
        if (!range) {
            sink.reject_all();
            return;
        }
        const double a0 = *t1 - *t0;
        const double total = static_cast<double>(range->second - range->first);
        for (std::size_t j = 0; j < k; ++j) {
            double marked = 0.0;
            bool ok = true;
            for (std::size_t i = range->first; i < range->second && ok; ++i) {
                const auto o = indicator(bound[j], view.at_position(i));
                ok = o.has_value();
                marked += o.value_or(0.0);
            }
            if (ok)
                sink.accept(j, marked / a0, total / a0);
            else
                sink.reject(j);
        }
    });
    auto part = pair_rows("x=" + format_double(x) + ": ", bound, palm, acc.finalize());
    rows.insert(rows.end(), part.begin(), part.end());
    return rows;
}

Rows i37(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const double h = 0.1 * m;
    const double span = 12.0 * m;
    std::vector<Eventuality> picked;
    for (std::size_t j : {0, 2, 6})
        if (j < events.size())
            picked.push_back(events[j]);
    const auto bound = bind_all(picked, horizon_for(*model, lo));
    const std::size_t k = bound.size();
    const RunOptions heavy_l = lo.with_reps(2 * lo.reps);
    const RunOptions heavy_r = ro.with_reps(2 * ro.reps);
    const double pad = pad_for(*model, bound, ro);

    Rows rows;
    for (int n : {0, 1}) {
        const auto bins = n == 0 ? uniform_bins(-span, 0.0, h) : uniform_bins(0.0, span, h);
        const std::size_t nb = bins.size();
        const auto lhs = est_intermediate(*model, n, picked, heavy_l.with_stream(heavy_l.stream + n)).estimates;
        const auto lambda = est_intensity(*model, bins, heavy_r.with_stream(heavy_r.stream + 2 * n)).rate;

        // Per bin: P^{0,x}(A ∩ [T_{-n} <= -x < T_{-n+1}]) at the bin centre.
        const RatioAccumulator acc = replicate(
            heavy_r.with_stream(heavy_r.stream + 2 * n + 1), k * nb, [&](Rng& rng, std::size_t, RepSink& sink) {
                const WeightedPattern wp = model->sample(rng, {-span - pad, span + pad});
                sink.set_weight(wp.weight);
                const PatternView view = wp.pattern.view();
                const auto [first, last] = view.positions_in(bins.front().lo, bins.back().hi);
                for (std::size_t i = first; i < last; ++i) {
                    const double t = view.relative(i);
                    const auto b = static_cast<std::size_t>(std::clamp((t - bins.front().lo) / h, 0.0,
                                                                       static_cast<double>(nb - 1)));
                    if (!(t > bins[b].lo && t <= bins[b].hi))
                        continue;
                    const PatternView at = view.at_position(i);
                    const double x = bins[b].center();
                    const auto a = at.T(-n);
                    const auto c = at.T(-n + 1);
                    for (std::size_t j = 0; j < k; ++j) {
                        const auto o = indicator(bound[j], at);
                        if (!a || !c || !o) {
                            sink.reject(j * nb + b);
                            continue;
                        }
                        const bool inside = *a <= -x && -x < *c;
                        sink.accept(j * nb + b, inside ? *o : 0.0, 1.0);
                    }
                }
            });
        const auto ratio = acc.finalize();
        for (std::size_t j = 0; j < k; ++j) {
            Estimate rhs = exact_value(0.0);
            double var = 0.0;
            for (std::size_t b = 0; b < nb; ++b) {
                const Estimate& r = ratio[j * nb + b];
                if (!(r.denominator > 0.0))
                    continue;
                const double w = bins[b].width();
                rhs.value += r.value * lambda[b].value * w;
                var += w * w *
                       (lambda[b].value * lambda[b].value * r.std_error * r.std_error +
                        r.value * r.value * lambda[b].std_error * lambda[b].std_error);
            }
            rhs.std_error = std::sqrt(var);
            rhs.reps = heavy_r.reps;
            rows.push_back({"k=" + std::to_string(n) + ": " + bound[j].label(), lhs[j], rhs});
        }
    }
    return rows;
}

/// Bin-averaged λ*_A(x)/λ*(x) from E(N_A[x + T_0, x + T_1)/α_0) with x
/// uniform inside each bin.
std::vector<Estimate> pstar_palm_ratio(const ProcessModel& model, const std::vector<Eventuality>& bound,
                                       std::span<const Bin> bins, const RunOptions& options)
{
    const std::size_t k = bound.size();
    const std::size_t nb = bins.size();
    double reach = 0.0;
    for (const auto& b : bins)
        reach = std::max({reach, std::abs(b.lo), std::abs(b.hi)});
    const double pad = pad_for(model, bound, options) + reach;
    const RatioAccumulator acc = replicate(options, k * nb, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, {-pad, pad});
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto t0 = view.T(0);
        const auto t1 = view.T(1);
        if (!t0 || !t1) {
            sink.reject_all();
            return;
        }
        const double a0 = *t1 - *t0;
        for (std::size_t b = 0; b < nb; ++b) {
            const double x = bins[b].lo + rng.uniform() * bins[b].width();
            const auto range = positions_closed_open(view, x + *t0, x + *t1);
            for (std::size_t j = 0; j < k; ++j) {
                if (!range) {
                    sink.reject(j * nb + b);
                    continue;
                }
                double marked = 0.0;
                bool ok = true;
                for (std::size_t i = range->first; i < range->second && ok; ++i) {
                    const auto o = indicator(bound[j], view.at_position(i));
                    ok = o.has_value();
                    marked += o.value_or(0.0);
                }
                if (ok)
                    sink.accept(j * nb + b, marked / a0, static_cast<double>(range->second - range->first) / a0);
                else
                    sink.reject(j * nb + b);
            }
        }
    });
    return acc.finalize();
}

Rows profile_rows(const std::vector<ShiftedPalmProfile>& profiles, const std::vector<Estimate>& rhs,
                  std::span<const Bin> bins)
{
    Rows rows;
    const std::size_t nb = bins.size();
    for (std::size_t j = 0; j < profiles.size(); ++j)
        for (std::size_t b = 0; b < nb; ++b)
            rows.push_back({"x=" + format_double(bins[b].center()) + ": " + profiles[j].label,
                            profiles[j].estimates[b], rhs[j * nb + b]});
    return rows;
}

Rows i313(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const std::vector<double> centers{-m, 0.5 * m, 2.0 * m};
    const auto bins = bins_around(centers, 0.1 * m);
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const auto lhs = est_shifted_palm(*model, events, bins, lo);
    return profile_rows(lhs, pstar_palm_ratio(*model, bound, bins, ro), bins);
}

Rows i44(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const ModelPtr es = model->es_companion();
    const auto bound = bind_all(events, horizon_for(*model, lo));
    Rows rows = pair_rows("es->ts: ", bound, convert_es_to_ts(*es, events, lo), est_probability(*model, events, ro));
    auto back = pair_rows("ts->es: ", bound, convert_ts_to_es(*model, events, lo.with_stream(lo.stream + 1)),
                          est_probability(*es, events, ro.with_stream(ro.stream + 1)));
    rows.insert(rows.end(), back.begin(), back.end());
    return rows;
}

Rows i45(const ModelPtr& model, Events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    constexpr int n = 50;
    const Estimate long_run = count_rate(*model, n * m, lo);
    const ModelPtr es = model->es_companion();
    const double pad = horizon_for(*es, ro);
    const RatioAccumulator acc = replicate(ro, 1, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = es->sample(rng, {-pad, 3.0 * n * m + pad});
        const auto tn = wp.pattern.view().T(n);
        if (tn)
            sink.accept(0, n, *tn);
        else
            sink.reject(0);
    });
    return {{"N(0,x]/x vs n/T(n)", long_run, acc.finalize().front()}};
}

Rows i42(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const Eventuality A = model->deterministic() || events.empty() ? ev_example44() : events.front();
    constexpr std::size_t n_max = 1024;
    const std::size_t reps = std::min<std::size_t>(lo.reps, 2000);
    const auto ev = ams_verdict(cesaro_event(*model, A, n_max, lo.with_reps(reps)));
    const auto tv = ams_verdict(cesaro_time(*model, A, n_max * model->mean_gap(), ro.with_reps(reps)));
    return {{"event vs time verdict: " + A.bounded(horizon_for(*model, lo)).label(),
             exact_value(static_cast<double>(ev.status)), exact_value(static_cast<double>(tv.status))}};
}

/// δ_0 = λ_ts ∫_0^{α_0} σ∘θ_y dy on a Palm sample of the dominating law.
PatternFunctional delta0(const ProcessModel& model)
{
    const Tilt tilt = *model.tilt();
    const double rate = ts_rate(model);
    return [tilt, rate](const PatternView& v) -> std::optional<double> {
        const auto a0 = v.alpha(0);
        if (!a0)
            return std::nullopt;
        const auto offsets = tilt.breakpoint_offsets();
        const auto integral =
            integrate_shifts(v, 0.0, *a0, offsets, [&tilt](const PatternView& w) { return tilt.evaluate(w); });
        if (!integral)
            return std::nullopt;
        return rate * *integral;
    };
}

Rows i52a(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const ModelPtr es = model->es_companion();
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const double pad = pad_for(*es, bound, ro);
    const PatternFunctional d = delta0(*model);
    std::vector<PatternFunctional> fs{d};
    for (const auto& A : bound)
        fs.push_back([&A, d](const PatternView& v) -> std::optional<double> {
            const auto w = d(v);
            const auto o = indicator(A, v);
            if (!w || !o)
                return std::nullopt;
            return *w * *o;
        });
    const auto rhs = est_mean(*es, fs, {-pad, pad}, ro);
    Rows rows{{"E0_ts(delta0)", rhs.front(), exact_value(1.0)}};
    const auto lhs = est_intermediate(*model, 0, events, lo).estimates;
    for (std::size_t j = 0; j < bound.size(); ++j)
        rows.push_back({bound[j].label(), lhs[j], rhs[j + 1]});
    return rows;
}

Rows i71b(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const auto bound = bind_all(events, horizon_for(*model, lo));
    return pair_rows("", bound, est_probability(*model, events, lo), est_probability(*pstar(model), events, ro));
}

Rows i81a(const ModelPtr& model, Events, const RunOptions& lo, const RunOptions& ro)
{
    const double m = model->mean_gap();
    const std::vector<double> centers{-2.0 * m, -m, 0.0, m, 2.0 * m};
    const auto bins = bins_around(centers, 0.1 * m);
    const auto lhs = est_intensity(*model, bins, lo).rate;

    const ModelPtr es = model->es_companion();
    const Tilt tilt = *model->tilt();
    const double rate = ts_rate(*model);
    const double pad = horizon_for(*es, ro) + 3.0 * m;
    const std::size_t nb = bins.size();
    const RatioAccumulator acc = replicate(ro, nb, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = es->sample(rng, {-pad, pad});
        const PatternView view = wp.pattern.view();
        for (std::size_t b = 0; b < nb; ++b) {
            const double y = bins[b].lo + rng.uniform() * bins[b].width();
            const auto s = tilt.evaluate(view.shifted(-y));
            if (s)
                sink.accept(b, rate * *s, 1.0);
            else
                sink.reject(b);
        }
    });
    const auto rhs = acc.finalize();
    Rows rows;
    for (std::size_t b = 0; b < nb; ++b)
        rows.push_back({"lambda(" + format_double(bins[b].center()) + ")", lhs[b], rhs[b]});
    return rows;
}

Rows i84rho(const ModelPtr& model, Events events, const RunOptions& lo, const RunOptions& ro)
{
    const double rate = parse_double(*model->descriptor().find("rate"));
    const double m = model->mean_gap();
    const std::vector<double> centers{-m, 0.5 * m};
    const auto bins = bins_around(centers, 0.1 * m);
    const auto bound = bind_all(events, horizon_for(*model, lo));
    const auto lhs = est_shifted_palm(*model, events, bins, lo);

    // λ_ts E⁰_ts(1_A α_0∘θ_{-x}) / (2 - e^{-λ_ts|x|}), x uniform in the bin.
    const ModelPtr es = model->es_companion();
    const double pad = pad_for(*es, bound, ro) + 2.0 * m;
    const std::size_t k = bound.size();
    const std::size_t nb = bins.size();
    const RatioAccumulator acc = replicate(ro, k * nb, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = es->sample(rng, {-pad, pad});
        const PatternView view = wp.pattern.view();
        for (std::size_t b = 0; b < nb; ++b) {
            const double x = bins[b].lo + rng.uniform() * bins[b].width();
            const auto a = view.shifted(-x).alpha(0);
            const double den = 2.0 - std::exp(-rate * std::abs(x));
            for (std::size_t j = 0; j < k; ++j) {
                const auto o = indicator(bound[j], view);
                if (a && o)
                    sink.accept(j * nb + b, rate * *o * *a, den);
                else
                    sink.reject(j * nb + b);
            }
        }
    });
    return profile_rows(lhs, acc.finalize(), bins);
}

std::vector<IdentitySpec> build_registry()
{
    auto any_stochastic = [](const ProcessModel& m) { return !m.deterministic() && m.law() != LawTag::ES; };
    auto example84 = [](const ProcessModel& m) { return m.descriptor().name() == "example84_exact"; };
    auto tilted_pstar = [](const ProcessModel& m) { return has_tilt(m) && equals_pstar(m); };
    std::vector<IdentitySpec> r;
    r.push_back({"I-2.3", "lambda = 1/E0(alpha0) = E(1/alpha0)", default_atol, is_ergodic_ts, i23});
    r.push_back({"I-2.4", "ratio-form Palm probability is independent of x", default_atol, is_ts, i24});
    r.push_back({"I-2.6", "inversion formula over (T(-k), T(-k+1)]", default_atol, is_ts, i26});
    r.push_back({"I-2.7a", "P_n(A) = lambda E0(alpha(-n) 1_A)", default_atol, is_ts, i27a});
    r.push_back({"I-2.7b", "P0(A) = E(1_A o eta_n / alpha0) / lambda", default_atol, is_ts, i27b});
    r.push_back({"I-2.8c", "E(f h_g) = E(g h_f)", default_atol, is_ts, i28c});
    r.push_back({"I-2.10c", "E(N[x+T0, x+T1)/alpha0) = lambda", default_atol, is_ts, i210c});
    r.push_back({"I-3.7", "P_k(A) as an integral of shifted Palm probabilities", 0.01, example84, i37});
    r.push_back({"I-3.13", "P = P* => P0x(A) = lambda_A(x)/lambda(x)", default_atol, tilted_pstar, i313});
    r.push_back({"I-4.2", "event and time Cesaro verdicts agree", 0.0, [](const ProcessModel& m) {
                     return m.deterministic() || m.law() != LawTag::ES;
                 }, i42});
    r.push_back({"I-4.4", "P_es and P_ts conversions", default_atol, is_ergodic_ts, i44});
    r.push_back({"I-4.5", "long-run count rate = 1 / long-run mean gap", default_atol, is_ergodic_ts, i45});
    r.push_back({"I-5.2a", "dP_0/dP0_ts = lambda_ts int_0^alpha0 sigma o theta_y dy", default_atol, has_tilt, i52a});
    r.push_back({"I-7.1b", "P = P* when sigma o eta_0 = sigma", default_atol,
                 [any_stochastic](const ProcessModel& m) { return any_stochastic(m) && equals_pstar(m); }, i71b});
    r.push_back({"I-8.1a", "lambda(y) = lambda_ts E0_ts(sigma o theta_-y)", default_atol, has_tilt, i81a});
    r.push_back({"I-8.4rho", "P0x(A) = lambda E0_ts(1_A alpha0 o theta_-x) / (2 - exp(-lambda|x|))", default_atol,
                 example84, i84rho});
    return r;
}

}  // namespace

bool identity_holds(const Estimate& lhs, const Estimate& rhs, double z_crit, double atol) noexcept
{
    const double diff = std::abs(lhs.value - rhs.value);
    const double se = std::hypot(lhs.std_error, rhs.std_error);
    return diff <= z_crit * se + atol;
}

double z_score(const Estimate& lhs, const Estimate& rhs) noexcept
{
    const double diff = lhs.value - rhs.value;
    const double se = std::hypot(lhs.std_error, rhs.std_error);
    if (diff == 0.0)
        return 0.0;
    if (!(se > 0.0))
        return diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    return diff / se;
}

const std::vector<IdentitySpec>& identity_registry()
{
    static const std::vector<IdentitySpec> registry = build_registry();
    return registry;
}

const IdentitySpec* find_identity(std::string_view id)
{
    for (const auto& s : identity_registry())
        if (s.id == id)
            return &s;
    return nullptr;
}

std::vector<Eventuality> default_battery(double m)
{
    return {
        ev_interval_gt(0, m),
        ev_interval(0, Comparison::LessEqual, 0.5 * m),
        ev_interval_gt(-1, m),
        ev_and(ev_interval_gt(1, 0.5 * m), ev_interval(0, Comparison::LessEqual, 2.0 * m)),
        ev_first_point_le(0.5 * m),
        ev_point(0, Comparison::Greater, -0.5 * m),
        ev_count_eq(0.0, m, 0),
        ev_count(-m, m, Comparison::GreaterEqual, 2),
        ev_or(ev_count(0.0, 2.0 * m, Comparison::LessEqual, 1), ev_interval_gt(0, 2.0 * m)),
        ev_and(ev_not(ev_interval(-1, Comparison::LessEqual, 0.5 * m)), ev_count_eq(-0.5 * m, 0.5 * m, 1)),
    };
}

std::vector<IdentityReport> check_identity(const IdentitySpec& spec, const ModelPtr& model,
                                           std::span<const Eventuality> events, const RunOptions& options,
                                           double z_crit)
{
    const std::string label = model->descriptor().label();
    if (!spec.applicable(*model))
        throw Error(ErrorCode::NotApplicable, spec.id + " does not apply to " + label);
    const std::string key = spec.id + "|" + label;
    const RunOptions lo = options.with_stream(mix64(options.stream ^ stream_id(key + "|lhs")));
    const RunOptions ro = options.with_stream(mix64(options.stream ^ stream_id(key + "|rhs")));
    std::vector<IdentityReport> out;
    for (auto& row : spec.evaluate(model, events, lo, ro)) {
        IdentityReport r;
        r.id = spec.id;
        r.model = label;
        r.eventuality = std::move(row.eventuality);
        r.lhs = row.lhs;
        r.rhs = row.rhs;
        r.z = z_score(row.lhs, row.rhs);
        r.pass = identity_holds(row.lhs, row.rhs, z_crit, spec.atol);
        r.reps = options.reps;
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<ModelPtr> default_suite_models()
{
    return {poisson_ts(1.0), renewal_ts_from_es(IntervalDistribution::gamma(2.0, 1.0)), example84_exact(1.0),
            example44(5000)};
}

std::vector<IdentityReport> run_suite(std::span<const ModelPtr> models, const RunOptions& options,
                                      const SuiteOptions& suite)
{
    for (const auto& id : suite.only)
        if (!find_identity(id))
            throw Error(ErrorCode::InvalidArgument, "unknown identity '" + id + "'");
    std::vector<IdentityReport> out;
    for (const auto& spec : identity_registry()) {
        if (!suite.only.empty() && std::find(suite.only.begin(), suite.only.end(), spec.id) == suite.only.end())
            continue;
        for (const auto& model : models) {
            if (!spec.applicable(*model))
                continue;
            const auto battery = default_battery(model->mean_gap());
            try {
                auto part = check_identity(spec, model, battery, options, suite.z_crit);
                out.insert(out.end(), part.begin(), part.end());
            } catch (const Error& e) {
                IdentityReport r;
                r.id = spec.id;
                r.model = model->descriptor().label();
                r.eventuality = std::string("error: ") + e.what();
                r.lhs.value = r.rhs.value = nan;
                r.z = nan;
                r.pass = false;
                r.reps = options.reps;
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

}  // namespace palmlab
