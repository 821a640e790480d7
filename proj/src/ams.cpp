#include "palmlab/ams.hpp"

#include "palmlab/error.hpp"
#include "palmlab/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace palmlab {

std::string_view to_string(AmsStatus status) noexcept
{
    switch (status) {
    case AmsStatus::Convergent: return "Convergent";
    case AmsStatus::NotConvergent: return "NotConvergent";
    case AmsStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

namespace {

bool is_lattice(const ProcessModel& model)
{
    return model.descriptor().name() == "example44";
}

std::vector<double> merged(std::vector<double> a)
{
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

CesaroTrace to_trace(const std::vector<Estimate>& est, std::vector<double> checkpoints, std::string label,
                     bool event_indexed)
{
    CesaroTrace t;
    t.label = std::move(label);
    t.event_indexed = event_indexed;
    t.checkpoints = std::move(checkpoints);
    for (const auto& e : est) {
        t.value.push_back(e.value);
        t.std_error.push_back(e.std_error);
    }
    if (!est.empty()) {
        t.reps = est.front().reps;
        t.rejected = est.front().rejected;
    }
    return t;
}

void check_rejections(const CesaroTrace& t)
{
    if (t.reps == 0 || 2 * t.rejected > t.reps)
        throw Error(ErrorCode::InsufficientWindow,
                    std::to_string(t.rejected) + " of " + std::to_string(t.reps) +
                        " replications could not be evaluated up to the last checkpoint");
}

}  // namespace

std::vector<double> event_checkpoints(const ProcessModel& model, std::size_t n_max)
{
    std::vector<double> out;
    for (std::size_t n = 8; n <= n_max; n *= 2)
        out.push_back(static_cast<double>(n));
    if (is_lattice(model)) {
        for (std::uint64_t b : example44_b(40)) {
            if (b > n_max)
                break;
            out.push_back(static_cast<double>(b));
        }
    }
    return merged(std::move(out));
}

std::vector<double> time_checkpoints(const ProcessModel& model, double x_max)
{
    std::vector<double> out;
    const double m = model.mean_gap();
    for (double x = 8.0 * m; x <= x_max; x *= 2.0)
        out.push_back(x);
    if (is_lattice(model)) {
        const auto b = example44_b(40);
        const auto x = example44_labels(static_cast<std::size_t>(std::min<double>(x_max, 1e7)));
        // T_{n+1} = 1 + Σ_{i<=n} α_i with α_i = 1 or 2.
        double t = 1.0;
        std::size_t k = 0;
        for (std::size_t i = 1; i <= x.size() && k < b.size(); ++i) {
            t += x[i - 1] ? 1.0 : 2.0;
            if (i == b[k]) {
                if (t <= x_max)
                    out.push_back(t);
                ++k;
            }
        }
    }
    return merged(std::move(out));
}

CesaroTrace cesaro_event(const ProcessModel& model, const Eventuality& A, std::size_t n_max,
                         const RunOptions& options)
{
    const auto checkpoints = event_checkpoints(model, n_max);
    const double horizon = horizon_for(model, options);
    const Eventuality bound = A.bounded(horizon);
    const double pad = std::max(horizon, bound.radius());
    const Window window{-pad, 2.0 * static_cast<double>(n_max + 1) * model.mean_gap() + pad};
    const std::size_t k = checkpoints.size();
    const std::size_t last = checkpoints.empty() ? 0 : static_cast<std::size_t>(checkpoints.back());
    const RunOptions opts = model.deterministic() ? options.with_reps(1) : options;

    const RatioAccumulator acc = replicate(opts, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        double running = 0.0;
        std::size_t next = 0;
        for (std::size_t i = 1; i <= last; ++i) {
            const auto pos = view.position_of(static_cast<int>(i));
            const Outcome o = pos ? bound.evaluate(view.at_position(*pos)) : Outcome::Indeterminate;
            if (o == Outcome::Indeterminate) {
                sink.reject_all();
                return;
            }
            running += o == Outcome::True;
            while (next < k && static_cast<double>(i) == checkpoints[next]) {
                sink.accept(next, running / static_cast<double>(i), 1.0);
                ++next;
            }
        }
    });
    CesaroTrace trace = to_trace(acc.finalize(model.deterministic()), checkpoints, bound.label(), true);
    check_rejections(trace);
    return trace;
}

CesaroTrace cesaro_time(const ProcessModel& model, const Eventuality& A, double x_max, const RunOptions& options)
{
    const auto checkpoints = time_checkpoints(model, x_max);
    const double horizon = horizon_for(model, options);
    const Eventuality bound = A.bounded(horizon);
    double reach = 0.0;
    for (double s : bound.breakpoint_offsets())
        reach = std::max(reach, std::abs(s));
    const double pad = std::max(horizon, std::max(bound.radius(), reach));
    const double end = checkpoints.empty() ? 0.0 : checkpoints.back();
    const Window window{-pad, end + pad};
    const std::size_t k = checkpoints.size();
    const RunOptions opts = model.deterministic() ? options.with_reps(1) : options;

    const RatioAccumulator acc = replicate(opts, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        double occupied = 0.0;
        double from = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const auto piece = occupation_time(view, bound, from, checkpoints[c]);
            if (!piece) {
                sink.reject_all();
                return;
            }
            occupied += *piece;
            from = checkpoints[c];
            sink.accept(c, occupied / checkpoints[c], 1.0);
        }
    });
    CesaroTrace trace = to_trace(acc.finalize(model.deterministic()), checkpoints, bound.label(), false);
    check_rejections(trace);
    return trace;
}

AmsVerdict ams_verdict(const CesaroTrace& trace, double tail_fraction, double tol)
{
    const std::size_t k = trace.value.size();
    if (k < 6)
        throw Error(ErrorCode::TooFewCheckpoints,
                    "trace has " + std::to_string(k) + " checkpoints; at least 6 are needed");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0) || !(tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tail_fraction must lie in (0, 1] and tol must be > 0");
    const std::size_t tail =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(k))), 2, k);
    std::size_t imax = k - tail, imin = k - tail;
    double max_se = 0.0;
    for (std::size_t i = k - tail; i < k; ++i) {
        if (trace.value[i] > trace.value[imax])
            imax = i;
        if (trace.value[i] < trace.value[imin])
            imin = i;
        max_se = std::max(max_se, trace.std_error[i]);
    }
    AmsVerdict v;
    v.tail_fraction = tail_fraction;
    v.threshold = tol;
    v.oscillation = trace.value[imax] - trace.value[imin];
    v.oscillation_se = std::hypot(trace.std_error[imax], trace.std_error[imin]);
    v.limit_estimate = std::numeric_limits<double>::quiet_NaN();
    if (v.oscillation > tol && v.oscillation > 3.0 * v.oscillation_se) {
        v.status = AmsStatus::NotConvergent;
    } else if (v.oscillation <= tol && 3.0 * max_se <= tol) {
        v.status = AmsStatus::Convergent;
        v.limit_estimate = trace.value.back();
    } else {
        v.status = AmsStatus::Inconclusive;
    }
    return v;
}

std::vector<Estimate> convert_es_to_ts(const ProcessModel& es_model, std::span<const Eventuality> events,
                                       const RunOptions& options)
{
    if (es_model.law() != LawTag::ES)
        throw Error(ErrorCode::NotApplicable, "convert_es_to_ts needs an ES model");
    if (!(std::isfinite(es_model.mean_gap()) && es_model.mean_gap() > 0.0))
        throw Error(ErrorCode::NoMean, "ES model has no finite mean gap");
    const double horizon = horizon_for(es_model, options);
    std::vector<Eventuality> bound;
    double pad = horizon;
    for (const auto& e : events) {
        bound.push_back(e.bounded(horizon));
        pad = std::max(pad, bound.back().radius());
        for (double s : bound.back().breakpoint_offsets())
            pad = std::max(pad, horizon + std::abs(s));
    }
    const Window window{-pad, 2.0 * pad};
    const std::size_t k = bound.size();

    const RatioAccumulator acc = replicate(options, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = es_model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto a0 = view.alpha(0);
        if (!a0 || *a0 > horizon) {
            sink.reject_all();
            return;
        }
        for (std::size_t j = 0; j < k; ++j) {
            const auto occupied = occupation_time(view, bound[j], 0.0, *a0);
            if (!occupied)
                sink.reject(j);
            else
                sink.accept(j, *occupied, *a0);
        }
    });
    auto out = acc.finalize(false);
    for (const auto& e : out)
        if (!(e.denominator > 0.0))
            throw Error(ErrorCode::ZeroDenominator, "no replication produced an observable alpha_0");
    return out;
}

Estimate convert_es_to_ts(const ProcessModel& es_model, const Eventuality& A, const RunOptions& options)
{
    return convert_es_to_ts(es_model, std::span<const Eventuality>(&A, 1), options).front();
}

std::vector<Estimate> convert_ts_to_es(const ProcessModel& ts_model, std::span<const Eventuality> events,
                                       const RunOptions& options)
{
    if (ts_model.law() != LawTag::TS)
        throw Error(ErrorCode::NotApplicable, "convert_ts_to_es needs a TS model");
    const double horizon = horizon_for(ts_model, options);
    std::vector<Eventuality> bound;
    double pad = horizon;
    for (const auto& e : events) {
        bound.push_back(e.bounded(horizon));
        pad = std::max(pad, bound.back().radius());
    }
    const Window window{-2.0 * pad, 2.0 * pad};
    const std::size_t k = bound.size();

    const RatioAccumulator acc = replicate(options, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = ts_model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto pos = view.position_of(0);
        const auto a0 = view.alpha(0);
        if (!pos || !a0 || std::abs(view.relative(*pos)) > pad) {
            sink.reject_all();
            return;
        }
        const PatternView at = view.at_position(*pos);
        for (std::size_t j = 0; j < k; ++j) {
            const Outcome o = bound[j].evaluate(at);
            if (o == Outcome::Indeterminate)
                sink.reject(j);
            else
                sink.accept(j, (o == Outcome::True ? 1.0 : 0.0) / *a0, 1.0 / *a0);
        }
    });
    return acc.finalize(false);
}

Estimate convert_ts_to_es(const ProcessModel& ts_model, const Eventuality& A, const RunOptions& options)
{
    return convert_ts_to_es(ts_model, std::span<const Eventuality>(&A, 1), options).front();
}

}  // namespace palmlab
