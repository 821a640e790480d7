#include "palmlab/estimate.hpp"

#include "palmlab/error.hpp"
#include "palmlab/format.hpp"

#include <algorithm>
#include <cmath>

namespace palmlab {

namespace {

std::vector<Eventuality> bind_horizon(std::span<const Eventuality> events, double horizon)
{
    std::vector<Eventuality> out;
    out.reserve(events.size());
    for (const auto& e : events)
        out.push_back(e.bounded(horizon));
    return out;
}

double max_radius(std::span<const Eventuality> events)
{
    double r = 0.0;
    for (const auto& e : events)
        r = std::max(r, e.radius());
    return r;
}

}  // namespace

std::vector<Bin> uniform_bins(double lo, double hi, double width)
{
    if (!(hi > lo) || !(width > 0.0))
        throw Error(ErrorCode::InvalidArgument, "bins need lo < hi and width > 0");
    const auto count = static_cast<std::size_t>(std::ceil((hi - lo) / width - 1e-9));
    std::vector<Bin> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back({lo + width * static_cast<double>(i), std::min(hi, lo + width * static_cast<double>(i + 1))});
    return out;
}

std::vector<Bin> bins_around(std::span<const double> centers, double width)
{
    std::vector<Bin> out;
    for (double c : centers) {
        const Bin b{c - 0.5 * width, c + 0.5 * width};
        if (!out.empty() && b.lo < out.back().hi)
            throw Error(ErrorCode::InvalidArgument, "bins must be ascending and non-overlapping");
        out.push_back(b);
    }
    return out;
}

double horizon_for(const ProcessModel& model, const RunOptions& options) noexcept
{
    return options.horizon_gaps * model.mean_gap();
}

void require_ess(const Estimate& e, const std::string& what)
{
    if (e.ess < 0.1 * static_cast<double>(e.reps))
        throw Error(ErrorCode::LowEffectiveSampleSize,
                    what + ": effective sample size " + format_double(e.ess) + " is below 10% of " +
                        std::to_string(e.reps) + " replications");
}

std::vector<Estimate> est_palm_zero(const ProcessModel& model, std::span<const Eventuality> events,
                                    double x, const RunOptions& options)
{
    if (model.law() != LawTag::TS)
        throw Error(ErrorCode::NotApplicable, "Palm estimation needs a TS model, got " + model.descriptor().label());
    if (!(x > 0.0))
        throw Error(ErrorCode::InvalidArgument, "x must be > 0");
    const double horizon = horizon_for(model, options);
    const auto bound = bind_horizon(events, horizon);
    const double pad = std::max(horizon, max_radius(bound));
    const Window window{-pad, x + pad};
    const std::size_t k = bound.size();

    const RatioAccumulator acc = replicate(options, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto [first, last] = view.positions_in(0.0, x);
        const double total = static_cast<double>(last - first);
        for (std::size_t j = 0; j < k; ++j) {
            double marked = 0.0;
            bool ok = true;
            for (std::size_t i = first; i < last && ok; ++i) {
                const Outcome o = bound[j].evaluate(view.at_position(i));
                ok = o != Outcome::Indeterminate;
                marked += o == Outcome::True;
            }
            if (ok)
                sink.accept(j, marked, total);
            else
                sink.reject(j);
        }
    });
    auto out = acc.finalize(model.deterministic());
    for (std::size_t j = 0; j < k; ++j) {
        if (!(out[j].denominator > 0.0))
            throw Error(ErrorCode::ZeroDenominator, "no occurrences observed in (0, " + format_double(x) + "]");
        if (model.weighted())
            require_ess(out[j], "Palm estimate of " + bound[j].label());
    }
    return out;
}

Estimate est_palm_zero(const ProcessModel& model, const Eventuality& A, double x, const RunOptions& options)
{
    return est_palm_zero(model, std::span<const Eventuality>(&A, 1), x, options).front();
}

namespace {

/// Bin index containing t under (lo, hi] semantics, or npos.
std::size_t find_bin(std::span<const Bin> bins, double t)
{
    const auto it = std::partition_point(bins.begin(), bins.end(), [t](const Bin& b) { return b.hi < t; });
    if (it == bins.end() || !(t > it->lo))
        return static_cast<std::size_t>(-1);
    return static_cast<std::size_t>(it - bins.begin());
}

Window window_for_bins(std::span<const Bin> bins, double pad)
{
    if (bins.empty())
        throw Error(ErrorCode::InvalidArgument, "at least one bin is required");
    for (std::size_t i = 1; i < bins.size(); ++i)
        if (bins[i].lo < bins[i - 1].hi)
            throw Error(ErrorCode::InvalidArgument, "bins must be ascending and non-overlapping");
    return {std::min(bins.front().lo, 0.0) - pad, std::max(bins.back().hi, 0.0) + pad};
}

}  // namespace

std::vector<ShiftedPalmProfile> est_shifted_palm(const ProcessModel& model,
                                                 std::span<const Eventuality> events,
                                                 std::span<const Bin> bins, const RunOptions& options)
{
    const double horizon = horizon_for(model, options);
    const auto bound = bind_horizon(events, horizon);
    const double pad = std::max(horizon, max_radius(bound));
    const Window window = window_for_bins(bins, pad);
    const std::size_t k = bound.size();
    const std::size_t nb = bins.size();

    const RatioAccumulator acc = replicate(options, k * nb, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto [first, last] = view.positions_in(bins.front().lo, bins.back().hi);
        for (std::size_t i = first; i < last; ++i) {
            const std::size_t b = find_bin(bins, view.relative(i));
            if (b == static_cast<std::size_t>(-1))
                continue;
            const PatternView at = view.at_position(i);
            for (std::size_t j = 0; j < k; ++j) {
                const Outcome o = bound[j].evaluate(at);
                if (o == Outcome::Indeterminate)
                    sink.reject(j * nb + b);
                else
                    sink.accept(j * nb + b, o == Outcome::True ? 1.0 : 0.0, 1.0);
            }
        }
    });
    const auto flat = acc.finalize(model.deterministic());
    std::vector<ShiftedPalmProfile> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        out[j].label = bound[j].label();
        out[j].bins.assign(bins.begin(), bins.end());
        for (std::size_t b = 0; b < nb; ++b) {
            const Estimate& e = flat[j * nb + b];
            out[j].estimates.push_back(e);
            out[j].empty_bin.push_back(!(e.denominator > 0.0) ||
                                       (!model.weighted() && e.denominator < min_bin_count));
        }
    }
    return out;
}

IntensityProfile est_intensity(const ProcessModel& model, std::span<const Bin> bins, const RunOptions& options)
{
    const double horizon = horizon_for(model, options);
    const Window window = window_for_bins(bins, horizon);
    const std::size_t nb = bins.size();

    const RatioAccumulator acc = replicate(options, nb, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        for (std::size_t b = 0; b < nb; ++b) {
            const auto [first, last] = view.positions_in(bins[b].lo, bins[b].hi);
            sink.accept(b, static_cast<double>(last - first) / bins[b].width(), 1.0);
        }
    });
    IntensityProfile out;
    out.bins.assign(bins.begin(), bins.end());
    out.rate = acc.finalize(model.deterministic());
    for (std::size_t b = 0; b < nb; ++b) {
        if (model.weighted())
            require_ess(out.rate[b], "intensity");
        out.occupancy.push_back(out.rate[b].value * bins[b].width());
        out.empty.push_back(!(out.rate[b].value > 0.0));
    }
    return out;
}

IntermediateEstimate est_intermediate(const ProcessModel& model, int n, std::span<const Eventuality> events,
                                      const RunOptions& options)
{
    const double horizon = horizon_for(model, options);
    const auto bound = bind_horizon(events, horizon);
    const double half_width = (std::abs(n) + 20.0) * model.mean_gap();
    const double pad = std::max(horizon, max_radius(bound));
    const Window window{-half_width - pad, half_width + pad};
    const std::size_t k = bound.size();

    const RatioAccumulator acc = replicate(options, k + 1, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        const auto pos = view.position_of(n);
        if (!pos || std::abs(view.relative(*pos)) > half_width) {
            for (std::size_t j = 0; j < k; ++j)
                sink.reject(j);
            sink.accept(k, 0.0, 1.0);
            return;
        }
        sink.accept(k, 1.0, 1.0);
        const PatternView at = view.at_position(*pos);
        for (std::size_t j = 0; j < k; ++j) {
            const Outcome o = bound[j].evaluate(at);
            if (o == Outcome::Indeterminate)
                sink.reject(j);
            else
                sink.accept(j, o == Outcome::True ? 1.0 : 0.0, 1.0);
        }
    });
    auto all = acc.finalize(model.deterministic());
    IntermediateEstimate out;
    out.coverage = all.back().value;
    all.pop_back();
    if (!(out.coverage >= 0.5))
        throw Error(ErrorCode::InsufficientCoverage,
                    "T_" + std::to_string(n) + " observable in only " + format_double(out.coverage) +
                        " of replications");
    if (model.weighted())
        for (const auto& e : all)
            require_ess(e, "intermediate estimate");
    out.estimates = std::move(all);
    return out;
}

std::vector<Estimate> est_mean(const ProcessModel& model, std::span<const PatternFunctional> functionals,
                               Window window, const RunOptions& options)
{
    const std::size_t k = functionals.size();
    const RatioAccumulator acc = replicate(options, k, [&](Rng& rng, std::size_t, RepSink& sink) {
        const WeightedPattern wp = model.sample(rng, window);
        sink.set_weight(wp.weight);
        const PatternView view = wp.pattern.view();
        for (std::size_t j = 0; j < k; ++j) {
            const auto v = functionals[j](view);
            if (v)
                sink.accept(j, *v, 1.0);
            else
                sink.reject(j);
        }
    });
    auto out = acc.finalize(model.deterministic());
    if (model.weighted())
        for (const auto& e : out)
            require_ess(e, "mean");
    return out;
}

std::vector<Estimate> est_probability(const ProcessModel& model, std::span<const Eventuality> events,
                                      const RunOptions& options)
{
    const double horizon = horizon_for(model, options);
    const auto bound = bind_horizon(events, horizon);
    const double pad = std::max(horizon, max_radius(bound));
    std::vector<PatternFunctional> fs;
    for (const auto& e : bound)
        fs.push_back([&e](const PatternView& v) -> std::optional<double> {
            const Outcome o = e.evaluate(v);
            if (o == Outcome::Indeterminate)
                return std::nullopt;
            return o == Outcome::True ? 1.0 : 0.0;
        });
    return est_mean(model, fs, {-pad, pad}, options);
}

PointPattern resample_pstar(const PointPattern& p, double u)
{
    if (!(u >= 0.0 && u < 1.0))
        throw Error(ErrorCode::InvalidArgument, "u must lie in [0, 1)");
    const auto [i0, i1] = p.locate_indices();
    const auto points = p.points();
    if (u == 0.0)
        return p.shift_time(points[i0]);
    return p.shift_time(points[i0] + u * (points[i1] - points[i0]));
}

}  // namespace palmlab
