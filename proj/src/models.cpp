#include "palmlab/models.hpp"

#include "palmlab/error.hpp"
#include "palmlab/format.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace palmlab {

std::string_view to_string(LawTag tag) noexcept
{
    switch (tag) {
    case LawTag::TS: return "TS";
    case LawTag::ES: return "ES";
    case LawTag::TiltedTS: return "TILTED_TS";
    case LawTag::Deterministic: return "DETERMINISTIC";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// IntervalDistribution

IntervalDistribution IntervalDistribution::exponential(double rate)
{
    if (!(rate > 0.0 && std::isfinite(rate)))
        throw Error(ErrorCode::InvalidArgument, "exponential rate must be > 0");
    return {Family::Exponential, rate, 0.0};
}

IntervalDistribution IntervalDistribution::gamma(double shape, double rate)
{
    if (!(shape > 0.0 && rate > 0.0 && std::isfinite(shape) && std::isfinite(rate)))
        throw Error(ErrorCode::InvalidArgument, "gamma shape and rate must be > 0");
    return {Family::Gamma, shape, rate};
}

IntervalDistribution IntervalDistribution::deterministic(double length)
{
    if (!(length > 0.0 && std::isfinite(length)))
        throw Error(ErrorCode::InvalidArgument, "deterministic gap must be > 0");
    return {Family::Deterministic, length, 0.0};
}

IntervalDistribution IntervalDistribution::uniform(double a, double b)
{
    if (!(a >= 0.0 && b > a && std::isfinite(b)))
        throw Error(ErrorCode::InvalidArgument, "uniform gaps need 0 <= a < b");
    return {Family::Uniform, a, b};
}

double IntervalDistribution::mean() const noexcept
{
    switch (family_) {
    case Family::Exponential: return 1.0 / p1_;
    case Family::Gamma: return p1_ / p2_;
    case Family::Deterministic: return p1_;
    case Family::Uniform: return 0.5 * (p1_ + p2_);
    }
    return 0.0;
}

double IntervalDistribution::sample(Rng& rng) const
{
    switch (family_) {
    case Family::Exponential: return rng.exponential(p1_);
    case Family::Gamma: return rng.gamma(p1_, p2_);
    case Family::Deterministic: return p1_;
    case Family::Uniform: return p1_ + (p2_ - p1_) * rng.uniform();
    }
    return 0.0;
}

double IntervalDistribution::sample_length_biased(Rng& rng) const
{
    switch (family_) {
    case Family::Exponential: return rng.gamma(2.0, p1_);
    case Family::Gamma: return rng.gamma(p1_ + 1.0, p2_);
    case Family::Deterministic: return p1_;
    case Family::Uniform:
        for (;;) {
            const double x = p1_ + (p2_ - p1_) * rng.uniform();
            if (rng.uniform() * p2_ < x)
                return x;
        }
    }
    return 0.0;
}

double IntervalDistribution::survival(double x) const
{
    if (x < 0.0)
        return 1.0;
    switch (family_) {
    case Family::Exponential: return std::exp(-p1_ * x);
    case Family::Gamma: {
        // Regularized upper incomplete gamma for integer shapes only.
        if (std::round(p1_) != p1_)
            throw Error(ErrorCode::InvalidArgument, "gamma survival needs an integer shape");
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < static_cast<int>(p1_); ++k) {
            term *= p2_ * x / k;
            sum += term;
        }
        return std::exp(-p2_ * x) * sum;
    }
    case Family::Deterministic: return x < p1_ ? 1.0 : 0.0;
    case Family::Uniform: return x <= p1_ ? 1.0 : (x >= p2_ ? 0.0 : (p2_ - x) / (p2_ - p1_));
    }
    return 0.0;
}

std::vector<std::pair<std::string, std::string>> IntervalDistribution::fields() const
{
    switch (family_) {
    case Family::Exponential: return {{"interval", "exponential"}, {"rate", format_double(p1_)}};
    case Family::Gamma:
        return {{"interval", "gamma"}, {"shape", format_double(p1_)}, {"rate", format_double(p2_)}};
    case Family::Deterministic: return {{"interval", "deterministic"}, {"length", format_double(p1_)}};
    case Family::Uniform: return {{"interval", "uniform"}, {"a", format_double(p1_)}, {"b", format_double(p2_)}};
    }
    return {};
}

std::string IntervalDistribution::describe() const
{
    const auto f = fields();
    std::string out = f.front().second + "(";
    for (std::size_t i = 1; i < f.size(); ++i)
        out += (i > 1 ? "," : "") + f[i].first + "=" + f[i].second;
    return out + ")";
}

// ---------------------------------------------------------------------------
// ModelDescriptor

const std::string* ModelDescriptor::find(std::string_view key) const
{
    for (const auto& [k, v] : fields)
        if (k == key)
            return &v;
    return nullptr;
}

std::string ModelDescriptor::name() const
{
    const auto* m = find("model");
    return m ? *m : std::string();
}

std::string ModelDescriptor::label() const
{
    std::string out = name() + "(";
    bool first = true;
    for (const auto& [k, v] : fields) {
        if (k == "model")
            continue;
        out += (first ? "" : ",") + k + "=" + v;
        first = false;
    }
    return out + ")";
}

// ---------------------------------------------------------------------------
// Tilt

Tilt Tilt::identity() { return {Kind::Identity, 0.0, 0.0}; }

Tilt Tilt::scaled_alpha0(double c)
{
    if (!(c > 0.0))
        throw Error(ErrorCode::InvalidArgument, "scaled_alpha0 needs c > 0");
    return {Kind::ScaledAlpha0, c, 0.0};
}

Tilt Tilt::gamma_mix(double gamma0, double gamma1)
{
    if (!(gamma0 >= 0.0 && gamma1 >= 0.0 && gamma0 + gamma1 > 0.0))
        throw Error(ErrorCode::InvalidArgument, "gamma_mix needs gamma0, gamma1 >= 0, not both 0");
    return {Kind::GammaMix, gamma0, gamma1};
}

Tilt Tilt::by_name(const std::string& name, double c, double gamma0, double gamma1)
{
    if (name == "identity")
        return identity();
    if (name == "scaled_alpha0")
        return scaled_alpha0(c);
    if (name == "gamma_mix")
        return gamma_mix(gamma0, gamma1);
    throw Error(ErrorCode::UnknownTilt, "no registered tilt named '" + name + "'");
}

std::optional<double> Tilt::evaluate(const PatternView& at) const
{
    switch (kind_) {
    case Kind::Identity: return 1.0;
    case Kind::ScaledAlpha0: {
        const auto a0 = at.alpha(0);
        if (!a0)
            return std::nullopt;
        return a_ * *a0;
    }
    case Kind::GammaMix: {
        const auto a0 = at.alpha(0);
        const auto a1 = at.alpha(1);
        if (!a0 || !a1)
            return std::nullopt;
        return a_ * *a0 + b_ * *a1;
    }
    }
    return std::nullopt;
}

std::vector<std::pair<std::string, std::string>> Tilt::fields() const
{
    switch (kind_) {
    case Kind::Identity: return {{"tilt", "identity"}};
    case Kind::ScaledAlpha0: return {{"tilt", "scaled_alpha0"}, {"c", format_double(a_)}};
    case Kind::GammaMix:
        return {{"tilt", "gamma_mix"}, {"gamma0", format_double(a_)}, {"gamma1", format_double(b_)}};
    }
    return {};
}

std::string Tilt::describe() const
{
    const auto f = fields();
    std::string out = f.front().second + "(";
    for (std::size_t i = 1; i < f.size(); ++i)
        out += (i > 1 ? "," : "") + f[i].first + "=" + f[i].second;
    return out + ")";
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

/// Appends points start + g1, start + g1 + g2, ... while <= hi.
template <class Gap>
void fill_forward(std::vector<double>& out, double start, double hi, Gap&& gap)
{
    double t = start + gap();
    while (t <= hi) {
        out.push_back(t);
        t += gap();
    }
}

/// Returns points start - g1, start - g1 - g2, ... while >= lo, ascending.
template <class Gap>
std::vector<double> fill_backward(double start, double lo, Gap&& gap)
{
    std::vector<double> out;
    double t = start - gap();
    while (t >= lo) {
        out.push_back(t);
        t -= gap();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

void check_window(Window w)
{
    if (!(w.lo < 0.0 && 0.0 < w.hi) || !std::isfinite(w.lo) || !std::isfinite(w.hi))
        throw Error(ErrorCode::DegenerateWindow, "sampling window must satisfy lo < 0 < hi");
}

/// Pattern with T_0 = t0 and T_1 = t1 given, and i.i.d. gaps outward.
template <class Gap>
PointPattern straddling_renewal(double t0, double t1, Window w, Gap&& gap)
{
    std::vector<double> points = fill_backward(t0, w.lo, gap);
    if (t0 >= w.lo)
        points.push_back(t0);
    if (t1 <= w.hi) {
        points.push_back(t1);
        fill_forward(points, t1, w.hi, gap);
    }
    return make_pattern_unchecked(std::move(points), w);
}

class PoissonTs final : public ProcessModel {
public:
    explicit PoissonTs(double rate) : rate_(rate)
    {
        if (!(rate > 0.0 && std::isfinite(rate)))
            throw Error(ErrorCode::InvalidArgument, "poisson_ts rate must be > 0");
        desc_.fields = {{"model", "poisson_ts"}, {"rate", format_double(rate)}};
    }

    LawTag law() const noexcept override { return LawTag::TS; }
    const ModelDescriptor& descriptor() const noexcept override { return desc_; }
    double mean_gap() const noexcept override { return 1.0 / rate_; }

    WeightedPattern sample(Rng& rng, Window w) const override
    {
        check_window(w);
        if (w.length() < 4.0 / rate_)
            throw Error(ErrorCode::DegenerateWindow, "window shorter than 4 / rate");
        auto gap = [&] { return rng.exponential(rate_); };
        for (;;) {
            // Memorylessness: gaps from the origin outward are exact.
            std::vector<double> points = fill_backward(0.0, w.lo, gap);
            const std::size_t below = points.size();
            fill_forward(points, 0.0, w.hi, gap);
            if (below > 0 && points.size() > below)
                return {make_pattern_unchecked(std::move(points), w), 1.0};
        }
    }

    ModelPtr es_companion() const override { return renewal_es(IntervalDistribution::exponential(rate_)); }

private:
    double rate_;
    ModelDescriptor desc_;
};

class RenewalEs final : public ProcessModel {
public:
    explicit RenewalEs(const IntervalDistribution& d) : d_(d)
    {
        desc_.fields = {{"model", "renewal_es"}};
        for (auto& f : d.fields())
            desc_.fields.push_back(std::move(f));
    }

    LawTag law() const noexcept override { return LawTag::ES; }
    const ModelDescriptor& descriptor() const noexcept override { return desc_; }
    double mean_gap() const noexcept override { return d_.mean(); }

    WeightedPattern sample(Rng& rng, Window w) const override
    {
        check_window(w);
        auto gap = [&] { return d_.sample(rng); };
        std::vector<double> points = fill_backward(0.0, w.lo, gap);
        points.push_back(0.0);
        fill_forward(points, 0.0, w.hi, gap);
        return {make_pattern_unchecked(std::move(points), w), 1.0};
    }

    ModelPtr es_companion() const override { return std::make_shared<RenewalEs>(d_); }
    ModelPtr ts_companion() const override { return renewal_ts_from_es(d_); }

private:
    IntervalDistribution d_;
    ModelDescriptor desc_;
};

class RenewalTsFromEs final : public ProcessModel {
public:
    explicit RenewalTsFromEs(const IntervalDistribution& d) : d_(d)
    {
        if (!(std::isfinite(d.mean()) && d.mean() > 0.0))
            throw Error(ErrorCode::NoMean, "interval distribution has no finite positive mean");
        desc_.fields = {{"model", "renewal_ts_from_es"}};
        for (auto& f : d.fields())
            desc_.fields.push_back(std::move(f));
    }

    LawTag law() const noexcept override { return LawTag::TS; }
    const ModelDescriptor& descriptor() const noexcept override { return desc_; }
    double mean_gap() const noexcept override { return d_.mean(); }

    WeightedPattern sample(Rng& rng, Window w) const override
    {
        check_window(w);
        const double length = d_.sample_length_biased(rng);
        const double t0 = -rng.uniform() * length;
        return {straddling_renewal(t0, t0 + length, w, [&] { return d_.sample(rng); }), 1.0};
    }

    ModelPtr es_companion() const override { return renewal_es(d_); }
    ModelPtr ts_companion() const override { return std::make_shared<RenewalTsFromEs>(d_); }

private:
    IntervalDistribution d_;
    ModelDescriptor desc_;
};

class TiltedTs final : public ProcessModel {
public:
    TiltedTs(ModelPtr base, const Tilt& tilt) : base_(std::move(base)), tilt_(tilt)
    {
        if (!base_ || base_->law() != LawTag::TS)
            throw Error(ErrorCode::InvalidArgument, "tilted_ts needs a TS base model");
        desc_.fields = {{"model", "tilted_ts"}, {"base", base_->descriptor().name()}};
        for (const auto& f : base_->descriptor().fields)
            if (f.first != "model")
                desc_.fields.push_back(f);
        for (auto& f : tilt_.fields())
            desc_.fields.push_back(std::move(f));
    }

    LawTag law() const noexcept override { return LawTag::TiltedTS; }
    const ModelDescriptor& descriptor() const noexcept override { return desc_; }
    double mean_gap() const noexcept override { return base_->mean_gap(); }
    bool weighted() const noexcept override { return tilt_.kind() != Tilt::Kind::Identity; }

    WeightedPattern sample(Rng& rng, Window w) const override
    {
        WeightedPattern out = base_->sample(rng, w);
        const auto sigma = tilt_.evaluate(out.pattern.view());
        // A pattern too short to evaluate σ gets zero weight; estimators
        // see it through the effective sample size.
        out.weight = sigma.value_or(0.0);
        return out;
    }

    ModelPtr es_companion() const override { return base_->es_companion(); }
    ModelPtr ts_companion() const override { return base_; }
    std::optional<Tilt> tilt() const override { return tilt_; }

private:
    ModelPtr base_;
    Tilt tilt_;
    ModelDescriptor desc_;
};

class Example84Exact final : public ProcessModel {
public:
    explicit Example84Exact(double rate) : rate_(rate)
    {
        if (!(rate > 0.0 && std::isfinite(rate)))
            throw Error(ErrorCode::InvalidArgument, "example84 rate must be > 0");
        desc_.fields = {{"model", "example84_exact"}, {"rate", format_double(rate)}};
    }

    LawTag law() const noexcept override { return LawTag::TiltedTS; }
    const ModelDescriptor& descriptor() const noexcept override { return desc_; }
    double mean_gap() const noexcept override { return 1.0 / rate_; }

    WeightedPattern sample(Rng& rng, Window w) const override
    {
        check_window(w);
        const double length = rng.gamma(3.0, rate_);
        const double t0 = -rng.uniform() * length;
        return {straddling_renewal(t0, t0 + length, w, [&] { return rng.exponential(rate_); }), 1.0};
    }

    ModelPtr es_companion() const override { return renewal_es(IntervalDistribution::exponential(rate_)); }
    ModelPtr ts_companion() const override { return poisson_ts(rate_); }
    std::optional<Tilt> tilt() const override { return Tilt::scaled_alpha0(rate_ / 2.0); }

private:
    double rate_;
    ModelDescriptor desc_;
};

class Example44 final : public ProcessModel {
public:
    explicit Example44(std::size_t pattern_len) : labels_(example44_labels(pattern_len))
    {
        if (pattern_len < 1)
            throw Error(ErrorCode::InvalidArgument, "example44 needs pattern_len >= 1");
        desc_.fields = {{"model", "example44"}, {"pattern_len", std::to_string(pattern_len)}};
        positive_.reserve(pattern_len + 1);
        double t = 1.0;
        positive_.push_back(t);
        for (unsigned char x : labels_) {
            t += x ? 1.0 : 2.0;
            positive_.push_back(t);
        }
    }

    LawTag law() const noexcept override { return LawTag::Deterministic; }
    const ModelDescriptor& descriptor() const noexcept override { return desc_; }
    double mean_gap() const noexcept override { return 1.5; }

    WeightedPattern sample(Rng&, Window w) const override
    {
        check_window(w);
        const Window clipped{w.lo, std::min(w.hi, positive_.back())};
        std::vector<double> points;
        for (double t = std::ceil(clipped.lo); t <= 0.0; t += 1.0)
            points.push_back(t);
        for (double t : positive_) {
            if (t > clipped.hi)
                break;
            points.push_back(t);
        }
        return {make_pattern_unchecked(std::move(points), clipped), 1.0};
    }

private:
    std::vector<unsigned char> labels_;
    std::vector<double> positive_;  // T_1 .. T_{len+1}
    ModelDescriptor desc_;
};

class PStar final : public ProcessModel {
public:
    explicit PStar(ModelPtr base) : base_(std::move(base))
    {
        desc_.fields = {{"model", "pstar"}, {"base", base_->descriptor().name()}};
        for (const auto& f : base_->descriptor().fields)
            if (f.first != "model")
                desc_.fields.push_back(f);
    }

    LawTag law() const noexcept override
    {
        return base_->law() == LawTag::TS ? LawTag::TS : LawTag::TiltedTS;
    }
    const ModelDescriptor& descriptor() const noexcept override { return desc_; }
    double mean_gap() const noexcept override { return base_->mean_gap(); }
    bool weighted() const noexcept override { return base_->weighted(); }
    ModelPtr es_companion() const override { return base_->es_companion(); }
    ModelPtr ts_companion() const override { return base_->ts_companion(); }

    WeightedPattern sample(Rng& rng, Window w) const override
    {
        // The new origin lies in [T_0, T_1); widen so the shifted pattern
        // still covers the requested window unless α_0 is enormous.
        const double margin = 0.25 * w.length() + 10.0 * base_->mean_gap();
        WeightedPattern drawn = base_->sample(rng, Window{w.lo - margin, w.hi + margin});
        const auto [i0, i1] = drawn.pattern.locate_indices();
        const auto points = drawn.pattern.points();
        const double shift = points[i0] + rng.uniform() * (points[i1] - points[i0]);
        PointPattern moved = drawn.pattern.shift_time(shift);
        const Window have = moved.window();
        const Window keep{std::max(w.lo, have.lo), std::min(w.hi, have.hi)};
        return {moved.clip(keep), drawn.weight};
    }

private:
    ModelPtr base_;
    ModelDescriptor desc_;
};

double require_number(const ModelDescriptor& d, std::string_view key)
{
    const auto* v = d.find(key);
    if (!v)
        throw Error(ErrorCode::ConfigError, "model field '" + std::string(key) + "' is required");
    try {
        return parse_double(*v);
    } catch (const Error&) {
        throw Error(ErrorCode::ConfigError, "model field '" + std::string(key) + "' is not a number: '" + *v + "'");
    }
}

double optional_number(const ModelDescriptor& d, std::string_view key, double fallback)
{
    return d.find(key) ? require_number(d, key) : fallback;
}

IntervalDistribution interval_from(const ModelDescriptor& d)
{
    const auto* family = d.find("interval");
    if (!family)
        throw Error(ErrorCode::ConfigError, "model field 'interval' is required");
    try {
        if (*family == "exponential")
            return IntervalDistribution::exponential(require_number(d, "rate"));
        if (*family == "gamma")
            return IntervalDistribution::gamma(require_number(d, "shape"), require_number(d, "rate"));
        if (*family == "deterministic")
            return IntervalDistribution::deterministic(require_number(d, "length"));
        if (*family == "uniform")
            return IntervalDistribution::uniform(require_number(d, "a"), require_number(d, "b"));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument)
            throw Error(ErrorCode::ConfigError, "model field 'interval': " + std::string(e.what()));
        throw;
    }
    throw Error(ErrorCode::ConfigError, "model field 'interval' has unknown family '" + *family + "'");
}

}  // namespace

ModelPtr poisson_ts(double rate) { return std::make_shared<PoissonTs>(rate); }
ModelPtr renewal_es(const IntervalDistribution& d) { return std::make_shared<RenewalEs>(d); }
ModelPtr renewal_ts_from_es(const IntervalDistribution& d) { return std::make_shared<RenewalTsFromEs>(d); }
ModelPtr tilted_ts(ModelPtr base, const Tilt& tilt) { return std::make_shared<TiltedTs>(std::move(base), tilt); }
ModelPtr example84_exact(double rate) { return std::make_shared<Example84Exact>(rate); }
ModelPtr example44(std::size_t pattern_len) { return std::make_shared<Example44>(pattern_len); }
ModelPtr pstar(ModelPtr base) { return std::make_shared<PStar>(std::move(base)); }

ModelPtr make_model(const ModelDescriptor& d)
{
    const std::string name = d.name();
    if (name.empty())
        throw Error(ErrorCode::ConfigError, "model field 'model' is required");
    if (name == "poisson_ts")
        return poisson_ts(require_number(d, "rate"));
    if (name == "renewal_es")
        return renewal_es(interval_from(d));
    if (name == "renewal_ts_from_es")
        return renewal_ts_from_es(interval_from(d));
    if (name == "example84_exact")
        return example84_exact(require_number(d, "rate"));
    if (name == "example44") {
        const double len = require_number(d, "pattern_len");
        if (!(len >= 1.0) || std::floor(len) != len)
            throw Error(ErrorCode::ConfigError, "model field 'pattern_len' must be an integer >= 1");
        return example44(static_cast<std::size_t>(len));
    }
    if (name == "tilted_ts" || name == "pstar") {
        const auto* base_name = d.find("base");
        if (!base_name)
            throw Error(ErrorCode::ConfigError, "model field 'base' is required");
        ModelDescriptor base_desc = d;
        for (auto& [k, v] : base_desc.fields)
            if (k == "model")
                v = *base_name;
        if (*base_name == "tilted_ts" || *base_name == "pstar")
            throw Error(ErrorCode::ConfigError, "model field 'base' cannot nest '" + *base_name + "'");
        ModelPtr base = make_model(base_desc);
        if (name == "pstar")
            return pstar(std::move(base));
        const auto* tilt_name = d.find("tilt");
        if (!tilt_name)
            throw Error(ErrorCode::ConfigError, "model field 'tilt' is required");
        return tilted_ts(std::move(base),
                         Tilt::by_name(*tilt_name, optional_number(d, "c", 1.0),
                                       optional_number(d, "gamma0", 0.0), optional_number(d, "gamma1", 0.0)));
    }
    throw Error(ErrorCode::UnknownModel, "model field 'model' names unknown model '" + name + "'");
}

// ---------------------------------------------------------------------------
// Lattice construction

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b)
{
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw Error(ErrorCode::InvalidArgument, "example44 sequence overflows 64 bits");
    return out;
}

}  // namespace

std::vector<std::uint64_t> example44_a(std::size_t count)
{
    std::vector<std::uint64_t> a;
    a.reserve(count);
    std::uint64_t running = 0;  // a(1) + ... + a(k-1)
    for (std::size_t k = 1; k <= count; ++k) {
        std::uint64_t next = 0;
        if (k == 1)
            next = 4;
        else if (k % 2 == 0)
            next = a.back();
        else
            next = running;
        a.push_back(next);
        running = checked_add(running, next);
    }
    return a;
}

std::vector<std::uint64_t> example44_b(std::size_t count)
{
    const auto a = example44_a(count);
    std::vector<std::uint64_t> b(count);
    std::uint64_t sum = 0;
    for (std::size_t k = 0; k < count; ++k) {
        sum = checked_add(sum, a[k]);
        b[k] = sum;
    }
    return b;
}

std::vector<unsigned char> example44_labels(std::size_t len)
{
    std::vector<unsigned char> x;
    x.reserve(len);
    // Block k covers i in {b(k)+1, ..., b(k+1)} with b(0) = 0; label 1 on
    // even blocks, 0 on odd ones.
    std::size_t blocks = 1;
    while (true) {
        const auto b = example44_b(blocks);
        if (b.back() >= len)
            break;
        ++blocks;
    }
    const auto b = example44_b(blocks);
    std::uint64_t start = 0;
    for (std::size_t k = 0; k < blocks && x.size() < len; ++k) {
        const unsigned char label = k % 2 == 0 ? 1 : 0;
        for (std::uint64_t i = start; i < b[k] && x.size() < len; ++i)
            x.push_back(label);
        start = b[k];
    }
    return x;
}

Rational example44_cesaro(std::uint64_t n)
{
    if (n == 0)
        throw Error(ErrorCode::InvalidArgument, "Cesaro average needs n >= 1");
    const auto x = example44_labels(n);
    const std::uint64_t ones = static_cast<std::uint64_t>(std::count(x.begin(), x.end(), 1));
    const std::uint64_t g = std::gcd(ones, n);
    return {ones / g, n / g};
}

}  // namespace palmlab
