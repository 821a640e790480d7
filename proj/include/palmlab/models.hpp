#pragma once

#include "palmlab/pattern.hpp"
#include "palmlab/rng.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace palmlab {

/// Which family of laws a model belongs to. TS and ES are exact stationary
/// laws; TiltedTS covers nonstationary laws absolutely continuous with
/// respect to a TS law (tilts, the two-sided law, P* pushforwards);
/// Deterministic is the non-AMS lattice construction.
enum class LawTag { TS, ES, TiltedTS, Deterministic };

std::string_view to_string(LawTag tag) noexcept;

/// Law of the i.i.d. gaps of a renewal process.
class IntervalDistribution {
public:
    enum class Family { Exponential, Gamma, Deterministic, Uniform };

    static IntervalDistribution exponential(double rate);
    static IntervalDistribution gamma(double shape, double rate);
    static IntervalDistribution deterministic(double length);
    static IntervalDistribution uniform(double a, double b);

    Family family() const noexcept { return family_; }
    double mean() const noexcept;

    double sample(Rng& rng) const;

    /// Draws from the length-biased law x f(x) / mean. Exponential and Gamma
    /// map exactly to Gamma with shape + 1; Uniform(a, b) uses rejection
    /// from the uniform proposal with acceptance probability x / b (the
    /// density ratio is bounded by b / mean).
    double sample_length_biased(Rng& rng) const;

    /// P[gap > x].
    double survival(double x) const;

    /// Canonical text form, e.g. `gamma(shape=2,rate=1)`.
    std::string describe() const;

    /// Config fields (`interval`, parameters) for serialization.
    std::vector<std::pair<std::string, std::string>> fields() const;

private:
    IntervalDistribution(Family family, double p1, double p2) : family_(family), p1_(p1), p2_(p2) {}

    Family family_;
    double p1_;
    double p2_;
};

/// A sampled pattern with its importance weight (1 for exact samplers).
struct WeightedPattern {
    PointPattern pattern;
    double weight = 1.0;
};

/// Flat, ordered key/value record naming a model and its parameters; the
/// same keys appear in the CLI config.
struct ModelDescriptor {
    std::vector<std::pair<std::string, std::string>> fields;

    const std::string* find(std::string_view key) const;
    std::string name() const;
    /// `poisson_ts(rate=1)` style label used in reports.
    std::string label() const;
};

/// Radon-Nikodym density σ = dP/dP_ts of a tilted law, as a functional of
/// the pattern seen from the origin.
class Tilt {
public:
    enum class Kind { Identity, ScaledAlpha0, GammaMix };

    static Tilt identity();
    /// σ = c α_0.
    static Tilt scaled_alpha0(double c);
    /// σ = γ_0 α_0 + γ_1 α_1.
    static Tilt gamma_mix(double gamma0, double gamma1);
    /// Looks up a registered tilt by name; throws UnknownTilt.
    static Tilt by_name(const std::string& name, double c, double gamma0, double gamma1);

    Kind kind() const noexcept { return kind_; }
    std::optional<double> evaluate(const PatternView& at) const;

    /// True when σ∘η_0 = σ identically (σ depends on the gaps only).
    bool event_invariant() const noexcept { return true; }

    /// Offsets at which y -> σ(θ_y φ) may change (see integrate_shifts).
    std::vector<double> breakpoint_offsets() const { return {0.0}; }

    std::string describe() const;
    std::vector<std::pair<std::string, std::string>> fields() const;

private:
    Tilt(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}

    Kind kind_;
    double a_;
    double b_;
};

class ProcessModel;
using ModelPtr = std::shared_ptr<const ProcessModel>;

/// A seedable sampler for one point-process law.
///
/// `sample` fills the whole requested window; identical seed and window
/// give identical output.
class ProcessModel {
public:
    virtual ~ProcessModel() = default;

    virtual LawTag law() const noexcept = 0;
    virtual WeightedPattern sample(Rng& rng, Window window) const = 0;
    virtual const ModelDescriptor& descriptor() const noexcept = 0;

    /// Nominal spacing between points; sets default horizons and bins.
    virtual double mean_gap() const noexcept = 0;

    /// True when samples carry non-unit importance weights.
    virtual bool weighted() const noexcept { return false; }

    /// The event-stationary law paired with this model: the Palm law of a
    /// TS model, the model itself when ES, the Palm law of the dominating
    /// TS law for tilted models. Null when unknown.
    virtual ModelPtr es_companion() const { return nullptr; }

    /// The time-stationary law paired with this model (inverse of the
    /// above); null when unknown.
    virtual ModelPtr ts_companion() const { return nullptr; }

    /// σ = dP/dP_ts when the model is defined as a tilt of ts_companion().
    virtual std::optional<Tilt> tilt() const { return std::nullopt; }

    bool deterministic() const noexcept { return law() == LawTag::Deterministic; }

    WeightedPattern sample(std::uint64_t seed, Window window) const
    {
        Rng rng(seed);
        return sample(rng, window);
    }
};

/// Homogeneous Poisson process; redraws until the pattern straddles 0.
/// Throws DegenerateWindow for windows shorter than 4 / rate.
ModelPtr poisson_ts(double rate);

/// Event-stationary renewal process: a point at 0 and i.i.d. gaps outward.
ModelPtr renewal_es(const IntervalDistribution& d);

/// Time-stationary renewal process built by inversion: a length-biased
/// straddling interval, a uniform origin inside it, i.i.d. gaps outward.
ModelPtr renewal_ts_from_es(const IntervalDistribution& d);

/// Self-normalized importance-weighted sampler of the law P(A) = E_ts(σ 1_A).
/// `base` must be TS.
ModelPtr tilted_ts(ModelPtr base, const Tilt& tilt);

/// Exact sampler of the Poisson tilt σ = λ α_0 / 2: straddling interval
/// Gamma(3, λ), origin uniform inside it, Exponential(λ) gaps outward.
ModelPtr example84_exact(double rate);

/// Deterministic non-EAMS lattice: T_0 = 0, T_1 = 1, α_i = 1 when the label
/// x_i = 1 and 2 when x_i = 0 for i = 1..pattern_len, α_i = 1 for i <= 0.
/// The pattern ends at T_{pattern_len + 1}; windows are clipped there.
ModelPtr example44(std::size_t pattern_len);

/// Pushforward of `base` through resample_pstar with a fresh uniform draw.
ModelPtr pstar(ModelPtr base);

/// Builds a model from its descriptor fields; throws ConfigError naming the
/// offending field, UnknownModel or UnknownTilt.
ModelPtr make_model(const ModelDescriptor& descriptor);

/// Exact rational number with a positive denominator, kept reduced.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    friend bool operator==(const Rational&, const Rational&) = default;
    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
};

/// a(1..count) of the lattice construction (index 0 of the result is a(1)).
std::vector<std::uint64_t> example44_a(std::size_t count);
/// b(1..count).
std::vector<std::uint64_t> example44_b(std::size_t count);
/// Labels x_1..x_len.
std::vector<unsigned char> example44_labels(std::size_t len);
/// m_n = (1/n) Σ_{i<=n} x_i, exactly.
Rational example44_cesaro(std::uint64_t n);

}  // namespace palmlab
