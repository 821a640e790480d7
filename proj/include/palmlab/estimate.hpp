#pragma once

#include "palmlab/events.hpp"
#include "palmlab/models.hpp"
#include "palmlab/pattern.hpp"
#include "palmlab/replicate.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace palmlab {

/// Half-open time bin (lo, hi].
struct Bin {
    double lo = 0.0;
    double hi = 0.0;
    double center() const noexcept { return 0.5 * (lo + hi); }
    double width() const noexcept { return hi - lo; }
};

/// Contiguous bins of equal width covering (lo, hi].
std::vector<Bin> uniform_bins(double lo, double hi, double width);

/// One bin of the given width centred on each of `centers` (ascending,
/// non-overlapping).
std::vector<Bin> bins_around(std::span<const double> centers, double width);

/// Per-bin occurrence rates λ̂(x) (occurrences per unit time).
struct IntensityProfile {
    std::vector<Bin> bins;
    std::vector<Estimate> rate;
    /// Mean occurrence count per replication in each bin.
    std::vector<double> occupancy;
    /// True where no occurrence was observed (rate 0, relative error infinite).
    std::vector<bool> empty;
};

/// Per-bin estimates of P^{0,x}(A) for one eventuality.
struct ShiftedPalmProfile {
    std::string label;
    std::vector<Bin> bins;
    std::vector<Estimate> estimates;
    /// Set where fewer than `min_bin_count` occurrences were seen.
    std::vector<bool> empty_bin;
};

inline constexpr double min_bin_count = 10.0;

/// Horizon R in time units for `model` under `options`.
double horizon_for(const ProcessModel& model, const RunOptions& options) noexcept;

/// P⁰(A) in ratio form E N_A(0, x] / E N(0, x] with a delta-method
/// standard error; one estimate per eventuality from a shared sample.
/// The model must be TS (NotApplicable otherwise); throws ZeroDenominator
/// when no occurrence was observed.
std::vector<Estimate> est_palm_zero(const ProcessModel& model, std::span<const Eventuality> events,
                                    double x, const RunOptions& options);
Estimate est_palm_zero(const ProcessModel& model, const Eventuality& A, double x,
                       const RunOptions& options);

/// Shifted Palm probabilities P^{0,x}(A) per bin: the (weighted) fraction
/// of occurrences in the bin at which A holds, seen from the occurrence.
std::vector<ShiftedPalmProfile> est_shifted_palm(const ProcessModel& model,
                                                 std::span<const Eventuality> events,
                                                 std::span<const Bin> bins, const RunOptions& options);

/// Intensity profile: occurrences per unit time per bin, self-normalized
/// for weighted models.
IntensityProfile est_intensity(const ProcessModel& model, std::span<const Bin> bins,
                               const RunOptions& options);

struct IntermediateEstimate {
    std::vector<Estimate> estimates;
    /// Fraction of replications in which T_n was observable.
    double coverage = 0.0;
};

/// Intermediate law P_n(A) = P(η_n φ ∈ A | F_n), with F_n replaced by
/// "T_n lies within the analysis half-width". Throws InsufficientCoverage
/// when fewer than half the replications qualify.
IntermediateEstimate est_intermediate(const ProcessModel& model, int n,
                                      std::span<const Eventuality> events, const RunOptions& options);

/// A real functional of a pattern seen from its origin; nullopt rejects
/// the replication.
using PatternFunctional = std::function<std::optional<double>(const PatternView&)>;

/// E f(φ) for each functional, from one shared sample drawn on `window`.
/// Weighted models give self-normalized means.
std::vector<Estimate> est_mean(const ProcessModel& model, std::span<const PatternFunctional> functionals,
                               Window window, const RunOptions& options);

/// P(A) = E 1_A(φ) at the origin of the sampled pattern.
std::vector<Estimate> est_probability(const ProcessModel& model, std::span<const Eventuality> events,
                                      const RunOptions& options);

/// θ_{T_0 + u α_0}: moves the origin to a point of the straddling
/// interval. Throws NoStraddle.
PointPattern resample_pstar(const PointPattern& p, double u);

/// Guards a self-normalized estimate: throws LowEffectiveSampleSize when
/// the effective sample size is below 10% of the replications.
void require_ess(const Estimate& e, const std::string& what);

}  // namespace palmlab
