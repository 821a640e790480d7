#pragma once

#include "palmlab/estimate.hpp"
#include "palmlab/events.hpp"
#include "palmlab/models.hpp"
#include "palmlab/replicate.hpp"

#include <string>
#include <vector>

namespace palmlab {

/// Running Cesàro averages of P[η_i φ ∈ A] (event-indexed) or of
/// P[θ_y φ ∈ A] (time-indexed) at increasing checkpoints.
struct CesaroTrace {
    std::string label;
    bool event_indexed = true;
    std::vector<double> checkpoints;
    std::vector<double> value;
    std::vector<double> std_error;
    std::size_t reps = 0;
    std::size_t rejected = 0;
};

enum class AmsStatus { Convergent, NotConvergent, Inconclusive };

std::string_view to_string(AmsStatus status) noexcept;

struct AmsVerdict {
    AmsStatus status = AmsStatus::Inconclusive;
    /// Last trace value when Convergent, NaN otherwise.
    double limit_estimate = 0.0;
    /// max - min of the trace over the tail checkpoints.
    double oscillation = 0.0;
    double oscillation_se = 0.0;
    /// Tolerance the oscillation was compared against.
    double threshold = 0.0;
    double tail_fraction = 0.0;
};

/// Geometric checkpoints 8, 16, ... <= n_max; for the lattice model the
/// landmarks b(k) <= n_max are merged in.
std::vector<double> event_checkpoints(const ProcessModel& model, std::size_t n_max);

/// Checkpoints 8m, 16m, ... <= x_max (m = mean gap); for the lattice model
/// the landmark times T_{b(k)+1} <= x_max are merged in.
std::vector<double> time_checkpoints(const ProcessModel& model, double x_max);

/// (1/n) Σ_{i=1..n} 1_A(η_i φ) averaged over replications. Throws
/// InsufficientWindow when more than half the replications cannot see
/// T_{n_max + 1}.
CesaroTrace cesaro_event(const ProcessModel& model, const Eventuality& A, std::size_t n_max,
                         const RunOptions& options);

/// (1/x) ∫_0^x 1_A(θ_y φ) dy averaged over replications; the integral is
/// exact because the integrand is constant between breakpoints.
CesaroTrace cesaro_time(const ProcessModel& model, const Eventuality& A, double x_max,
                        const RunOptions& options);

/// Decision rule on the tail of a trace: NotConvergent when the
/// oscillation exceeds both `tol` and three of its standard errors;
/// Convergent when it is within `tol` and three standard errors of every
/// tail point also fit within `tol`; Inconclusive otherwise. Throws
/// TooFewCheckpoints below six checkpoints.
AmsVerdict ams_verdict(const CesaroTrace& trace, double tail_fraction = 0.5, double tol = 0.05);

/// P_ts(A) = E_es(∫_0^{α_0} 1_A∘θ_y dy) / E_es(α_0) for an ergodic ES model.
Estimate convert_es_to_ts(const ProcessModel& es_model, const Eventuality& A, const RunOptions& options);
std::vector<Estimate> convert_es_to_ts(const ProcessModel& es_model, std::span<const Eventuality> events,
                                       const RunOptions& options);

/// P_es(A) = E_ts(1_A∘η_0 / α_0) / N̄ for an ergodic TS model, with the
/// scalar N̄ = E_ts(1 / α_0) estimated from the same sample.
Estimate convert_ts_to_es(const ProcessModel& ts_model, const Eventuality& A, const RunOptions& options);
std::vector<Estimate> convert_ts_to_es(const ProcessModel& ts_model, std::span<const Eventuality> events,
                                       const RunOptions& options);

}  // namespace palmlab
