#pragma once

#include "palmlab/events.hpp"
#include "palmlab/models.hpp"
#include "palmlab/replicate.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace palmlab {

inline constexpr double default_z_crit = 4.0;
inline constexpr double default_atol = 0.002;

/// One LHS/RHS comparison produced by an identity.
struct IdentityRow {
    std::string eventuality;
    Estimate lhs;
    Estimate rhs;
};

/// A registered identity: two estimator programs that must agree on every
/// applicable model. `evaluate` receives independent options for the two
/// sides (distinct seed streams).
struct IdentitySpec {
    std::string id;
    std::string anchor;
    double atol = default_atol;
    std::function<bool(const ProcessModel&)> applicable;
    std::function<std::vector<IdentityRow>(const ModelPtr&, std::span<const Eventuality>, const RunOptions& lhs,
                                           const RunOptions& rhs)>
        evaluate;
};

struct IdentityReport {
    std::string id;
    std::string model;
    std::string eventuality;
    Estimate lhs;
    Estimate rhs;
    double z = 0.0;
    bool pass = false;
    std::size_t reps = 0;
};

/// |lhs - rhs| <= z_crit sqrt(se_l² + se_r²) + atol.
bool identity_holds(const Estimate& lhs, const Estimate& rhs, double z_crit, double atol) noexcept;

/// (lhs - rhs) / sqrt(se_l² + se_r²); 0 when both agree exactly, ±inf for
/// an exact disagreement.
double z_score(const Estimate& lhs, const Estimate& rhs) noexcept;

/// Registry in id order.
const std::vector<IdentitySpec>& identity_registry();

/// Null when unknown.
const IdentitySpec* find_identity(std::string_view id);

/// Ten eventualities with thresholds in units of the mean gap `m`.
std::vector<Eventuality> default_battery(double m);

/// Both sides of `spec` on `model` over `events`; throws NotApplicable.
std::vector<IdentityReport> check_identity(const IdentitySpec& spec, const ModelPtr& model,
                                           std::span<const Eventuality> events, const RunOptions& options,
                                           double z_crit = default_z_crit);

/// Poisson(1), the Gamma(2, 1) renewal built by inversion, the two-sided
/// law with rate 1 and the lattice model.
std::vector<ModelPtr> default_suite_models();

struct SuiteOptions {
    double z_crit = default_z_crit;
    /// Restricts the run to these ids when non-empty.
    std::vector<std::string> only;
};

/// Every applicable (identity, model, battery eventuality) triple, in
/// registry order and then model order. Inapplicable pairs are skipped.
std::vector<IdentityReport> run_suite(std::span<const ModelPtr> models, const RunOptions& options,
                                      const SuiteOptions& suite = {});

}  // namespace palmlab
