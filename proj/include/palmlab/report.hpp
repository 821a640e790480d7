#pragma once

#include "palmlab/ams.hpp"
#include "palmlab/estimate.hpp"
#include "palmlab/identities.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace palmlab {

/// RFC 4180 field: quoted when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);
void write_csv_row(std::ostream& os, std::span<const std::string> fields);

/// `label,value,std_error,reps,rejected,ess`.
void write_estimates_csv(std::ostream& os, std::span<const std::string> labels, std::span<const Estimate> estimates);

/// `bin_lo,bin_hi,label,value,std_error,reps,rejected,ess,empty_bin`.
void write_profiles_csv(std::ostream& os, std::span<const ShiftedPalmProfile> profiles);

/// `bin_lo,bin_hi,value,std_error,reps,rejected,ess`.
void write_intensity_csv(std::ostream& os, const IntensityProfile& profile);

/// `checkpoint,value,std_error`.
void write_trace_csv(std::ostream& os, const CesaroTrace& trace);

/// `{"status", "oscillation", "threshold", "tail_fraction", "limit_estimate"}`;
/// non-finite numbers become null.
std::string verdict_json(const AmsVerdict& verdict);

/// `id,model,eventuality,lhs,lhs_se,rhs,rhs_se,z,verdict`.
void write_suite_csv(std::ostream& os, std::span<const IdentityReport> reports);

}  // namespace palmlab
