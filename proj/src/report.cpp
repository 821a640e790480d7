#include "palmlab/report.hpp"

#include "palmlab/format.hpp"

#include "json.hpp"

#include <cmath>
#include <ostream>

namespace palmlab {

namespace {

std::string num(double v) { return format_double(v); }
std::string num(std::size_t v) { return std::to_string(v); }

void row(std::ostream& os, std::initializer_list<std::string> fields)
{
    write_csv_row(os, std::span<const std::string>(fields.begin(), fields.size()));
}

nlohmann::ordered_json number_or_null(double v)
{
    if (std::isfinite(v))
        return v;
    return nullptr;
}

}  // namespace

std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(text);
    std::string out = "\"";
    for (char c : text) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_csv_row(std::ostream& os, std::span<const std::string> fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            os << ',';
        os << csv_field(fields[i]);
    }
    os << "\r\n";
}

void write_estimates_csv(std::ostream& os, std::span<const std::string> labels, std::span<const Estimate> estimates)
{
    row(os, {"label", "value", "std_error", "reps", "rejected", "ess"});
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const Estimate& e = estimates[i];
        row(os, {labels[i], num(e.value), num(e.std_error), num(e.reps), num(e.rejected), num(e.ess)});
    }
}

void write_profiles_csv(std::ostream& os, std::span<const ShiftedPalmProfile> profiles)
{
    row(os, {"bin_lo", "bin_hi", "label", "value", "std_error", "reps", "rejected", "ess", "empty_bin"});
    for (const auto& p : profiles)
        for (std::size_t b = 0; b < p.bins.size(); ++b) {
            const Estimate& e = p.estimates[b];
            row(os, {num(p.bins[b].lo), num(p.bins[b].hi), p.label, num(e.value), num(e.std_error), num(e.reps),
                     num(e.rejected), num(e.ess), p.empty_bin[b] ? "true" : "false"});
        }
}

void write_intensity_csv(std::ostream& os, const IntensityProfile& profile)
{
    row(os, {"bin_lo", "bin_hi", "value", "std_error", "reps", "rejected", "ess"});
    for (std::size_t b = 0; b < profile.bins.size(); ++b) {
        const Estimate& e = profile.rate[b];
        row(os, {num(profile.bins[b].lo), num(profile.bins[b].hi), num(e.value), num(e.std_error), num(e.reps),
                 num(e.rejected), num(e.ess)});
    }
}

void write_trace_csv(std::ostream& os, const CesaroTrace& trace)
{
    row(os, {"checkpoint", "value", "std_error"});
    for (std::size_t i = 0; i < trace.checkpoints.size(); ++i)
        row(os, {num(trace.checkpoints[i]), num(trace.value[i]), num(trace.std_error[i])});
}

std::string verdict_json(const AmsVerdict& v)
{
    nlohmann::ordered_json j;
    j["status"] = std::string(to_string(v.status));
    j["oscillation"] = number_or_null(v.oscillation);
    j["threshold"] = number_or_null(v.threshold);
    j["tail_fraction"] = number_or_null(v.tail_fraction);
    j["limit_estimate"] = number_or_null(v.limit_estimate);
    return j.dump(2) + "\n";
}

void write_suite_csv(std::ostream& os, std::span<const IdentityReport> reports)
{
    row(os, {"id", "model", "eventuality", "lhs", "lhs_se", "rhs", "rhs_se", "z", "verdict"});
    for (const auto& r : reports)
        row(os, {r.id, r.model, r.eventuality, num(r.lhs.value), num(r.lhs.std_error), num(r.rhs.value),
                 num(r.rhs.std_error), num(r.z), r.pass ? "pass" : "fail"});
}

}  // namespace palmlab
