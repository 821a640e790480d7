#pragma once

#include "palmlab/models.hpp"
#include "palmlab/pattern.hpp"
#include "palmlab/replicate.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace palmlab {

/// Everything a CLI run depends on. Same config and seed give the same
/// bytes out at any thread count.
///
/// File grammar (INI): `[section]` headers, `key = value` lines, blank
/// lines and lines starting with `#` or `;` ignored. Sections:
///
///     [run]      seed, reps, threads, horizon_gaps, out
///     [model]    model, then the model's own keys (rate, interval, ...)
///     [palm]     estimator, events, x, bins, bin_width, n
///     [ams]      event, mode, n_max, x_max, tail_fraction, tol
///     [simulate] window_lo, window_hi
///     [suite]    only, z_crit
///
/// `events` is a `;`-separated eventuality list; `bins` and `only` are
/// comma-separated. Unknown sections or keys are errors.
struct RunConfig {
    std::optional<ModelDescriptor> model;
    RunOptions options;
    std::string out_dir = "out";

    std::string estimator = "palm_zero";
    std::string events;
    std::optional<double> x;
    std::vector<double> bin_centers;
    std::optional<double> bin_width;
    int n = 0;

    std::string ams_event;
    std::string ams_mode = "event";
    std::size_t n_max = 1024;
    std::optional<double> x_max;
    double tail_fraction = 0.5;
    double tol = 0.05;

    std::optional<Window> window;

    std::vector<std::string> only;
    double z_crit = 4.0;
};

/// Throws Error{ConfigError} naming the offending section and key.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::string& path);

}  // namespace palmlab
