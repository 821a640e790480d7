// palmlab: command-line runner for the simulation and estimation library.

#include "palmlab/ams.hpp"
#include "palmlab/config.hpp"
#include "palmlab/error.hpp"
#include "palmlab/estimate.hpp"
#include "palmlab/format.hpp"
#include "palmlab/identities.hpp"
#include "palmlab/report.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace palmlab;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_suite_failure = 1;
constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> reps;
    std::optional<std::string> out;
    std::vector<std::string> only;
    std::optional<unsigned> threads;
};

/// Config file, then PALMLAB_SEED, then command-line flags.
RunConfig resolve(const Flags& f)
{
    RunConfig c = f.config.empty() ? RunConfig{} : load_config(f.config);
    if (const char* env = std::getenv("PALMLAB_SEED")) {
        try {
            const long long s = parse_integer(env);
            if (s < 0)
                throw Error(ErrorCode::ParseError, "negative");
            c.options.seed = static_cast<std::uint64_t>(s);
        } catch (const Error&) {
            throw Error(ErrorCode::ConfigError, "PALMLAB_SEED is not a non-negative integer: '" + std::string(env) + "'");
        }
    }
    if (f.seed)
        c.options.seed = *f.seed;
    if (f.reps)
        c.options.reps = *f.reps;
    if (f.out)
        c.out_dir = *f.out;
    if (f.threads)
        c.options.threads = *f.threads;
    if (!f.only.empty())
        c.only = f.only;
    return c;
}

ModelPtr require_model(const RunConfig& c)
{
    if (!c.model)
        throw Error(ErrorCode::ConfigError, "a [model] section is required");
    return make_model(*c.model);
}

std::filesystem::path out_file(const RunConfig& c, const std::string& name)
{
    std::error_code ec;
    std::filesystem::create_directories(c.out_dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, "cannot create output directory '" + c.out_dir + "': " + ec.message());
    return std::filesystem::path(c.out_dir) / name;
}

void write_text(const RunConfig& c, const std::string& name, const std::string& text)
{
    const auto path = out_file(c, name);
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    std::cout << "wrote " << path.string() << "\n";
}

template <class Fn>
void write_with(const RunConfig& c, const std::string& name, Fn&& fn)
{
    std::ostringstream os;
    fn(os);
    write_text(c, name, os.str());
}

std::vector<std::string> labels_of(const std::vector<Eventuality>& events, double horizon)
{
    std::vector<std::string> out;
    for (const auto& e : events)
        out.push_back(e.bounded(horizon).label());
    return out;
}

int cmd_simulate(const RunConfig& c)
{
    const ModelPtr model = require_model(c);
    const double m = model->mean_gap();
    const Window window = c.window.value_or(Window{-10.0 * m, 10.0 * m});
    std::vector<PointPattern> patterns;
    std::vector<double> weights;
    const std::uint64_t stream = mix64(c.options.stream ^ stream_id("simulate"));
    for (std::size_t r = 0; r < c.options.reps; ++r) {
        WeightedPattern wp = model->sample(derive_seed(c.options.seed, stream, r), window);
        patterns.push_back(std::move(wp.pattern));
        weights.push_back(wp.weight);
    }
    write_with(c, "patterns.txt", [&](std::ostream& os) {
        write_patterns(os, patterns, model->weighted() ? std::span<const double>(weights) : std::span<const double>());
    });
    return exit_ok;
}

int cmd_palm(const RunConfig& c)
{
    const ModelPtr model = require_model(c);
    const double m = model->mean_gap();
    const double horizon = horizon_for(*model, c.options);
    const auto events = parse_eventuality_list(c.events);
    if (events.empty())
        throw Error(ErrorCode::ConfigError, "field 'palm.events' lists no eventualities");
    const auto labels = labels_of(events, horizon);
    const double width = c.bin_width.value_or(0.25 * m);

    if (c.estimator == "palm_zero") {
        const auto est = est_palm_zero(*model, events, c.x.value_or(10.0 * m), c.options);
        write_with(c, "palm.csv", [&](std::ostream& os) { write_estimates_csv(os, labels, est); });
    } else if (c.estimator == "shifted_palm") {
        if (c.bin_centers.empty())
            throw Error(ErrorCode::ConfigError, "field 'palm.bins' is required for shifted_palm");
        const auto bins = bins_around(c.bin_centers, width);
        const auto profiles = est_shifted_palm(*model, events, bins, c.options);
        write_with(c, "palm.csv", [&](std::ostream& os) { write_profiles_csv(os, profiles); });
    } else if (c.estimator == "intensity") {
        const auto bins = c.bin_centers.empty() ? uniform_bins(-5.0 * m, 5.0 * m, width) : bins_around(c.bin_centers, width);
        const auto profile = est_intensity(*model, bins, c.options);
        write_with(c, "intensity.csv", [&](std::ostream& os) { write_intensity_csv(os, profile); });
    } else if (c.estimator == "intermediate") {
        const auto est = est_intermediate(*model, c.n, events, c.options);
        write_with(c, "palm.csv", [&](std::ostream& os) { write_estimates_csv(os, labels, est.estimates); });
    } else if (c.estimator == "probability") {
        const auto est = est_probability(*model, events, c.options);
        write_with(c, "palm.csv", [&](std::ostream& os) { write_estimates_csv(os, labels, est); });
    } else if (c.estimator == "es_to_ts") {
        const auto est = convert_es_to_ts(*model, events, c.options);
        write_with(c, "palm.csv", [&](std::ostream& os) { write_estimates_csv(os, labels, est); });
    } else if (c.estimator == "ts_to_es") {
        const auto est = convert_ts_to_es(*model, events, c.options);
        write_with(c, "palm.csv", [&](std::ostream& os) { write_estimates_csv(os, labels, est); });
    } else {
        throw Error(ErrorCode::ConfigError, "field 'palm.estimator' has unknown value '" + c.estimator + "'");
    }
    return exit_ok;
}

/// TooFewCheckpoints is reported as an Inconclusive verdict, not an error.
AmsVerdict verdict_or_inconclusive(const CesaroTrace& trace, const RunConfig& c)
{
    try {
        return ams_verdict(trace, c.tail_fraction, c.tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TooFewCheckpoints)
            throw;
        AmsVerdict v;
        v.status = AmsStatus::Inconclusive;
        v.oscillation = std::nan("");
        v.limit_estimate = std::nan("");
        v.threshold = c.tol;
        v.tail_fraction = c.tail_fraction;
        return v;
    }
}

int cmd_ams(const RunConfig& c)
{
    const ModelPtr model = require_model(c);
    const Eventuality A = c.ams_event.empty() ? (model->deterministic() ? ev_example44() : ev_interval_gt(0, model->mean_gap()))
                                              : parse_eventuality(c.ams_event);
    const CesaroTrace trace = c.ams_mode == "event"
                                  ? cesaro_event(*model, A, c.n_max, c.options)
                                  : cesaro_time(*model, A, c.x_max.value_or(c.n_max * model->mean_gap()), c.options);
    const AmsVerdict v = verdict_or_inconclusive(trace, c);
    write_with(c, "trace.csv", [&](std::ostream& os) { write_trace_csv(os, trace); });
    write_text(c, "verdict.json", verdict_json(v));
    std::cout << trace.label << ": " << to_string(v.status) << "\n";
    return exit_ok;
}

int cmd_suite(const RunConfig& c)
{
    std::vector<ModelPtr> models = c.model ? std::vector<ModelPtr>{make_model(*c.model)} : default_suite_models();
    SuiteOptions s;
    s.z_crit = c.z_crit;
    s.only = c.only;
    std::vector<IdentityReport> reports;
    try {
        reports = run_suite(models, c.options, s);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidArgument)
            throw Error(ErrorCode::ConfigError, std::string("field 'suite.only': ") + e.what());
        throw;
    }
    write_with(c, "suite.csv", [&](std::ostream& os) { write_suite_csv(os, reports); });
    std::size_t failed = 0;
    for (const auto& r : reports)
        if (!r.pass) {
            ++failed;
            std::cout << "FAIL " << r.id << " " << r.model << " " << r.eventuality << " z=" << format_double(r.z)
                      << "\n";
        }
    std::cout << reports.size() - failed << " of " << reports.size() << " checks passed\n";
    return failed == 0 ? exit_ok : exit_suite_failure;
}

int cmd_example44(const RunConfig& c)
{
    constexpr std::size_t count = 12;
    const auto a = example44_a(count);
    const auto b = example44_b(count);
    write_with(c, "example44_sequences.csv", [&](std::ostream& os) {
        os << "k,a,b,m_b_num,m_b_den,m_b\r\n";
        for (std::size_t k = 0; k < count; ++k) {
            const Rational r = example44_cesaro(b[k]);
            os << k + 1 << ',' << a[k] << ',' << b[k] << ',' << r.num << ',' << r.den << ',' << format_double(r.value())
               << "\r\n";
        }
    });
    const ModelPtr model = example44(8192);
    const Eventuality A = ev_example44();
    const CesaroTrace ev = cesaro_event(*model, A, 4096, c.options);
    const CesaroTrace tv = cesaro_time(*model, A, 4096.0, c.options);
    write_with(c, "example44_event_trace.csv", [&](std::ostream& os) { write_trace_csv(os, ev); });
    write_with(c, "example44_time_trace.csv", [&](std::ostream& os) { write_trace_csv(os, tv); });
    const AmsVerdict ve = verdict_or_inconclusive(ev, c);
    const AmsVerdict vt = verdict_or_inconclusive(tv, c);
    write_text(c, "example44_event_verdict.json", verdict_json(ve));
    write_text(c, "example44_time_verdict.json", verdict_json(vt));
    std::cout << "event: " << to_string(ve.status) << ", time: " << to_string(vt.status) << "\n";
    return exit_ok;
}

int cmd_example84(const RunConfig& c)
{
    const double rate = c.model && c.model->find("rate") ? parse_double(*c.model->find("rate")) : 1.0;
    const ModelPtr model = example84_exact(rate);
    const double m = model->mean_gap();

    std::vector<Eventuality> survival;
    std::vector<std::string> labels;
    for (double x : {0.5, 1.0, 2.0}) {
        survival.push_back(ev_interval_gt(0, x / rate));
        labels.push_back(survival.back().bounded(horizon_for(*model, c.options)).label());
    }
    const auto surv = est_probability(*model, survival, c.options);
    write_with(c, "example84_survival.csv", [&](std::ostream& os) { write_estimates_csv(os, labels, surv); });

    const auto bins = uniform_bins(-5.0 * m, 5.0 * m, 0.1 * m);
    const auto intensity = est_intensity(*model, bins, c.options);
    write_with(c, "example84_intensity.csv", [&](std::ostream& os) { write_intensity_csv(os, intensity); });

    const std::vector<Eventuality> past{ev_interval_gt(-1, 0.5 * m), ev_interval_gt(-1, m)};
    const std::vector<double> centers{-m};
    const auto shifted = est_shifted_palm(*model, past, bins_around(centers, 0.1 * m), c.options);
    write_with(c, "example84_shifted_palm.csv", [&](std::ostream& os) { write_profiles_csv(os, shifted); });
    return exit_ok;
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::ConfigError:
    case ErrorCode::ParseError:
    case ErrorCode::UnknownModel:
    case ErrorCode::UnknownTilt:
        return exit_config;
    default:
        return exit_runtime;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"palmlab: Palm calculus Monte Carlo toolkit"};
    app.require_subcommand(1);
    Flags flags;

    auto add_common = [&flags](CLI::App* sub) {
        sub->add_option("--config", flags.config, "INI config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "root seed (overrides config and PALMLAB_SEED)");
        sub->add_option("--reps", flags.reps, "replications")->check(CLI::PositiveNumber);
        sub->add_option("--out", flags.out, "output directory");
        sub->add_option("--threads", flags.threads, "worker threads, 0 = all cores");
    };

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&);
    };
    const Command commands[] = {
        {"simulate", "write sampled patterns", cmd_simulate},
        {"palm", "Palm, shifted Palm, intensity and conversion estimates", cmd_palm},
        {"ams", "Cesaro trace and convergence verdict", cmd_ams},
        {"suite", "identity suite", cmd_suite},
        {"example44", "exact lattice sequences and divergent Cesaro traces", cmd_example44},
        {"example84", "survival, intensity and shifted Palm for the tilted Poisson law", cmd_example84},
    };
    std::vector<std::pair<CLI::App*, const Command*>> subs;
    for (const auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(sub);
        if (std::string(cmd.name) == "suite")
            sub->add_option("--only", flags.only, "restrict to identity ids")->delimiter(',');
        subs.emplace_back(sub, &cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        const RunConfig config = resolve(flags);
        for (const auto& [sub, cmd] : subs)
            if (sub->parsed())
                return cmd->run(config);
    } catch (const Error& e) {
        std::cerr << "palmlab: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "palmlab: " << e.what() << "\n";
        return exit_runtime;
    }
    return exit_ok;
}
