#include "palmlab/config.hpp"

#include "palmlab/error.hpp"
#include "palmlab/format.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <sstream>

namespace palmlab {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void bad(const std::string& where, const std::string& what)
{
    throw Error(ErrorCode::ConfigError, "field '" + where + "': " + what);
}

std::string unquote(std::string v)
{
    v = std::string(trim(v));
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
        return v.substr(1, v.size() - 2);
    return v;
}

double number(const std::string& where, const std::string& v)
{
    try {
        return parse_double(v);
    } catch (const Error&) {
        bad(where, "expected a number, got '" + v + "'");
    }
}

long long integer(const std::string& where, const std::string& v, long long min)
{
    long long n = 0;
    try {
        n = parse_integer(v);
    } catch (const Error&) {
        bad(where, "expected an integer, got '" + v + "'");
    }
    if (n < min)
        bad(where, "must be >= " + std::to_string(min));
    return n;
}

std::vector<std::string> split(const std::string& v, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, sep)) {
        const auto t = trim(item);
        if (!t.empty())
            out.emplace_back(t);
    }
    return out;
}

/// Drops `#` comment lines, which the INI reader does not know.
std::string strip_hash_comments(std::istream& is)
{
    std::string out, line;
    while (std::getline(is, line)) {
        const auto t = trim(line);
        if (!t.empty() && t.front() == '#')
            continue;
        out += line;
        out += '\n';
    }
    return out;
}

}  // namespace

RunConfig parse_config(std::istream& is)
{
    pt::ptree tree;
    std::istringstream cleaned(strip_hash_comments(is));
    try {
        pt::read_ini(cleaned, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(ErrorCode::ConfigError, "line " + std::to_string(e.line()) + ": " + e.message());
    }

    RunConfig c;
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            bad(section, "keys must appear inside a [section]");
        for (const auto& [key, node] : body) {
            const std::string where = section + "." + key;
            const std::string v = unquote(node.data());
            if (section == "run") {
                if (key == "seed")
                    c.options.seed = static_cast<std::uint64_t>(integer(where, v, 0));
                else if (key == "reps")
                    c.options.reps = static_cast<std::size_t>(integer(where, v, 1));
                else if (key == "threads")
                    c.options.threads = static_cast<unsigned>(integer(where, v, 0));
                else if (key == "horizon_gaps")
                    c.options.horizon_gaps = number(where, v);
                else if (key == "out")
                    c.out_dir = v;
                else
                    bad(where, "unknown key");
            } else if (section == "model") {
                if (!c.model)
                    c.model.emplace();
                c.model->fields.emplace_back(key, v);
            } else if (section == "palm") {
                if (key == "estimator")
                    c.estimator = v;
                else if (key == "events")
                    c.events = v;
                else if (key == "x")
                    c.x = number(where, v);
                else if (key == "bins")
                    for (const auto& s : split(v, ','))
                        c.bin_centers.push_back(number(where, s));
                else if (key == "bin_width")
                    c.bin_width = number(where, v);
                else if (key == "n")
                    c.n = static_cast<int>(integer(where, v, -1000000));
                else
                    bad(where, "unknown key");
            } else if (section == "ams") {
                if (key == "event")
                    c.ams_event = v;
                else if (key == "mode")
                    c.ams_mode = v;
                else if (key == "n_max")
                    c.n_max = static_cast<std::size_t>(integer(where, v, 1));
                else if (key == "x_max")
                    c.x_max = number(where, v);
                else if (key == "tail_fraction")
                    c.tail_fraction = number(where, v);
                else if (key == "tol")
                    c.tol = number(where, v);
                else
                    bad(where, "unknown key");
            } else if (section == "simulate") {
                if (!c.window)
                    c.window = Window{-10.0, 10.0};
                if (key == "window_lo")
                    c.window->lo = number(where, v);
                else if (key == "window_hi")
                    c.window->hi = number(where, v);
                else
                    bad(where, "unknown key");
            } else if (section == "suite") {
                if (key == "only")
                    c.only = split(v, ',');
                else if (key == "z_crit")
                    c.z_crit = number(where, v);
                else
                    bad(where, "unknown key");
            } else {
                bad(section, "unknown section");
            }
        }
    }
    if (c.model && c.model->name().empty())
        bad("model.model", "is required in a [model] section");
    if (c.ams_mode != "event" && c.ams_mode != "time")
        bad("ams.mode", "must be 'event' or 'time'");
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
    return parse_config(in);
}

}  // namespace palmlab
