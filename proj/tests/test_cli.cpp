#include "doctest.h"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string err;
};

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("palmlab_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run cli(const std::string& args, const fs::path& dir, const std::string& env = "")
{
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = env + " '" + std::string(PALMLAB_CLI) + "' " + args + " 2>'" + err.string() + "' >/dev/null";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    const fs::path p = dir / "run.ini";
    std::ofstream(p) << text;
    return p;
}

double csv_value(const std::string& csv, std::size_t row)
{
    // Second column of a data row; labels may be quoted but never contain `",`.
    std::istringstream is(csv);
    std::string line;
    for (std::size_t i = 0; i <= row; ++i)
        std::getline(is, line);
    std::size_t comma = line.front() == '"' ? line.find("\",") + 1 : line.find(',');
    return std::stod(line.substr(comma + 1));
}

const char* poisson = "[model]\nmodel = poisson_ts\nrate = 1\n";

}  // namespace

TEST_CASE("simulate is reproducible")
{
    const auto dir = scratch("simulate");
    const auto cfg = write_config(dir, "[model]\nmodel = example44\npattern_len = 100\n");
    REQUIRE(cli("simulate --config " + cfg.string() + " --out " + (dir / "a").string(), dir).code == 0);
    REQUIRE(cli("simulate --config " + cfg.string() + " --seed 5 --out " + (dir / "b").string(), dir).code == 0);
    CHECK(slurp(dir / "a" / "patterns.txt") == slurp(dir / "b" / "patterns.txt"));

    const auto pcfg = write_config(dir, poisson);
    REQUIRE(cli("simulate --config " + pcfg.string() + " --seed 7 --reps 2 --out " + (dir / "c").string(), dir).code == 0);
    REQUIRE(cli("simulate --config " + pcfg.string() + " --seed 7 --reps 2 --out " + (dir / "d").string(), dir).code == 0);
    const auto text = slurp(dir / "c" / "patterns.txt");
    CHECK(text == slurp(dir / "d" / "patterns.txt"));
    std::istringstream is(text);
    std::string line;
    int data = 0;
    while (std::getline(is, line))
        data += !line.empty() && line[0] != '#';
    CHECK(data == 2);
}

TEST_CASE("config errors exit with 2 and name the field")
{
    const auto dir = scratch("errors");
    auto r = cli("simulate --config " + write_config(dir, "[model]\nmodel = poison_ts\nrate = 1\n").string() +
                     " --out " + dir.string(),
                 dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("model") != std::string::npos);

    r = cli("palm --config " + write_config(dir, std::string(poisson) + "[palm]\nevents =\n").string() + " --out " +
                dir.string(),
            dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("events") != std::string::npos);

    r = cli("palm --config " + write_config(dir, std::string(poisson) + "[palm]\nevnts = alpha(0)>1\n").string(), dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("palm.evnts") != std::string::npos);

    CHECK(cli("frobnicate", dir).code == 2);
    CHECK(cli("palm --reps -3", dir).code == 2);
}

TEST_CASE("palm estimates")
{
    const auto dir = scratch("palm");
    const auto cfg = write_config(dir, std::string(poisson) + "[palm]\nevents = alpha(0)>1\nx = 10\n");
    REQUIRE(cli("palm --config " + cfg.string() + " --out " + (dir / "a").string(), dir).code == 0);
    const double v = csv_value(slurp(dir / "a" / "palm.csv"), 1);
    CHECK(v >= 0.35);
    CHECK(v <= 0.39);

    const auto vcfg =
        write_config(dir, std::string(poisson) + "[palm]\nestimator = probability\nevents = count(0,1]==0\n");
    REQUIRE(cli("palm --config " + vcfg.string() + " --out " + (dir / "b").string(), dir).code == 0);
    const double w = csv_value(slurp(dir / "b" / "palm.csv"), 1);
    CHECK(w >= 0.35);
    CHECK(w <= 0.39);
}

TEST_CASE("outputs are byte identical across thread counts")
{
    const auto dir = scratch("threads");
    const auto cfg = write_config(dir, std::string(poisson) +
                                           "[palm]\nestimator = shifted_palm\nevents = alpha(0)>1; alpha(-1)>0.5\n"
                                           "bins = -1, 0, 1\n");
    REQUIRE(cli("palm --config " + cfg.string() + " --reps 20000 --threads 1 --out " + (dir / "one").string(), dir)
                .code == 0);
    REQUIRE(cli("palm --config " + cfg.string() + " --reps 20000 --threads 8 --out " + (dir / "eight").string(), dir)
                .code == 0);
    CHECK(slurp(dir / "one" / "palm.csv") == slurp(dir / "eight" / "palm.csv"));
}

TEST_CASE("seed precedence: flag over environment over file")
{
    const auto dir = scratch("seed");
    const auto cfg = write_config(dir, std::string("[run]\nseed = 1\nreps = 3\n") + poisson);
    const auto run = [&](const std::string& sub, const std::string& flags, const std::string& env) {
        REQUIRE(cli("simulate --config " + cfg.string() + " " + flags + " --out " + (dir / sub).string(), dir, env)
                    .code == 0);
        return slurp(dir / sub / "patterns.txt");
    };
    const auto file = run("file", "", "");
    const auto env = run("env", "", "PALMLAB_SEED=2");
    const auto flag = run("flag", "--seed 3", "PALMLAB_SEED=2");
    const auto flag_only = run("flag_only", "--seed 3", "");
    CHECK(file != env);
    CHECK(env != flag);
    CHECK(flag == flag_only);
}

TEST_CASE("ams verdicts")
{
    const auto dir = scratch("ams");
    const auto lattice = write_config(dir, "[model]\nmodel = example44\npattern_len = 2000\n[ams]\nevent = alpha(0)==1\n");
    REQUIRE(cli("ams --config " + lattice.string() + " --out " + (dir / "a").string(), dir).code == 0);
    auto j = nlohmann::json::parse(slurp(dir / "a" / "verdict.json"));
    CHECK(j["status"] == "NotConvergent");
    CHECK(slurp(dir / "a" / "trace.csv").rfind("checkpoint,value,std_error\r\n", 0) == 0);

    const auto p = write_config(dir, std::string(poisson) + "[ams]\nevent = alpha(0)>1\nn_max = 512\n");
    REQUIRE(cli("ams --config " + p.string() + " --reps 2000 --out " + (dir / "b").string(), dir).code == 0);
    j = nlohmann::json::parse(slurp(dir / "b" / "verdict.json"));
    CHECK(j["status"] == "Convergent");

    const auto tiny = write_config(dir, std::string(poisson) + "[ams]\nevent = alpha(0)>1\nn_max = 16\n");
    REQUIRE(cli("ams --config " + tiny.string() + " --reps 500 --out " + (dir / "c").string(), dir).code == 0);
    j = nlohmann::json::parse(slurp(dir / "c" / "verdict.json"));
    CHECK(j["status"] == "Inconclusive");
}

TEST_CASE("suite filter and exit status")
{
    const auto dir = scratch("suite");
    REQUIRE(cli("suite --only I-2.7a --reps 5000 --out " + (dir / "a").string(), dir).code == 0);
    std::istringstream is(slurp(dir / "a" / "suite.csv"));
    std::string line;
    std::getline(is, line);
    CHECK(line == "id,model,eventuality,lhs,lhs_se,rhs,rhs_se,z,verdict\r");
    int rows = 0;
    while (std::getline(is, line)) {
        CHECK(line.rfind("I-2.7a,", 0) == 0);
        ++rows;
    }
    CHECK(rows > 0);

    // A tiny budget still runs; failures, if any, show up in the exit status.
    const int code = cli("suite --only I-2.3,I-4.4 --reps 100 --out " + (dir / "b").string(), dir).code;
    CHECK((code == 0 || code == 1));
    CHECK(cli("suite --only I-9.9 --out " + (dir / "c").string(), dir).code != 0);
}
