#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <sstream>
#include <string>
#include <vector>

#include "hatchcycle/cli.hpp"
#include "hatchcycle/errors.hpp"
#include "hatchcycle/io.hpp"

using namespace hatchcycle;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hatchcycle_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "hatchcycle");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path write_config(const fs::path& dir, const std::string& name, const io::json& j) {
    const fs::path p = dir / name;
    std::ofstream(p) << j.dump(2);
    return p;
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

const io::json kModel = {{"b_E", 20.94}, {"d_E", 1.0 / 180.0}, {"d_L", 0.15}};

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate", "-c", "x.json"}).code == 1);
    CHECK(run({"simulate"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("configuration errors exit 2") {
    TempDir tmp;
    CHECK(run({"simulate", "-c", (tmp.path / "missing.json").string()}).code == 2);

    std::ofstream(tmp.path / "broken.json") << "{ not json";
    CHECK(run({"simulate", "-c", (tmp.path / "broken.json").string()}).code == 2);

    const auto unknown = write_config(tmp.path, "unknown.json",
                                      {{"model", kModel}, {"hatch", {{"family", "cosine"}}}, {"L_bar", 1.13}});
    const Run r = run({"simulate", "-c", unknown.string(), "-o", tmp.path.string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("cosine") != std::string::npos);

    const auto negative = write_config(
        tmp.path, "negative.json",
        {{"model", {{"b_E", -1.0}, {"d_E", 0.1}, {"d_L", 0.15}}},
         {"hatch", {{"family", "constant"}, {"k", 0.2}}},
         {"L_bar", 1.0}});
    CHECK(run({"equilibria", "-c", negative.string(), "-o", tmp.path.string()}).code == 2);
}

TEST_CASE("numerical failures exit 3") {
    TempDir tmp;
    const auto cfg = write_config(
        tmp.path, "nocycle.json",
        {{"hatch", {{"family", "hill"}, {"h_m", 0.02}, {"a", 1.0}, {"lambda", 1.13}, {"p", 3.0}}},
         {"L_bar", 1.13},
         {"d_E", 1.0 / 180.0}});
    const Run r = run({"slowfast", "-c", cfg.string(), "-o", tmp.path.string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("limit cycle does not exist") != std::string::npos);
}

TEST_CASE("simulate writes the trajectory and metrics") {
    TempDir tmp;
    const auto cfg = write_config(tmp.path, "sim.json",
                                  {{"model", kModel},
                                   {"hatch", {{"family", "arctan"}, {"a", 0.1}, {"b", 2.91}, {"L_ref", 1.13}}},
                                   {"L_bar", 1.13},
                                   {"initial", {{"offset", {0.0, 0.02}}}},
                                   {"sim", {{"t_span", {0.0, 100.0}}, {"output_step", 0.05}}}});
    const Run r = run({"simulate", "-c", cfg.string(), "-o", (tmp.path / "out").string()});
    REQUIRE(r.code == 0);
    CHECK(first_line(tmp.path / "out" / "trajectory.csv") == "t,E,L");
    CHECK(line_count(tmp.path / "out" / "trajectory.csv") == 2002);
    const auto metrics = io::read_json_file((tmp.path / "out" / "metrics.json").string());
    CHECK(metrics.at("converged").get<bool>());
    CHECK(metrics.at("period").get<double>() == doctest::Approx(5.18).epsilon(0.1));
}

TEST_CASE("simulate the stage-structured models") {
    TempDir tmp;
    io::json stage = {{"beta_E", 41.88}, {"delta_E", 0.0}, {"delta_L", 0.05}, {"delta_P", 0.05},
                      {"delta_A", 0.1},  {"tau_L", 0.1},   {"tau_P", 0.5}};
    for (int dim : {3, 4}) {
        stage["dimension"] = dim;
        const auto cfg = write_config(tmp.path, "stage.json",
                                      {{"model", stage},
                                       {"hatch", {{"family", "hill"}, {"h_m", 0.05}, {"a", 0.5}, {"lambda", 1.5}, {"p", 3.0}}},
                                       {"L_bar", 1.13},
                                       {"sim", {{"t_span", {0.0, 10.0}}}}});
        const Run r = run({"simulate", "-c", cfg.string(), "-o", tmp.path.string()});
        CAPTURE(r.err);
        REQUIRE(r.code == 0);
        CHECK(first_line(tmp.path / "trajectory.csv") == (dim == 3 ? "t,E,L,A" : "t,E,L,P,A"));
    }
}

TEST_CASE("equilibria, hopf and slowfast outputs") {
    TempDir tmp;
    const auto eq = write_config(tmp.path, "eq.json",
                                 {{"model", kModel},
                                  {"hatch", {{"family", "arctan"}, {"a", 0.1}, {"b", 2.91}, {"L_ref", 1.13}}},
                                  {"L_bar", 1.13}});
    REQUIRE(run({"equilibria", "-c", eq.string(), "-o", tmp.path.string()}).code == 0);
    CHECK(first_line(tmp.path / "equilibria.csv") == "L_bar,E_bar,trace,det,re_lambda,im_lambda,class");
    CHECK(line_count(tmp.path / "equilibria.csv") == 3);
    const auto rep = io::read_json_file((tmp.path / "assumptions.json").string());
    CHECK(rep.at("Q0").get<double>() == doctest::Approx(117.5).epsilon(2e-3));

    const auto hopf = write_config(tmp.path, "hopf.json",
                                   {{"model", kModel},
                                    {"L_bar", 1.13},
                                    {"a_values", {0.1, 0.25, 0.5}},
                                    {"a_tilde_range", {0.004, 1.0}}});
    REQUIRE(run({"hopf", "-c", hopf.string(), "-o", tmp.path.string()}).code == 0);
    CHECK(first_line(tmp.path / "hopf.csv") == "a,b_crit,omega,period_T0,alpha_N,criticality");
    CHECK(line_count(tmp.path / "hopf.csv") == 4);
    CHECK(fs::exists(tmp.path / "hopf.json"));

    const auto sf = write_config(
        tmp.path, "sf.json",
        {{"hatch", {{"family", "hill"}, {"h_m", 0.002}, {"a", 1.0}, {"lambda", 1.582}, {"p", 3.0}}},
         {"L_bar", 1.13},
         {"d_E", 1.0 / 180.0}});
    REQUIRE(run({"slowfast", "-c", sf.string(), "-o", tmp.path.string()}).code == 0);
    CHECK(first_line(tmp.path / "cycle.csv") == "segment,u,v");
    const auto cyc = io::read_json_file((tmp.path / "slowfast.json").string());
    CHECK(cyc.at("tau").get<double>() > 0.0);
}

TEST_CASE("sweep subcommand") {
    TempDir tmp;
    const auto cfg = write_config(tmp.path, "sweep.json",
                                  {{"model", kModel},
                                   {"L_bar", 1.13},
                                   {"grid", {{"kind", "arctan"}, {"i", {1, 9}}, {"j", {0.05, 1.0}}}},
                                   {"out_dir", tmp.path.string()}});
    REQUIRE(run({"sweep", "-c", cfg.string()}).code == 0);
    CHECK(first_line(tmp.path / "sweep.csv") == "a,b,c,E_bar,period_days,amplitude_pct,class");
    CHECK(line_count(tmp.path / "sweep.csv") == 5);

    const auto hill = write_config(tmp.path, "hill.json",
                                   {{"model", {{"b_E", 20.94}, {"d_E", 0.0}, {"d_L", 0.15}}},
                                    {"L_bar", 1.13},
                                    {"grid", {{"kind", "hill"}, {"p", 3}, {"k", 0.5}, {"iota", {0.05}}, {"zeta", {0.2}}}}});
    REQUIRE(run({"sweep", "-c", hill.string(), "-o", tmp.path.string()}).code == 0);
    CHECK(first_line(tmp.path / "sweep.csv").rfind("iota,zeta", 0) == 0);

    const auto bad = write_config(tmp.path, "bad.json", {{"model", kModel}, {"L_bar", 1.13}, {"grid", {{"kind", "x"}}}});
    CHECK(run({"sweep", "-c", bad.string(), "-o", tmp.path.string()}).code == 2);
}

TEST_CASE("JSON round trips") {
    const std::vector<HatchFunction> hs = {Arctan{0.1, 2.91, 1.13}, Hill{0.01, 1.0, 1.5, 3.0},
                                           InverseHill{0.05, 0.3, 1.0, 2.0}, Step{0.1, 0.5, 1.0}, Constant{0.2}};
    for (const auto& h : hs) {
        const auto j = io::to_json(h);
        const HatchFunction back = io::hatch_from_json(j);
        CHECK(back.family_name() == h.family_name());
        CHECK(io::to_json(back) == j);
        for (double L : {0.0, 0.7, 2.0}) CHECK(back(L) == h(L));
    }
    const ReducedParams p{20.94, 1.0 / 180.0, 0.15, 17.0};
    const auto rp = io::reduced_from_json(io::to_json(p));
    CHECK(rp.b_E == p.b_E);
    CHECK(rp.c == p.c);
    const StageParams s{2, 0.01, 0.1, 1, 0.25, 0.5, 3, 1};
    CHECK(io::to_json(io::stage_from_json(io::to_json(s))) == io::to_json(s));
    CHECK_THROWS_AS(io::reduced_from_json({{"b_E", 1.0}}), ConfigError);
    CHECK_THROWS_AS(io::hatch_from_json({{"family", "hill"}, {"a", 1.0}}), ConfigError);
    CHECK_THROWS_AS(io::hatch_from_json({{"family", "arctan"}, {"a", -1.0}, {"b", 1.0}, {"L_ref", 1.0}}), ConfigError);
    CHECK(io::fmt(0.1) == "0.1");
    CHECK(io::fmt(std::nan("")) == "nan");
}
