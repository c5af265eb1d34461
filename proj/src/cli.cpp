#include "hatchcycle/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "hatchcycle/equilibria.hpp"
#include "hatchcycle/errors.hpp"
#include "hatchcycle/hopf.hpp"
#include "hatchcycle/io.hpp"
#include "hatchcycle/sim.hpp"
#include "hatchcycle/slowfast.hpp"
#include "hatchcycle/sweep.hpp"

namespace hatchcycle {

namespace {

namespace fs = std::filesystem;
using io::json;

double num(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ConfigError(std::string("missing or non-numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

const json& section(const json& cfg, const char* key) {
    if (!cfg.contains(key) || !cfg.at(key).is_object()) throw ConfigError(std::string("missing section '") + key + "'");
    return cfg.at(key);
}

std::vector<double> numbers(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(std::string("missing array '") + key + "'");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw ConfigError(std::string("non-numeric entry in '") + key + "'");
        out.push_back(v.get<double>());
    }
    return out;
}

std::ofstream open_out(const fs::path& dir, const std::string& name, std::ostream& log) {
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write '" + path.string() + "'");
    log << path.string() << '\n';
    return os;
}

SimSettings sim_settings(const json& cfg) {
    SimSettings s;
    if (!cfg.contains("sim")) return s;
    const json& j = cfg.at("sim");
    if (j.contains("rtol")) s.rtol = num(j, "rtol");
    if (j.contains("atol")) s.atol = num(j, "atol");
    if (j.contains("min_days")) s.min_days = num(j, "min_days");
    if (j.contains("periods")) s.periods = num(j, "periods");
    if (j.contains("transient_fraction")) s.transient_fraction = num(j, "transient_fraction");
    if (j.contains("samples_per_period")) s.samples_per_period = num(j, "samples_per_period");
    if (j.contains("workers")) s.workers = static_cast<unsigned>(num(j, "workers"));
    return s;
}

bool is_stage(const json& model) { return model.contains("beta_E"); }

/// Reduced parameters with c filled in from L_bar when absent.
ReducedParams reduced_model(const json& cfg, const HatchFunction* h) {
    const json& m = section(cfg, "model");
    ReducedParams p = is_stage(m) ? reduce_stage_params(io::stage_from_json(m)) : io::reduced_from_json(m);
    if (!m.contains("c")) {
        if (!h || !cfg.contains("L_bar")) throw ConfigError("model: give 'c' or 'L_bar' to calibrate it");
        p.c = calibrate_c(p.b_E, p.d_E, p.d_L, *h, num(cfg, "L_bar"));
    }
    return p;
}

int cmd_simulate(const json& cfg, const fs::path& out, std::ostream& log) {
    const HatchFunction h = io::hatch_from_json(section(cfg, "hatch"));
    const json& m = section(cfg, "model");
    const ReducedParams rp = reduced_model(cfg, &h);
    int dim = 2;
    std::optional<System> sys;
    if (is_stage(m)) {
        StageParams sp = io::stage_from_json(m);
        sp.c = rp.c;
        dim = m.contains("dimension") ? static_cast<int>(num(m, "dimension")) : 3;
        sys.emplace(sp, h, dim);
    } else {
        sys.emplace(rp, h);
    }

    std::vector<double> x0;
    const json& init = cfg.contains("initial") ? cfg.at("initial") : json("equilibrium");
    if (init.is_array()) {
        x0 = numbers(cfg, "initial");
    } else {
        const double L_bar = num(cfg, "L_bar");
        const double E_bar = rp.b_E * L_bar / (rp.d_E + h(L_bar));
        if (dim == 2) {
            x0 = {E_bar, L_bar};
        } else {
            const auto full = lift_equilibrium_4d(std::get<StageParams>(sys->params()), E_bar, L_bar);
            x0 = dim == 4 ? std::vector<double>(full.begin(), full.end())
                          : std::vector<double>{full[0], full[1], full[3]};
        }
        if (init.is_object() && init.contains("offset")) {
            const auto off = numbers(init, "offset");
            for (std::size_t i = 0; i < off.size() && i < x0.size(); ++i) x0[i] += off[i];
        }
    }
    if (x0.size() != static_cast<std::size_t>(dim)) throw ConfigError("initial state has the wrong dimension");

    const json sim = cfg.contains("sim") ? cfg.at("sim") : json::object();
    const auto span = sim.contains("t_span") ? numbers(sim, "t_span") : std::vector<double>{0.0, 100.0};
    if (span.size() != 2) throw ConfigError("sim.t_span must have two entries");
    IntegratorOptions opt;
    if (sim.contains("rtol")) opt.rtol = num(sim, "rtol");
    if (sim.contains("atol")) opt.atol = num(sim, "atol");
    opt.output_step = sim.contains("output_step") ? num(sim, "output_step") : (span[1] - span[0]) / 2000.0;

    const Trajectory traj = integrate(*sys, x0, span[0], span[1], opt);
    {
        auto os = open_out(out, "trajectory.csv", log);
        io::write_trajectory_csv(os, traj);
    }
    if (cfg.contains("L_bar")) {
        const auto metrics = measure_oscillation(traj, 1, num(cfg, "L_bar"));
        auto os = open_out(out, "metrics.json", log);
        os << io::to_json(metrics).dump(2) << '\n';
    }
    return 0;
}

int cmd_equilibria(const json& cfg, const fs::path& out, std::ostream& log) {
    const HatchFunction h = io::hatch_from_json(section(cfg, "hatch"));
    const ReducedParams p = reduced_model(cfg, &h);
    const auto eqs = find_steady_states(p, h);
    {
        auto os = open_out(out, "equilibria.csv", log);
        io::write_equilibria_csv(os, eqs);
    }
    json report = io::to_json(check_assumptions(p, h));
    report["c"] = p.c;
    if (h.is_smooth()) {
        const auto u = uniqueness_sufficient(p, h);
        report["uniqueness_sufficient"] = u.unique;
        report["uniqueness_reason"] = u.reason;
    }
    auto os = open_out(out, "assumptions.json", log);
    os << report.dump(2) << '\n';
    return 0;
}

int cmd_hopf(const json& cfg, const fs::path& out, std::ostream& log) {
    const ReducedParams p = io::reduced_from_json(section(cfg, "model"));
    const double L_bar = num(cfg, "L_bar");
    std::vector<HopfPoint> points;
    for (double a : numbers(cfg, "a_values")) points.push_back(bifurcation_point(a, p, L_bar));
    {
        auto os = open_out(out, "hopf.csv", log);
        io::write_hopf_csv(os, points);
    }
    if (cfg.contains("a_tilde_range")) {
        const auto r = numbers(cfg, "a_tilde_range");
        if (r.size() != 2) throw ConfigError("a_tilde_range must have two entries");
        const auto at = find_a_tilde(p, L_bar, r[0], r[1]);
        json j = {{"a_crit", thresholds(p, L_bar).a_crit}, {"a_tilde", at ? json(*at) : json(nullptr)}};
        auto os = open_out(out, "hopf.json", log);
        os << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_slowfast(const json& cfg, const fs::path& out, std::ostream& log) {
    const HatchFunction h = io::hatch_from_json(section(cfg, "hatch"));
    const double L_bar = num(cfg, "L_bar");
    const double d_E = cfg.contains("d_E") ? num(cfg, "d_E") : 0.0;
    const LimitPair pair(h, L_bar, d_E);
    const SlowFastCycle cycle = build_cycle(pair);
    const std::size_t n = cfg.contains("samples") ? static_cast<std::size_t>(num(cfg, "samples")) : 512;
    {
        auto os = open_out(out, "cycle.csv", log);
        io::write_cycle_csv(os, cycle, pair, n);
    }
    auto os = open_out(out, "slowfast.json", log);
    os << io::to_json(cycle).dump(2) << '\n';
    return 0;
}

int cmd_sweep(const json& cfg, const fs::path& out, std::ostream& log) {
    const json& grid = section(cfg, "grid");
    const std::string kind = grid.value("kind", std::string("arctan"));
    const SimSettings s = sim_settings(cfg);
    auto os = open_out(out, "sweep.csv", log);
    if (kind == "arctan") {
        ArctanGridSpec spec;
        spec.base = io::reduced_from_json(section(cfg, "model"));
        spec.L_bar = num(cfg, "L_bar");
        if (grid.contains("i")) {
            spec.i_values.clear();
            for (double v : numbers(grid, "i")) spec.i_values.push_back(static_cast<int>(v));
        }
        if (grid.contains("j")) spec.j_values = numbers(grid, "j");
        io::write_sweep_csv(os, run_sweep(spec, s));
    } else if (kind == "hill") {
        HillGridSpec spec;
        spec.dimension = grid.contains("dimension") ? static_cast<int>(num(grid, "dimension")) : 2;
        spec.p = num(grid, "p");
        spec.k = num(grid, "k");
        spec.L_bar = num(cfg, "L_bar");
        const json& m = section(cfg, "model");
        if (spec.dimension == 3) spec.base3 = io::stage_from_json(m);
        else spec.base2 = io::reduced_from_json(m);
        if (grid.contains("iota")) spec.iota = numbers(grid, "iota");
        else spec.iota_from_X = true;
        spec.zeta = numbers(grid, "zeta");
        io::write_sweep_csv(os, run_sweep(spec, s));
    } else {
        throw ConfigError("grid.kind must be 'arctan' or 'hill'");
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mosquito egg-hatching feedback dynamics", "hatchcycle"};
    app.require_subcommand(1);
    std::string config;
    std::string out_dir;

    using Handler = int (*)(const json&, const fs::path&, std::ostream&);
    const std::vector<std::tuple<std::string, std::string, Handler>> commands = {
        {"simulate", "Integrate a model from a JSON config", cmd_simulate},
        {"equilibria", "Steady states, stability and assumption checks", cmd_equilibria},
        {"hopf", "Hopf bifurcation points along the arctan family", cmd_hopf},
        {"slowfast", "Relaxation cycle of the slow-fast limit", cmd_slowfast},
        {"sweep", "Parameter sweep with simulated period and amplitude", cmd_sweep},
    };
    std::vector<std::pair<CLI::App*, Handler>> subs;
    for (const auto& [name, desc, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("-c,--config", config, "JSON configuration file")->required();
        sub->add_option("-o,--out", out_dir, "Output directory (default: config out_dir or .)");
        subs.emplace_back(sub, fn);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        const json cfg = io::read_json_file(config);
        fs::path dir = out_dir.empty() ? fs::path(cfg.value("out_dir", std::string("."))) : fs::path(out_dir);
        for (const auto& [sub, fn] : subs) {
            if (sub->parsed()) return fn(cfg, dir, out);
        }
        return 1;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const io::json::exception& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << '\n';
        return 3;
    }
}

}  // namespace hatchcycle
