#include "hatchcycle/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "hatchcycle/errors.hpp"
#include "hatchcycle/numeric.hpp"

namespace hatchcycle::io {

namespace {

double num(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key) || !j.at(key).is_number()) {
        throw ConfigError(std::string("missing or non-numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

template <class F>
auto wrap(F&& make) {
    try {
        return make();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

json to_json(const HatchFunction& h) {
    json j;
    j["family"] = std::string(h.family_name());
    if (const auto* f = h.as<Arctan>()) {
        j["a"] = f->a;
        j["b"] = f->b;
        j["L_ref"] = f->L_ref;
    } else if (const auto* f = h.as<Hill>()) {
        j["h_m"] = f->h_m;
        j["a"] = f->a;
        j["lambda"] = f->lambda;
        j["p"] = f->p;
    } else if (const auto* f = h.as<InverseHill>()) {
        j["h_m"] = f->h_m;
        j["a"] = f->a;
        j["lambda"] = f->lambda;
        j["p"] = f->p;
    } else if (const auto* f = h.as<Step>()) {
        j["h_m"] = f->h_m;
        j["a"] = f->a;
        j["threshold"] = f->threshold;
    } else if (const auto* f = h.as<Constant>()) {
        j["k"] = f->k;
    }
    return j;
}

HatchFunction hatch_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
        throw ConfigError("hatch: missing 'family'");
    }
    const auto family = j.at("family").get<std::string>();
    return wrap([&]() -> HatchFunction {
        if (family == "arctan") return Arctan{num(j, "a"), num(j, "b"), num(j, "L_ref")};
        if (family == "hill") return Hill{num(j, "h_m"), num(j, "a"), num(j, "lambda"), num(j, "p")};
        if (family == "inverse_hill") return InverseHill{num(j, "h_m"), num(j, "a"), num(j, "lambda"), num(j, "p")};
        if (family == "step") return Step{num(j, "h_m"), num(j, "a"), num(j, "threshold")};
        if (family == "constant") return Constant{num(j, "k")};
        throw ConfigError("hatch: unknown family '" + family + "'");
    });
}

json to_json(const ReducedParams& p) { return {{"b_E", p.b_E}, {"d_E", p.d_E}, {"d_L", p.d_L}, {"c", p.c}}; }

ReducedParams reduced_from_json(const json& j) {
    ReducedParams p{num(j, "b_E"), num(j, "d_E"), num(j, "d_L"), j.contains("c") ? num(j, "c") : 1.0};
    wrap([&] {
        p.validate();
        return 0;
    });
    return p;
}

json to_json(const StageParams& p) {
    return {{"beta_E", p.beta_E},   {"delta_E", p.delta_E}, {"delta_L", p.delta_L}, {"delta_P", p.delta_P},
            {"delta_A", p.delta_A}, {"tau_L", p.tau_L},     {"tau_P", p.tau_P},     {"c", p.c}};
}

StageParams stage_from_json(const json& j) {
    StageParams p{num(j, "beta_E"), num(j, "delta_E"), num(j, "delta_L"), num(j, "delta_P"),
                  num(j, "delta_A"), num(j, "tau_L"),   num(j, "tau_P"),
                  j.contains("c") ? num(j, "c") : 1.0};
    wrap([&] {
        p.validate();
        return 0;
    });
    return p;
}

json to_json(const AssumptionReport& r) {
    const auto num_or_null = [](double x) { return std::isfinite(x) ? json(x) : json(nullptr); };
    return {{"hyp_h_ok", r.hyp_h_ok},
            {"hyp_naturelle_ok", r.hyp_naturelle_ok},
            {"hyp_params_ok", r.hyp_params_ok},
            {"sufcond_ok", r.sufcond_ok},
            {"Q0", num_or_null(r.Q0)},
            {"K", num_or_null(r.K)},
            {"U_M", num_or_null(r.U_M)}};
}

json to_json(const OscillationMetrics& m) {
    return {{"period", m.period},
            {"L_min", m.L_min},
            {"L_max", m.L_max},
            {"relative_amplitude_pct", m.relative_amplitude_pct},
            {"peak_to_trough_pct", m.peak_to_trough_pct},
            {"n_peaks_used", m.n_peaks_used},
            {"interval_spread", m.interval_spread},
            {"converged", m.converged}};
}

json to_json(const SlowFastCycle& c) {
    return {{"u_m0", c.u_m0},   {"u_M", c.u_M},   {"u_m", c.u_m},         {"u_M0", c.u_M0},
            {"phi_m", c.phi_m}, {"phi_M", c.phi_M}, {"A_u", c.amplitude_u}, {"A_v", c.amplitude_v},
            {"tau", c.tau},     {"eta0", c.eta0}, {"xi", c.xi}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("invalid JSON in '" + path + "': " + e.what());
    }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    switch (traj.dimension) {
        case 2: os << "t,E,L\n"; break;
        case 3: os << "t,E,L,A\n"; break;
        case 4: os << "t,E,L,P,A\n"; break;
        default:
            os << "t";
            for (std::size_t j = 0; j < traj.dimension; ++j) os << ",x" << j;
            os << "\n";
    }
    for (std::size_t i = 0; i < traj.size(); ++i) {
        os << fmt(traj.times[i]);
        for (double v : traj.state(i)) os << ',' << fmt(v);
        os << '\n';
    }
}

void write_equilibria_csv(std::ostream& os, const std::vector<Equilibrium>& eqs) {
    os << "L_bar,E_bar,trace,det,re_lambda,im_lambda,class\n";
    for (const auto& e : eqs) {
        os << fmt(e.L_bar) << ',' << fmt(e.E_bar) << ',' << fmt(e.trace) << ',' << fmt(e.det) << ','
           << fmt(e.lambda1.real()) << ',' << fmt(std::abs(e.lambda1.imag())) << ',' << to_string(e.classification)
           << '\n';
    }
}

void write_hopf_csv(std::ostream& os, const std::vector<HopfPoint>& points) {
    os << "a,b_crit,omega,period_T0,alpha_N,criticality\n";
    for (const auto& p : points) {
        os << fmt(p.a) << ',' << fmt(p.b_crit) << ',' << fmt(p.omega) << ',' << fmt(p.period_T0) << ','
           << fmt(p.alpha_N) << ',' << to_string(p.criticality) << '\n';
    }
}

void write_cycle_csv(std::ostream& os, const SlowFastCycle& cy, const LimitPair& pair, std::size_t n) {
    os << "segment,u,v\n";
    for (double u : numeric::linspace(cy.u_m0, cy.u_M, n)) os << "left," << fmt(u) << ',' << fmt(pair.phi(u)) << '\n';
    os << "jump_up," << fmt(cy.u_M) << ',' << fmt(cy.phi_M) << '\n';
    os << "jump_up," << fmt(cy.u_M0) << ',' << fmt(cy.phi_M) << '\n';
    for (double u : numeric::linspace(cy.u_M0, cy.u_m, n)) os << "right," << fmt(u) << ',' << fmt(pair.phi(u)) << '\n';
    os << "jump_down," << fmt(cy.u_m) << ',' << fmt(cy.phi_m) << '\n';
    os << "jump_down," << fmt(cy.u_m0) << ',' << fmt(cy.phi_m) << '\n';
}

void write_sweep_csv(std::ostream& os, const std::vector<ArctanSweepRow>& rows) {
    os << "a,b,c,E_bar,period_days,amplitude_pct,class\n";
    for (const auto& r : rows) {
        const bool ok = r.record.ok;
        os << fmt(r.cell.a) << ',' << fmt(r.cell.b) << ',' << fmt(r.cell.c) << ',' << fmt(r.cell.E_bar) << ','
           << (ok ? fmt(r.record.metrics.period) : "nan") << ','
           << (ok ? fmt(r.record.metrics.relative_amplitude_pct) : "nan") << ',' << r.classification << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<HillSweepRow>& rows) {
    os << "iota,zeta,alpha,a,lambda,h_m,c,E_bar,period_days,amplitude_pct,class\n";
    for (const auto& r : rows) {
        const bool ok = r.record.ok;
        os << fmt(r.cell.iota) << ',' << fmt(r.cell.zeta) << ',' << fmt(r.cell.alpha) << ',' << fmt(r.cell.a) << ','
           << fmt(r.cell.lambda) << ',' << fmt(r.cell.h_m) << ',' << fmt(r.cell.c) << ',' << fmt(r.cell.E_bar) << ','
           << (ok ? fmt(r.record.metrics.period) : "nan") << ','
           << (ok ? fmt(r.record.metrics.relative_amplitude_pct) : "nan") << ',' << r.classification << '\n';
    }
}

}  // namespace hatchcycle::io
