#include "hatchcycle/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "hatchcycle/equilibria.hpp"
#include "hatchcycle/hopf.hpp"

namespace hatchcycle {

std::vector<double> default_j_values() {
    return {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.5, 3.0, 3.5, 4.0};
}

std::vector<ArctanCell> arctan_grid(const ArctanGridSpec& spec) {
    std::vector<ArctanCell> cells;
    cells.reserve(spec.i_values.size() * spec.j_values.size());
    for (int i : spec.i_values) {
        if (i < 1) throw std::invalid_argument("arctan_grid: i must be >= 1");
        const double a = 0.1 + 0.05 * (i - 1);
        const double b_min = b_crit(a, spec.base, spec.L_bar);
        for (double j : spec.j_values) {
            const double b = b_min * (1.0 + j);
            HatchFunction h = Arctan{a, b, spec.L_bar};
            const double c = calibrate_c(spec.base.b_E, spec.base.d_E, spec.base.d_L, h, spec.L_bar);
            const double E_bar = spec.base.b_E * spec.L_bar / (spec.base.d_E + h(spec.L_bar));
            cells.push_back({i, j, a, b, b_min, c, E_bar, h});
        }
    }
    return cells;
}

double hill_X(const HillGridSpec& spec) {
    if (!(spec.p > 0.0)) throw std::invalid_argument("hill_grid: p must be > 0");
    if (spec.dimension == 2) {
        const auto& b = spec.base2;
        return (2.0 + (spec.k - b.d_L) / b.b_E) / spec.p;
    }
    if (spec.dimension == 3) {
        const auto& s = spec.base3;
        const double b = reduce_stage_params(s).b_E;
        return (2.0 * b - s.delta_L - s.tau_L + s.delta_A + spec.k) / (spec.p * b);
    }
    throw std::invalid_argument("hill_grid: dimension must be 2 or 3");
}

std::vector<HillCell> hill_grid(const HillGridSpec& spec) {
    const ReducedParams rp = spec.dimension == 3 ? reduce_stage_params(spec.base3) : spec.base2;
    if (spec.dimension == 2) rp.validate();
    if (rp.d_E != 0.0) throw std::invalid_argument("hill_grid: egg mortality must be 0");
    if (!(spec.k > 0.0) || !(spec.L_bar > 0.0)) throw std::invalid_argument("hill_grid: k and L_bar must be > 0");
    const double X = hill_X(spec);
    if (!(X < 1.0)) throw std::invalid_argument("no destabilizing Hill function exists for this (p, k)");

    std::vector<double> iotas = spec.iota;
    if (iotas.empty() && spec.iota_from_X) iotas.push_back((1.0 - X) / 10.0);
    const double c = (rp.b_E - rp.d_L) / spec.L_bar;
    if (!(c > 0.0)) throw std::invalid_argument("hill_grid: requires b_E > d_L");

    std::vector<HillCell> cells;
    for (double iota : iotas) {
        if (!(iota > 0.0 && iota < 1.0 - X)) throw std::invalid_argument("hill_grid: iota must lie in (0, 1 - X)");
        for (double zeta : spec.zeta) {
            if (!(zeta > 0.0 && zeta < 1.0)) throw std::invalid_argument("hill_grid: zeta must lie in (0, 1)");
            const double w = X + iota;
            const double ap = w / (1.0 - w);
            const double alpha = std::pow(ap, 1.0 / spec.p);
            const double a = zeta * spec.k * (1.0 + ap) + (1.0 - zeta) * spec.k * (1.0 + ap) * (1.0 + ap) * X / ap;
            const double h_m = spec.k - a / (1.0 + ap);
            if (!(h_m > 0.0)) throw std::invalid_argument("hill_grid: construction gives h_m <= 0");
            const double lambda = alpha * spec.L_bar;
            HatchFunction h = Hill{h_m, a, lambda, spec.p};
            cells.push_back({iota, zeta, X, alpha, a, lambda, h_m, c, rp.b_E * spec.L_bar / h(spec.L_bar), h});
        }
    }
    return cells;
}

unsigned resolve_workers(unsigned requested) {
    if (const char* env = std::getenv("HATCHCYCLE_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

SweepRecord run_task(const SweepTask& task, const SimSettings& s) {
    SweepRecord rec;
    const double expected = task.expected_period > 0.0 ? task.expected_period : 1.0;
    double duration = std::max(s.min_days, s.periods * expected);
    IntegratorOptions opt;
    opt.rtol = s.rtol;
    opt.atol = s.atol;
    opt.output_step = expected / s.samples_per_period;
    try {
        for (int attempt = 0; attempt < std::max(1, s.max_attempts); ++attempt) {
            const Trajectory traj = integrate(task.system, task.x0, 0.0, duration, opt);
            rec.duration = duration;
            rec.metrics = measure_oscillation(traj, task.L_index, task.L_ref, s.transient_fraction);
            if (rec.metrics.converged) {
                rec.ok = true;
                return rec;
            }
            const double seen = measure_oscillation(traj, task.L_index, task.L_ref, 0.0).period;
            duration = std::max(2.0 * duration, s.periods * std::max(seen, rec.metrics.period));
        }
        rec.failure = "no converged oscillation";
    } catch (const std::exception& e) {
        rec.failure = e.what();
    }
    return rec;
}

std::vector<SweepRecord> run_tasks(const std::vector<SweepTask>& tasks, const SimSettings& settings) {
    std::vector<SweepRecord> out(tasks.size());
    const unsigned n = std::min<unsigned>(resolve_workers(settings.workers),
                                          static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) out[i] = run_task(tasks[i], settings);
    };
    if (n <= 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return out;
}

std::vector<ArctanSweepRow> run_sweep(const ArctanGridSpec& spec, const SimSettings& settings) {
    const auto cells = arctan_grid(spec);
    std::vector<SweepTask> tasks;
    std::vector<ArctanSweepRow> rows;
    tasks.reserve(cells.size());
    rows.reserve(cells.size());
    for (const auto& cell : cells) {
        ReducedParams p = spec.base;
        p.c = cell.c;
        const Equilibrium eq = classify(p, cell.h, cell.E_bar, spec.L_bar);
        const double T0 = 2.0 * std::numbers::pi / omega_at_bifurcation(cell.a * std::numbers::pi / 2.0, p);
        tasks.push_back({System(p, cell.h), {cell.E_bar, spec.L_bar + settings.perturbation}, spec.L_bar, T0, 1});
        rows.push_back({cell, std::string(to_string(eq.classification)), {}});
    }
    auto records = run_tasks(tasks, settings);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].record = std::move(records[i]);
    return rows;
}

std::vector<HillSweepRow> run_sweep(const HillGridSpec& spec, const SimSettings& settings) {
    const auto cells = hill_grid(spec);
    std::vector<SweepTask> tasks;
    std::vector<HillSweepRow> rows;
    for (const auto& cell : cells) {
        std::string cls;
        if (spec.dimension == 2) {
            ReducedParams p = spec.base2;
            p.c = cell.c;
            cls = to_string(classify(p, cell.h, cell.E_bar, spec.L_bar).classification);
            tasks.push_back({System(p, cell.h), {cell.E_bar, spec.L_bar + settings.perturbation}, spec.L_bar,
                             0.0, 1});
        } else {
            StageParams s = spec.base3;
            s.c = cell.c;
            const double A_bar = s.adult_recruitment() * spec.L_bar / s.delta_A;
            const auto ev = eigenvalues(jacobian(s, cell.h, State3{cell.E_bar, spec.L_bar, A_bar}));
            double max_re = -1e300;
            for (const auto& z : ev) max_re = std::max(max_re, z.real());
            cls = max_re > 0.0 ? "Unstable" : "Stable";
            tasks.push_back({System(s, cell.h, 3), {cell.E_bar, spec.L_bar + settings.perturbation, A_bar},
                             spec.L_bar, 0.0, 1});
        }
        rows.push_back({cell, cls, {}});
    }
    auto records = run_tasks(tasks, settings);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].record = std::move(records[i]);
    return rows;
}

}  // namespace hatchcycle
