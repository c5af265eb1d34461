#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hatchcycle/hatch.hpp"
#include "hatchcycle/model.hpp"
#include "hatchcycle/sim.hpp"

namespace hatchcycle {

struct SimSettings {
    double rtol = 1e-8;
    double atol = 1e-10;
    double min_days = 150.0;
    double periods = 20.0;          // run length in expected periods
    double transient_fraction = 0.5;
    double perturbation = 0.02;     // initial offset added to L_bar
    double samples_per_period = 256.0;
    int max_attempts = 3;
    unsigned workers = 0;           // 0 = hardware concurrency; HATCHCYCLE_WORKERS overrides
};

/// Default J: 18 values between 0.05 and 4.
std::vector<double> default_j_values();

struct ArctanGridSpec {
    ReducedParams base;  // c is ignored and recalibrated per cell
    double L_bar = 1.13;
    std::vector<int> i_values = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<double> j_values = default_j_values();
};

struct ArctanCell {
    int i;
    double j;
    double a;
    double b;
    double b_min;
    double c;
    double E_bar;
    HatchFunction h;
};

/// a_i = 0.1 + 0.05 (i - 1), b = b_min (1 + j), row-major in (i, j).
std::vector<ArctanCell> arctan_grid(const ArctanGridSpec& spec);

struct HillGridSpec {
    int dimension = 2;  // 2: ReducedParams with d_E = 0; 3: StageParams with delta_E = 0
    double p = 3.0;
    double k = 0.5;
    double L_bar = 1.13;
    ReducedParams base2{20.94, 0.0, 0.15, 1.0};
    StageParams base3{};
    std::vector<double> iota;
    std::vector<double> zeta;
    /// In dimension 3, iota = (1 - X)/10 when this is set and iota is empty.
    bool iota_from_X = false;
};

struct HillCell {
    double iota;
    double zeta;
    double X;
    double alpha;
    double a;
    double lambda;
    double h_m;
    double c;
    double E_bar;
    HatchFunction h;
};

/// X(k) of the Hill destabilization construction.
double hill_X(const HillGridSpec& spec);

/// Hill functions with h(L_bar) = k and an unstable steady state at L_bar.
/// Throws std::invalid_argument("no destabilizing Hill function exists for this (p, k)") if X >= 1.
std::vector<HillCell> hill_grid(const HillGridSpec& spec);

/// One simulation job.
struct SweepTask {
    System system;
    std::vector<double> x0;
    double L_ref;
    double expected_period;
    std::size_t L_index = 1;
};

struct SweepRecord {
    bool ok = false;
    std::string failure;
    double duration = 0.0;
    OscillationMetrics metrics;
};

/// Simulate and measure one task, lengthening the run when too few peaks were seen.
SweepRecord run_task(const SweepTask& task, const SimSettings& settings);

/// Runs the tasks on a worker pool; output order matches input order.
std::vector<SweepRecord> run_tasks(const std::vector<SweepTask>& tasks, const SimSettings& settings);

unsigned resolve_workers(unsigned requested);

struct ArctanSweepRow {
    ArctanCell cell;
    std::string classification;
    SweepRecord record;
};

std::vector<ArctanSweepRow> run_sweep(const ArctanGridSpec& spec, const SimSettings& settings);

struct HillSweepRow {
    HillCell cell;
    std::string classification;
    SweepRecord record;
};

std::vector<HillSweepRow> run_sweep(const HillGridSpec& spec, const SimSettings& settings);

}  // namespace hatchcycle
