#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "hatchcycle/model.hpp"

namespace hatchcycle {

using RhsFn = std::function<void(std::span<const double> x, std::span<double> dxdt)>;

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    /// Spacing of the dense-output samples; 0 records every accepted step.
    double output_step = 0.0;
    double max_step = 0.0;  // 0 means unbounded
    double initial_step = 0.0;  // 0 selects automatically
    /// Fixed step size with no error control; 0 means adaptive.
    double fixed_step = 0.0;
    /// Reject steps that drive a component below -10 atol.
    bool nonnegative = false;
    std::size_t max_steps = 100'000'000;
};

struct Trajectory {
    std::size_t dimension = 0;
    std::vector<double> times;
    std::vector<double> data;  // row-major, one row per time
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double rtol = 0.0;
    double atol = 0.0;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    [[nodiscard]] std::span<const double> state(std::size_t i) const {
        return {data.data() + i * dimension, dimension};
    }
    [[nodiscard]] std::vector<double> component(std::size_t j) const;
    [[nodiscard]] std::span<const double> back() const { return state(size() - 1); }
};

/// Dormand-Prince 5(4) with step-size control and quartic dense output.
/// Throws NumericalError("stiffness or singularity encountered") on step-size underflow.
Trajectory integrate(const RhsFn& f, std::vector<double> x0, double t0, double t1,
                     const IntegratorOptions& opt = {});

/// Integrates a model system; negativity control is always on.
Trajectory integrate(const System& sys, std::vector<double> x0, double t0, double t1,
                     IntegratorOptions opt = {});

struct OscillationMetrics {
    double period = 0.0;
    double L_min = 0.0;
    double L_max = 0.0;
    /// 100 max(L_max - L_ref, L_ref - L_min) / L_ref.
    double relative_amplitude_pct = 0.0;
    /// 100 (L_max - L_min) / L_ref.
    double peak_to_trough_pct = 0.0;
    std::size_t n_peaks_used = 0;
    double interval_spread = 0.0;  // (max - min) / mean of inter-peak intervals
    double height_spread = 0.0;    // (max - min) of peak heights over (L_max - L_min)
    bool converged = false;
};

/// Peak-based period and amplitude of one component after discarding the
/// first transient_fraction of the time span.
OscillationMetrics measure_oscillation(const Trajectory& traj, std::size_t variable_index, double L_ref,
                                       double transient_fraction = 0.5);

}  // namespace hatchcycle
