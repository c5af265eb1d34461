"""Egg/larva population dynamics with density-dependent hatching."""

from ._hatchcycle import (
    AssumptionReport,
    ConfigError,
    Equilibrium,
    HatchFunction,
    HopfPoint,
    NumericalError,
    OscillationMetrics,
    ReducedParams,
    SlowFastCycle,
    StabilityThresholds,
    StageParams,
    arctan,
    bifurcation_point,
    build_cycle,
    calibrate_c,
    check_assumptions,
    constant,
    find_steady_states,
    hill,
    hill_amplitude,
    integrate,
    integrate_stage,
    inverse_hill,
    measure_oscillation,
    omega_at_bifurcation,
    reduce_stage_params,
    rhs,
    run_cli,
    step,
    thresholds,
)

__all__ = [name for name in dir() if not name.startswith("_")]
