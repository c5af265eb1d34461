#pragma once

#include <array>
#include <span>
#include <variant>

#include "hatchcycle/hatch.hpp"

namespace hatchcycle {

/// Rate constants of the egg/larva/pupa/adult model. Rates per day, c per larva per day.
struct StageParams {
    double beta_E;
    double delta_E;
    double delta_L;
    double delta_P;
    double delta_A;
    double tau_L;
    double tau_P;
    double c;

    /// All fields finite and positive. delta_E may be 0 (immortal eggs).
    void validate() const;
    /// Adult production per larva in the pupa-eliminated system: tau_P tau_L / (delta_P + tau_P).
    [[nodiscard]] double adult_recruitment() const { return tau_P * tau_L / (delta_P + tau_P); }
};

/// Parameters of the two-dimensional egg/larva system.
struct ReducedParams {
    double b_E;
    double d_E;
    double d_L;
    double c;

    void validate() const;
};

ReducedParams reduce_stage_params(const StageParams& p);

using State2 = std::array<double, 2>;  // (E, L)
using State3 = std::array<double, 3>;  // (E, L, A)
using State4 = std::array<double, 4>;  // (E, L, P, A)

template <std::size_t N>
using Matrix = std::array<std::array<double, N>, N>;

State2 rhs(const ReducedParams& p, const HatchFunction& h, const State2& x);
State3 rhs(const StageParams& p, const HatchFunction& h, const State3& x);
State4 rhs(const StageParams& p, const HatchFunction& h, const State4& x);

/// Analytic Jacobians. Require a differentiable h.
Matrix<2> jacobian(const ReducedParams& p, const HatchFunction& h, const State2& x);
Matrix<3> jacobian(const StageParams& p, const HatchFunction& h, const State3& x);
Matrix<4> jacobian(const StageParams& p, const HatchFunction& h, const State4& x);

/// One of the three model variants, with a dimension-checked right-hand side
/// suitable for the integrator.
class System {
public:
    System(ReducedParams p, HatchFunction h);
    /// dimension must be 3 or 4.
    System(StageParams p, HatchFunction h, int dimension);

    [[nodiscard]] int dimension() const { return dimension_; }
    [[nodiscard]] const HatchFunction& hatch() const { return h_; }
    [[nodiscard]] const std::variant<ReducedParams, StageParams>& params() const { return params_; }

    /// Throws std::invalid_argument if x or dxdt do not match the dimension.
    void operator()(std::span<const double> x, std::span<double> dxdt) const;

private:
    std::variant<ReducedParams, StageParams> params_;
    HatchFunction h_;
    int dimension_;
};

struct AssumptionReport {
    bool hyp_h_ok;
    bool hyp_naturelle_ok;
    bool hyp_params_ok;
    bool sufcond_ok;
    double Q0;
    double K;    // trapping bound for E + L, +inf when d_E = 0
    double U_M;  // (b_E + d_E - d_L)^2 / (4c)
    double sufcond_min;  // min over x of cx + d_E b_E/(d_E + h(x))
};

AssumptionReport check_assumptions(const ReducedParams& p, const HatchFunction& h);

/// Full 4D equilibrium (E, L, P, A) from an (E, L) steady state.
State4 lift_equilibrium_4d(const StageParams& p, double E_bar, double L_bar);

}  // namespace hatchcycle
