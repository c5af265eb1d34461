#pragma once

#include <array>
#include <optional>
#include <vector>

#include "hatchcycle/hatch.hpp"

// Egg-dominated regime: v = eps E, u = L / eta, with eggs slow and larvae fast.

namespace hatchcycle {

/// The eps-scaled 2D system
///   v' = eps eta b_E u - (d_E + h(eta u)) v
///   eps u' = h(eta u) v / eta - d_L eps u - c eta eps u^2
struct ScaledSystem {
    double eps;
    double eta;
    double b_E_eps;
    double c_eps;
    double d_E;
    double d_L;
    double L_bar;
    HatchFunction h;

    /// (du/dt, dv/dt).
    [[nodiscard]] std::array<double, 2> rhs_uv(double u, double v) const;
    /// Steady state ((h(L_bar) - eps d_L L_bar) / L_bar, 1).
    [[nodiscard]] std::array<double, 2> equilibrium() const;
};

/// Scalings b_E = (h(L_bar) + d_E)/(eps L_bar), eta = L_bar^2/(h(L_bar) - eps d_L L_bar),
/// c = 1/(eps eta). Throws std::invalid_argument("eps too large for scaling").
ScaledSystem scaled_system(double eps, const HatchFunction& h, double L_bar, double d_E, double d_L);

/// eps -> 0 limit: f(u,v) = eta0 xi u - (d_E + h(eta0 u)) v, g(u,v) = h(eta0 u) v / eta0 - u^2,
/// with slow manifold g = 0 given by v = phi(u) = eta0 u^2 / h(eta0 u).
class LimitPair {
public:
    /// eta0 = L_bar^2/h(L_bar), xi = (h(L_bar) + d_E)/L_bar.
    LimitPair(HatchFunction h, double L_bar, double d_E);
    LimitPair(HatchFunction h, double eta0, double xi, double d_E, double L_scale);

    [[nodiscard]] double f(double u, double v) const;
    [[nodiscard]] double g(double u, double v) const;
    [[nodiscard]] double phi(double u) const;
    [[nodiscard]] double dphi(double u) const;

    [[nodiscard]] double eta0() const { return eta0_; }
    [[nodiscard]] double xi() const { return xi_; }
    [[nodiscard]] double d_E() const { return d_E_; }
    /// Larval density scale used to bound extremum searches.
    [[nodiscard]] double L_scale() const { return L_scale_; }
    [[nodiscard]] const HatchFunction& h() const { return h_; }

private:
    HatchFunction h_;
    double eta0_;
    double xi_;
    double d_E_;
    double L_scale_;
};

struct PhiExtrema {
    double u_M;  // local max of phi
    double u_m;  // local min of phi, u_m > u_M
};

/// Interior extrema of phi, from x h'(x) = 2 h(x) with x = eta0 u. Closed form
/// for Hill; otherwise a bracketed scan over x in (0, 20 L_scale]. Empty when
/// phi has no interior max/min pair. Throws std::invalid_argument for Step.
std::optional<PhiExtrema> phi_extrema(const LimitPair& pair);

struct SlowFastCycle {
    double eta0;
    double xi;
    double u_m0;
    double u_M;
    double u_m;
    double u_M0;
    double phi_M;
    double phi_m;
    double amplitude_v;
    double amplitude_u;
    double tau;
};

/// Relaxation cycle of the limit pair. Throws NumericalError when phi has no
/// extrema pair or when f vanishes on a slow branch.
SlowFastCycle build_cycle(const LimitPair& pair);
SlowFastCycle build_cycle(const HatchFunction& h, double L_bar, double d_E);

/// Closed-form phi_M - phi_m for Hill functions, rho = h_m/a, alpha = lambda/L_bar.
/// Requires p > 2 and rho < (p-2)^2/(8p).
double hill_amplitude(double rho, double alpha, double p);

struct StepLimit {
    double A_u;
    double A_v;
    double tau;
};

/// Closed forms for h a step from h_m to h_m + a at alpha L_bar, with d_E = 0.
/// Throws std::invalid_argument outside the validity domain (alpha = 1, d_E != 0,
/// nonpositive logarithm arguments).
StepLimit step_limit(double h_m, double a, double alpha, double L_bar, double d_E = 0.0);

/// Fast-layer projection of (u0, v0) onto g = 0 along the direction sign(g).
std::array<double, 2> project_pi(double u0, double v0, const SlowFastCycle& cycle, const LimitPair& pair);

/// The limit cycle as a closed polyline in the (u, v) plane: both slow
/// branches sampled at n points each plus the two horizontal jumps.
std::vector<std::array<double, 2>> cycle_polyline(const SlowFastCycle& cycle, const LimitPair& pair,
                                                  std::size_t n = 256);

/// Symmetric Hausdorff distance between two polylines (segments included).
double hausdorff_distance(const std::vector<std::array<double, 2>>& a,
                          const std::vector<std::array<double, 2>>& b);

}  // namespace hatchcycle
