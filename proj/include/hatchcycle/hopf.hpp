#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "hatchcycle/hatch.hpp"
#include "hatchcycle/model.hpp"

// Hopf bifurcation of the 2D system along the arctan family
// h(L) = a (arctan(b (L - L_bar)) + pi/2), with c calibrated so that the
// positive steady state sits at L_bar.

namespace hatchcycle {

enum class Criticality { Supercritical, Subcritical, Degenerate };

std::string_view to_string(Criticality c);

struct HopfPoint {
    double a;
    double b_crit;
    double k;  // a pi / 2 = h(L_bar)
    double c;
    double E_bar;
    double omega;
    double period_T0;
    double alpha_N;
    Criticality criticality;
};

/// Arctan with h(L_bar) = k and h'(L_bar) = k_prime.
HatchFunction hatch_from_k_kprime(double L_bar, double k, double k_prime);

/// T(a pi/2)/a: the b at which the trace of the steady-state Jacobian vanishes.
double b_crit(double a, const ReducedParams& p, double L_bar);

/// Throws std::invalid_argument if a <= a_crit.
HopfPoint bifurcation_point(double a, const ReducedParams& p, double L_bar);

/// Closed-form frequency at the trace-zero locus for k = h(L_bar).
double omega_at_bifurcation(double k, const ReducedParams& p);

/// Positive k whose bifurcation period is T0.
double k_from_period(double T0, const ReducedParams& p);

/// Linear data at the steady state in shifted coordinates (x, y) = (E - E_bar, L - L_bar):
/// M = [[A, B], [C, D]], nonlinear parts f(x,y) = a b E_bar y - a arctan(b y)(x + E_bar)
/// and g = -f - c y^2.
struct HopfFrame {
    double a;
    double b;
    double c;
    double L_bar;
    double E_bar;
    double A;
    double B;
    double C;
    double D;
    double omega;  // sqrt(det M); NaN when det M <= 0
    Matrix<2> P;
    Matrix<2> P_inv;

    [[nodiscard]] double f(double x, double y) const;
    [[nodiscard]] double g(double x, double y) const;
};

/// Frame for arbitrary b; P and P_inv are only meaningful at b = b_crit.
HopfFrame hopf_frame(double a, double b, const ReducedParams& p, double L_bar);

/// Partial derivatives at the origin of a planar map, indexed by multi-index:
/// first order (x, y), second (xx, xy, yy), third (xxx, xxy, xyy, yyy).
struct Partials {
    double xx, xy, yy;
    double xxx, xxy, xyy, yyy;
};

struct NormalForm {
    double alpha_N;
    double omega;
    Partials F;
    Partials G;
    Criticality criticality;
};

/// Analytic partials of f and g at the origin.
std::array<Partials, 2> nonlinear_partials(const HopfFrame& frame);

/// Pushes (f, g) partials through (X, Y) = P (x, y).
std::array<Partials, 2> canonical_partials(const HopfFrame& frame);

/// First Lyapunov quantity from canonical partials.
double alpha_from_partials(const Partials& F, const Partials& G, double omega);

/// Normal-form coefficient at b = b_crit(a).
NormalForm normal_form_coefficient(double a, const ReducedParams& p, double L_bar);

/// Same at an explicit b; throws std::invalid_argument("not at bifurcation locus")
/// unless the trace vanishes there.
NormalForm normal_form_coefficient(double a, double b, const ReducedParams& p, double L_bar);

/// Sign change of alpha_N(a) over [a_lo, a_hi], located by a log-spaced scan
/// of `samples` points and bisection. Empty if alpha_N keeps one sign.
std::optional<double> find_a_tilde(const ReducedParams& p, double L_bar, double a_lo, double a_hi,
                                   std::size_t samples = 256);

}  // namespace hatchcycle
