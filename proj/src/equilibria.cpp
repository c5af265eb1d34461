#include "hatchcycle/equilibria.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hatchcycle/errors.hpp"
#include "hatchcycle/numeric.hpp"

namespace hatchcycle {

std::string_view to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::StableNode: return "StableNode";
        case StabilityClass::StableFocus: return "StableFocus";
        case StabilityClass::UnstableNode: return "UnstableNode";
        case StabilityClass::UnstableFocus: return "UnstableFocus";
        case StabilityClass::Saddle: return "Saddle";
        case StabilityClass::MarginalCenter: return "MarginalCenter";
    }
    return "unknown";
}

bool is_unstable(StabilityClass c) {
    return c == StabilityClass::UnstableNode || c == StabilityClass::UnstableFocus ||
           c == StabilityClass::Saddle;
}

namespace {

Equilibrium from_trace_det(double E, double L, double tr, double det) {
    Equilibrium eq{};
    eq.E_bar = E;
    eq.L_bar = L;
    eq.trace = tr;
    eq.det = det;
    eq.discriminant = tr * tr - 4.0 * det;
    const std::complex<double> root = std::sqrt(std::complex<double>(eq.discriminant, 0.0));
    eq.lambda1 = 0.5 * (tr + root);
    eq.lambda2 = 0.5 * (tr - root);

    if (det > 0.0 && std::abs(tr) < 1e-10 * std::max(1.0, std::sqrt(det))) {
        eq.classification = StabilityClass::MarginalCenter;
    } else if (det < 0.0) {
        eq.classification = StabilityClass::Saddle;
    } else if (eq.discriminant >= 0.0) {
        eq.classification = tr < 0.0 ? StabilityClass::StableNode : StabilityClass::UnstableNode;
    } else {
        eq.classification = tr < 0.0 ? StabilityClass::StableFocus : StabilityClass::UnstableFocus;
    }
    return eq;
}

double steady_state_function(const ReducedParams& p, const HatchFunction& h, double x) {
    return p.c * x + p.d_E * p.b_E / (p.d_E + h(x)) - (p.b_E - p.d_L);
}

}  // namespace

std::vector<Equilibrium> find_steady_states(const ReducedParams& p, const HatchFunction& h,
                                            std::size_t subintervals) {
    p.validate();
    std::vector<Equilibrium> out;
    out.push_back(classify(p, h, 0.0, 0.0));

    const double excess = p.b_E - p.d_L;
    if (excess <= 0.0) return out;
    const double hi = excess / p.c;

    std::vector<double> roots;
    if (p.d_E == 0.0) {
        roots.push_back(hi);
    } else {
        const auto f = [&](double x) { return steady_state_function(p, h, x); };
        for (double r : numeric::scan_roots(f, 0.0, hi, subintervals)) {
            if (r <= 0.0 || r >= hi) continue;
            // Sign changes across a jump of h are not roots.
            if (std::abs(f(r)) > 1e-8 * excess) continue;
            roots.push_back(r);
        }
    }

    const double merge_tol = 1e-8 * hi;
    std::vector<std::pair<double, int>> merged;
    for (double r : roots) {
        if (!merged.empty() && r - merged.back().first < merge_tol) {
            merged.back().second += 1;
        } else {
            merged.emplace_back(r, 1);
        }
    }

    for (const auto& [L, mult] : merged) {
        const double E = p.b_E * L / (p.d_E + h(L));
        Equilibrium eq = classify(p, h, E, L);
        eq.multiplicity = mult;
        out.push_back(eq);
    }
    return out;
}

double calibrate_c(double b_E, double d_E, double d_L, const HatchFunction& h, double L_bar) {
    if (!(L_bar > 0.0) || !(b_E > d_L)) throw std::invalid_argument("target density not attainable");
    const double k = h(L_bar);
    if (d_E > 0.0 && !(k > d_E * d_L / (b_E - d_L))) {
        throw std::invalid_argument("target density not attainable");
    }
    const double c = (b_E - d_L - (d_E > 0.0 ? d_E * b_E / (d_E + k) : 0.0)) / L_bar;
    if (!(c > 0.0)) throw std::invalid_argument("target density not attainable");
    return c;
}

Equilibrium classify(const ReducedParams& p, const HatchFunction& h, double E, double L) {
    if (E == 0.0 && L == 0.0) {
        const double h0 = h(0.0);
        return from_trace_det(0.0, 0.0, -(p.d_L + p.d_E + h0), p.d_E * p.d_L + h0 * (p.d_L - p.b_E));
    }
    const double k = h(L);
    const State2 r = rhs(p, h, {E, L});
    const double scale0 = std::abs(p.b_E * L) + std::abs((p.d_E + k) * E);
    const double scale1 = std::abs(k * E) + std::abs(p.d_L * L) + std::abs(p.c * L * L);
    if (std::abs(r[0]) > 1e-8 * scale0 || std::abs(r[1]) > 1e-8 * scale1) {
        throw std::invalid_argument("classify: point is not a steady state");
    }
    const double kp = h.is_step() ? 0.0 : h.derivative(L);
    const double tr = kp * E - p.d_L - 2.0 * p.c * L - p.d_E - k;
    const double det = p.c * p.d_E * L - p.d_E * kp * E + p.c * L * k;
    return from_trace_det(E, L, tr, det);
}

double StabilityThresholds::T(double k) const {
    return (2.0 * k + (k + d_E) * (k + d_E - d_L) / b_E) / L_bar;
}

double StabilityThresholds::D(double k) const {
    if (!D_available()) throw std::domain_error("D(k) is undefined when d_E = 0");
    return ((k + d_E) / (b_E * d_E)) * (k * (b_E - d_L) - d_E * d_L) / L_bar;
}

StabilityThresholds thresholds(const ReducedParams& p, double L_bar) {
    if (!(p.b_E > p.d_L + p.d_E)) throw std::invalid_argument("thresholds: requires b_E > d_L + d_E");
    if (!(L_bar > 0.0)) throw std::invalid_argument("thresholds: L_bar must be > 0");
    const double d = p.d_E;
    const double s = p.b_E - d - p.d_L;
    const double m = p.b_E + 2.0 * d + p.d_L;
    const double root = std::sqrt(4.0 * d * d * d * s + d * d * m * m);
    StabilityThresholds t{};
    t.b_E = p.b_E;
    t.d_E = d;
    t.d_L = p.d_L;
    t.L_bar = L_bar;
    t.k_plus = (d * m + root) / (2.0 * s);
    t.k_minus = (d * m - root) / (2.0 * s);
    t.a_crit = 2.0 * t.k_plus / std::numbers::pi;
    return t;
}

UniquenessVerdict uniqueness_sufficient(const ReducedParams& p, const HatchFunction& h) {
    p.validate();
    if (h.is_step()) throw std::invalid_argument("uniqueness_sufficient: step function has no second derivative");
    if (p.d_E == 0.0) return {true, "immortal-eggs"};
    const double excess = p.b_E - p.d_L;
    if (excess <= 0.0) return {true, "no-positive-state"};
    const double hi = excess / p.c;
    const std::size_t n = 2048;

    bool concave = true;
    bool slope = true;
    for (std::size_t i = 1; i <= n; ++i) {
        const double L = hi * static_cast<double>(i) / static_cast<double>(n + 1);
        if (!(h.second_derivative(L) < 0.0)) concave = false;
        const double gap = excess - p.c * L;
        if (!(h.derivative(L) < p.d_E * p.c * p.b_E / (gap * gap))) slope = false;
        if (!concave && !slope) break;
    }
    if (concave) return {true, "concave-h"};
    if (slope) return {true, "slope-bound"};
    return {false, "inconclusive"};
}

std::vector<std::complex<double>> eigenvalues(std::span<const double> row_major, std::size_t n) {
    if (row_major.size() != n * n) throw std::invalid_argument("eigenvalues: matrix size mismatch");
    const auto dim = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = row_major[static_cast<std::size_t>(i * dim + j)];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenvalue computation failed");
    std::vector<std::complex<double>> out(n);
    for (Eigen::Index i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return out;
}

MetzlerCheck metzler_stability_4d(const StageParams& p, const HatchFunction& h, const State4& eq) {
    p.validate();
    require_differentiable(h, "metzler_stability_4d");
    const auto [E, L, P, A] = eq;
    const double kp = h.derivative(L);
    if (!(kp < 0.0)) throw std::invalid_argument("test applies only to decreasing h");

    const State4 r = rhs(p, h, eq);
    const double k = h(L);
    const std::array<double, 4> scale = {
        p.beta_E * A + E * (k + p.delta_E), E * k + L * (p.c * L + p.delta_L + p.tau_L),
        p.tau_L * L + (p.delta_P + p.tau_P) * P, p.tau_P * P + p.delta_A * A};
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(r[i]) > 1e-8 * std::max(scale[i], 1e-300)) {
            throw std::invalid_argument("metzler_stability_4d: point is not an equilibrium");
        }
    }

    MetzlerCheck out{};
    const double lhs = p.delta_A * (p.delta_P + p.tau_P) *
                       ((p.delta_E + k) * (-kp * E + p.tau_L + p.delta_L + 2.0 * p.c * L) + E * k * kp);
    const double rhs_v = p.beta_E * p.tau_L * p.tau_P * k;
    out.inequality_margin = lhs - rhs_v;
    out.max_real_eigenvalue = -std::numeric_limits<double>::infinity();
    for (const auto& ev : eigenvalues(jacobian(p, h, eq)))
        out.max_real_eigenvalue = std::max(out.max_real_eigenvalue, ev.real());
    out.stable = out.inequality_margin > 0.0 && out.max_real_eigenvalue < 0.0;
    return out;
}

}  // namespace hatchcycle
