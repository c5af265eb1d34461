#include "hatchcycle/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hatchcycle/numeric.hpp"

namespace hatchcycle {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void StageParams::validate() const {
    require(positive(beta_E), "beta_E must be finite and > 0");
    require(std::isfinite(delta_E) && delta_E >= 0.0, "delta_E must be finite and >= 0");
    require(positive(delta_L), "delta_L must be finite and > 0");
    require(positive(delta_P), "delta_P must be finite and > 0");
    require(positive(delta_A), "delta_A must be finite and > 0");
    require(positive(tau_L), "tau_L must be finite and > 0");
    require(positive(tau_P), "tau_P must be finite and > 0");
    require(positive(c), "c must be finite and > 0");
}

void ReducedParams::validate() const {
    require(positive(b_E), "b_E must be finite and > 0");
    require(std::isfinite(d_E) && d_E >= 0.0, "d_E must be finite and >= 0");
    require(positive(d_L), "d_L must be finite and > 0");
    require(positive(c), "c must be finite and > 0");
}

ReducedParams reduce_stage_params(const StageParams& p) {
    p.validate();
    return {p.beta_E * p.adult_recruitment() / p.delta_A, p.delta_E, p.delta_L + p.tau_L, p.c};
}

State2 rhs(const ReducedParams& p, const HatchFunction& h, const State2& x) {
    const auto [E, L] = x;
    const double hL = h(L);
    return {p.b_E * L - p.d_E * E - hL * E, hL * E - p.d_L * L - p.c * L * L};
}

State3 rhs(const StageParams& p, const HatchFunction& h, const State3& x) {
    const auto [E, L, A] = x;
    const double hL = h(L);
    return {p.beta_E * A - p.delta_E * E - hL * E,
            hL * E - p.delta_L * L - p.c * L * L - p.tau_L * L,
            p.adult_recruitment() * L - p.delta_A * A};
}

State4 rhs(const StageParams& p, const HatchFunction& h, const State4& x) {
    const auto [E, L, P, A] = x;
    const double hL = h(L);
    return {p.beta_E * A - E * (hL + p.delta_E),
            E * hL - L * (p.c * L + p.delta_L + p.tau_L),
            p.tau_L * L - (p.delta_P + p.tau_P) * P,
            p.tau_P * P - p.delta_A * A};
}

Matrix<2> jacobian(const ReducedParams& p, const HatchFunction& h, const State2& x) {
    require_differentiable(h, "jacobian");
    const auto [E, L] = x;
    const double hL = h(L);
    const double dh = h.derivative(L);
    return {{{-p.d_E - hL, p.b_E - dh * E}, {hL, dh * E - p.d_L - 2.0 * p.c * L}}};
}

Matrix<3> jacobian(const StageParams& p, const HatchFunction& h, const State3& x) {
    require_differentiable(h, "jacobian");
    const auto [E, L, A] = x;
    (void)A;
    const double hL = h(L);
    const double dh = h.derivative(L);
    return {{{-p.delta_E - hL, -dh * E, p.beta_E},
             {hL, dh * E - p.delta_L - p.tau_L - 2.0 * p.c * L, 0.0},
             {0.0, p.adult_recruitment(), -p.delta_A}}};
}

Matrix<4> jacobian(const StageParams& p, const HatchFunction& h, const State4& x) {
    require_differentiable(h, "jacobian");
    const auto [E, L, P, A] = x;
    (void)P;
    (void)A;
    const double hL = h(L);
    const double dh = h.derivative(L);
    return {{{-p.delta_E - hL, -dh * E, 0.0, p.beta_E},
             {hL, dh * E - p.delta_L - p.tau_L - 2.0 * p.c * L, 0.0, 0.0},
             {0.0, p.tau_L, -(p.delta_P + p.tau_P), 0.0},
             {0.0, 0.0, p.tau_P, -p.delta_A}}};
}

System::System(ReducedParams p, HatchFunction h) : params_(p), h_(std::move(h)), dimension_(2) {
    p.validate();
}

System::System(StageParams p, HatchFunction h, int dimension)
    : params_(p), h_(std::move(h)), dimension_(dimension) {
    p.validate();
    require(dimension == 3 || dimension == 4, "stage-structured system must have dimension 3 or 4");
}

void System::operator()(std::span<const double> x, std::span<double> dxdt) const {
    const auto n = static_cast<std::size_t>(dimension_);
    if (x.size() != n || dxdt.size() != n) {
        throw std::invalid_argument("state dimension " + std::to_string(x.size()) +
                                    " does not match system dimension " + std::to_string(n));
    }
    if (dimension_ == 2) {
        const auto d = rhs(std::get<ReducedParams>(params_), h_, State2{x[0], x[1]});
        dxdt[0] = d[0];
        dxdt[1] = d[1];
    } else if (dimension_ == 3) {
        const auto d = rhs(std::get<StageParams>(params_), h_, State3{x[0], x[1], x[2]});
        for (std::size_t i = 0; i < 3; ++i) dxdt[i] = d[i];
    } else {
        const auto d = rhs(std::get<StageParams>(params_), h_, State4{x[0], x[1], x[2], x[3]});
        for (std::size_t i = 0; i < 4; ++i) dxdt[i] = d[i];
    }
}

AssumptionReport check_assumptions(const ReducedParams& p, const HatchFunction& h) {
    p.validate();
    AssumptionReport r{};
    const double h0 = h(0.0);
    const double excess = p.b_E - p.d_L;

    r.hyp_h_ok = h.is_smooth() && std::isfinite(h.supremum());
    if (r.hyp_h_ok) {
        const double span = excess > 0 ? 2.0 * excess / p.c : 1.0;
        for (double L : numeric::linspace(0.0, span, 1024)) {
            if (!(h(L) > 0.0)) {
                r.hyp_h_ok = false;
                break;
            }
        }
    }
    r.hyp_naturelle_ok = p.d_E * p.d_L < h0 * excess;
    r.hyp_params_ok = p.b_E > p.d_L + p.d_E;
    r.Q0 = p.b_E * h0 / (p.d_L * (p.d_E + h0));
    r.U_M = (p.b_E + p.d_E - p.d_L) * (p.b_E + p.d_E - p.d_L) / (4.0 * p.c);
    r.K = p.d_E > 0 ? r.U_M / p.d_E : std::numeric_limits<double>::infinity();

    if (excess > 0) {
        const auto kappa = [&](double x) { return p.c * x + p.d_E * p.b_E / (p.d_E + h(x)); };
        const auto best = numeric::grid_then_golden(kappa, 0.0, excess / p.c, 2048);
        r.sufcond_min = best.value;
        r.sufcond_ok = best.value <= excess;
    } else {
        r.sufcond_min = std::numeric_limits<double>::quiet_NaN();
        r.sufcond_ok = false;
    }
    return r;
}

State4 lift_equilibrium_4d(const StageParams& p, double E_bar, double L_bar) {
    const double P = p.tau_L * L_bar / (p.delta_P + p.tau_P);
    return {E_bar, L_bar, P, p.tau_P * P / p.delta_A};
}

}  // namespace hatchcycle
