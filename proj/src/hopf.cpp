#include "hatchcycle/hopf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hatchcycle/equilibria.hpp"

namespace hatchcycle {

namespace {

constexpr double kPi = std::numbers::pi;

using Tensor2 = std::array<std::array<double, 2>, 2>;
using Tensor3 = std::array<Tensor2, 2>;

Tensor2 second_tensor(const Partials& d) { return {{{d.xx, d.xy}, {d.xy, d.yy}}}; }

Tensor3 third_tensor(const Partials& d) {
    const std::array<double, 4> by_count = {d.xxx, d.xxy, d.xyy, d.yyy};
    Tensor3 t{};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) t[i][j][k] = by_count[i + j + k];
    return t;
}

// Partials of phi(J z) at 0 given partials of phi at 0.
Partials pull_back(const Partials& d, const Matrix<2>& J) {
    const Tensor2 S = second_tensor(d);
    const Tensor3 T = third_tensor(d);
    auto s = [&](std::size_t I, std::size_t K) {
        double acc = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) acc += S[i][j] * J[i][I] * J[j][K];
        return acc;
    };
    auto t = [&](std::size_t I, std::size_t K, std::size_t M) {
        double acc = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t k = 0; k < 2; ++k) acc += T[i][j][k] * J[i][I] * J[j][K] * J[k][M];
        return acc;
    };
    return {s(0, 0), s(0, 1), s(1, 1), t(0, 0, 0), t(0, 0, 1), t(0, 1, 1), t(1, 1, 1)};
}

Partials combine(double u, const Partials& p, double v, const Partials& q) {
    return {u * p.xx + v * q.xx,   u * p.xy + v * q.xy,   u * p.yy + v * q.yy,  u * p.xxx + v * q.xxx,
            u * p.xxy + v * q.xxy, u * p.xyy + v * q.xyy, u * p.yyy + v * q.yyy};
}

Criticality criticality_of(double alpha, const Partials& F) {
    if (std::abs(alpha) <= 1e-12 * std::max(1.0, std::abs(F.xxx))) return Criticality::Degenerate;
    return alpha < 0.0 ? Criticality::Supercritical : Criticality::Subcritical;
}

}  // namespace

std::string_view to_string(Criticality c) {
    switch (c) {
        case Criticality::Supercritical: return "supercritical";
        case Criticality::Subcritical: return "subcritical";
        case Criticality::Degenerate: return "degenerate";
    }
    return "unknown";
}

HatchFunction hatch_from_k_kprime(double L_bar, double k, double k_prime) {
    if (!(k > 0.0) || !(k_prime > 0.0)) throw std::invalid_argument("hatch_from_k_kprime: k and k' must be > 0");
    const double a = 2.0 * k / kPi;
    return Arctan{a, k_prime / a, L_bar};
}

double b_crit(double a, const ReducedParams& p, double L_bar) {
    return thresholds(p, L_bar).T(a * kPi / 2.0) / a;
}

double omega_at_bifurcation(double k, const ReducedParams& p) {
    const double d = p.d_E;
    const double rad = k * k * (p.b_E - p.d_L - d) + k * (-2.0 * d * d - p.b_E * d - d * p.d_L) - d * d * d;
    if (!(k > 0.0) || !(rad > 0.0)) throw std::invalid_argument("no oscillatory bifurcation at this k");
    return std::sqrt(rad / (d + k));
}

double k_from_period(double T0, const ReducedParams& p) {
    if (!(T0 > 0.0)) throw std::invalid_argument("k_from_period: T0 must be > 0");
    const double d = p.d_E;
    const double tp = 4.0 * kPi * kPi;
    const double T2 = T0 * T0;
    const double qa = T2 * (p.b_E - p.d_L - d);
    const double qb = T2 * (-2.0 * d * d - p.b_E * d - d * p.d_L) - tp;
    const double qc = -T2 * d * d * d - tp * d;
    if (!(qa > 0.0)) throw std::invalid_argument("k_from_period: no positive root");
    if (qc == 0.0) {
        const double k = -qb / qa;
        if (!(k > 0.0)) throw std::invalid_argument("k_from_period: no positive root");
        return k;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    const double k = (-qb + std::sqrt(disc)) / (2.0 * qa);
    if (!(k > 0.0)) throw std::invalid_argument("k_from_period: no positive root");
    return k;
}

double HopfFrame::f(double x, double y) const {
    return a * b * E_bar * y - a * std::atan(b * y) * (x + E_bar);
}

double HopfFrame::g(double x, double y) const { return -f(x, y) - c * y * y; }

HopfFrame hopf_frame(double a, double b, const ReducedParams& p, double L_bar) {
    const HatchFunction h = Arctan{a, b, L_bar};
    HopfFrame fr{};
    fr.a = a;
    fr.b = b;
    fr.L_bar = L_bar;
    fr.c = calibrate_c(p.b_E, p.d_E, p.d_L, h, L_bar);
    fr.E_bar = p.b_E * L_bar / (p.d_E + h(L_bar));
    fr.A = -a * kPi / 2.0 - p.d_E;
    fr.B = p.b_E - a * b * fr.E_bar;
    fr.C = a * kPi / 2.0;
    fr.D = a * b * fr.E_bar - p.d_L - 2.0 * fr.c * L_bar;
    const double det = fr.A * fr.D - fr.B * fr.C;
    fr.omega = det > 0.0 ? std::sqrt(det) : std::numeric_limits<double>::quiet_NaN();
    const double w = fr.omega;
    const double A = fr.A;
    const double B = fr.B;
    fr.P = {{{(w + A) / (2.0 * B * w), 1.0 / (2.0 * w)}, {(w - A) / (2.0 * B * w), -1.0 / (2.0 * w)}}};
    fr.P_inv = {{{B, B}, {w - A, -A - w}}};
    return fr;
}

std::array<Partials, 2> nonlinear_partials(const HopfFrame& fr) {
    const double ab = fr.a * fr.b;
    const double cubic = 2.0 * ab * fr.b * fr.b * fr.E_bar;
    const Partials f{0.0, -ab, 0.0, 0.0, 0.0, 0.0, cubic};
    const Partials g{0.0, ab, -2.0 * fr.c, 0.0, 0.0, 0.0, -cubic};
    return {f, g};
}

std::array<Partials, 2> canonical_partials(const HopfFrame& fr) {
    const auto [f, g] = nonlinear_partials(fr);
    const Partials fp = pull_back(f, fr.P_inv);
    const Partials gp = pull_back(g, fr.P_inv);
    return {combine(fr.P[0][0], fp, fr.P[0][1], gp), combine(fr.P[1][0], fp, fr.P[1][1], gp)};
}

double alpha_from_partials(const Partials& F, const Partials& G, double omega) {
    return (F.xxx + F.xyy + G.xxy + G.yyy) / 16.0 -
           (G.xy * (G.xx + G.yy) - F.xy * (F.xx + F.yy) + F.xx * G.xx - F.yy * G.yy) / (16.0 * omega);
}

NormalForm normal_form_coefficient(double a, double b, const ReducedParams& p, double L_bar) {
    const HopfFrame fr = hopf_frame(a, b, p, L_bar);
    const double trace = fr.A + fr.D;
    if (!(fr.omega > 0.0) || std::abs(trace) >= 1e-8 * std::max(1.0, fr.omega)) {
        throw std::invalid_argument("not at bifurcation locus");
    }
    const auto [F, G] = canonical_partials(fr);
    NormalForm nf{};
    nf.omega = fr.omega;
    nf.F = F;
    nf.G = G;
    nf.alpha_N = alpha_from_partials(F, G, fr.omega);
    nf.criticality = criticality_of(nf.alpha_N, F);
    return nf;
}

NormalForm normal_form_coefficient(double a, const ReducedParams& p, double L_bar) {
    const auto t = thresholds(p, L_bar);
    if (!(a > t.a_crit)) throw std::invalid_argument("eigenvalues not complex at trace-zero locus");
    return normal_form_coefficient(a, b_crit(a, p, L_bar), p, L_bar);
}

HopfPoint bifurcation_point(double a, const ReducedParams& p, double L_bar) {
    const auto t = thresholds(p, L_bar);
    if (!(a > t.a_crit)) throw std::invalid_argument("eigenvalues not complex at trace-zero locus");
    HopfPoint hp{};
    hp.a = a;
    hp.k = a * kPi / 2.0;
    hp.b_crit = t.T(hp.k) / a;
    const HopfFrame fr = hopf_frame(a, hp.b_crit, p, L_bar);
    hp.c = fr.c;
    hp.E_bar = fr.E_bar;
    hp.omega = fr.omega;
    if (!(hp.omega > 0.0)) throw std::invalid_argument("eigenvalues not complex at trace-zero locus");
    hp.period_T0 = 2.0 * kPi / hp.omega;
    const NormalForm nf = normal_form_coefficient(a, hp.b_crit, p, L_bar);
    hp.alpha_N = nf.alpha_N;
    hp.criticality = nf.criticality;
    return hp;
}

std::optional<double> find_a_tilde(const ReducedParams& p, double L_bar, double a_lo, double a_hi,
                                   std::size_t samples) {
    const double a_crit = thresholds(p, L_bar).a_crit;
    if (!(a_lo > a_crit) || !(a_hi > a_lo) || samples < 2) {
        throw std::invalid_argument("find_a_tilde: range must lie above a_crit");
    }
    const auto alpha = [&](double a) { return normal_form_coefficient(a, p, L_bar).alpha_N; };
    const double r = std::log(a_hi / a_lo);
    double prev_a = a_lo;
    double prev_v = alpha(a_lo);
    for (std::size_t i = 1; i < samples; ++i) {
        const double a = a_lo * std::exp(r * static_cast<double>(i) / static_cast<double>(samples - 1));
        const double v = alpha(a);
        if (std::signbit(v) != std::signbit(prev_v)) {
            double lo = prev_a;
            double hi = a;
            const bool lo_neg = std::signbit(prev_v);
            for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (std::signbit(alpha(mid)) == lo_neg) lo = mid;
                else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        prev_a = a;
        prev_v = v;
    }
    return std::nullopt;
}

}  // namespace hatchcycle
