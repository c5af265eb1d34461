#include "hatchcycle/slowfast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hatchcycle/errors.hpp"
#include "hatchcycle/numeric.hpp"

namespace hatchcycle {

std::array<double, 2> ScaledSystem::rhs_uv(double u, double v) const {
    const double hu = h(eta * u);
    const double du = (hu * v / eta - d_L * eps * u - c_eps * eta * eps * u * u) / eps;
    const double dv = eps * eta * b_E_eps * u - (d_E + hu) * v;
    return {du, dv};
}

std::array<double, 2> ScaledSystem::equilibrium() const {
    return {(h(L_bar) - eps * d_L * L_bar) / L_bar, 1.0};
}

ScaledSystem scaled_system(double eps, const HatchFunction& h, double L_bar, double d_E, double d_L) {
    if (!(eps > 0.0) || !(L_bar > 0.0) || !(d_E >= 0.0) || !(d_L > 0.0)) {
        throw std::invalid_argument("scaled_system: eps, L_bar, d_L must be > 0 and d_E >= 0");
    }
    const double k = h(L_bar);
    const double denom = k - eps * d_L * L_bar;
    if (!(denom > 0.0)) throw std::invalid_argument("eps too large for scaling");
    const double eta = L_bar * L_bar / denom;
    return {eps, eta, (k + d_E) / (eps * L_bar), 1.0 / (eps * eta), d_E, d_L, L_bar, h};
}

LimitPair::LimitPair(HatchFunction h, double L_bar, double d_E)
    : h_(std::move(h)), eta0_(0.0), xi_(0.0), d_E_(d_E), L_scale_(L_bar) {
    if (!(L_bar > 0.0) || !(d_E >= 0.0)) throw std::invalid_argument("LimitPair: L_bar > 0 and d_E >= 0 required");
    const double k = h_(L_bar);
    eta0_ = L_bar * L_bar / k;
    xi_ = (k + d_E) / L_bar;
}

LimitPair::LimitPair(HatchFunction h, double eta0, double xi, double d_E, double L_scale)
    : h_(std::move(h)), eta0_(eta0), xi_(xi), d_E_(d_E), L_scale_(L_scale) {
    if (!(eta0 > 0.0) || !(xi > 0.0) || !(d_E >= 0.0) || !(L_scale > 0.0)) {
        throw std::invalid_argument("LimitPair: eta0, xi, L_scale must be > 0 and d_E >= 0");
    }
}

double LimitPair::f(double u, double v) const { return eta0_ * xi_ * u - (d_E_ + h_(eta0_ * u)) * v; }

double LimitPair::g(double u, double v) const { return h_(eta0_ * u) * v / eta0_ - u * u; }

double LimitPair::phi(double u) const { return eta0_ * u * u / h_(eta0_ * u); }

double LimitPair::dphi(double u) const {
    const double x = eta0_ * u;
    const double hx = h_(x);
    const double dh = h_.is_step() ? 0.0 : h_.derivative(x);
    return eta0_ * (2.0 * u * hx - u * u * eta0_ * dh) / (hx * hx);
}

std::optional<PhiExtrema> phi_extrema(const LimitPair& pair) {
    const HatchFunction& h = pair.h();
    if (h.is_step()) throw std::invalid_argument("phi_extrema: step functions are handled by step_limit");
    const double eta0 = pair.eta0();

    if (const auto* hill = h.as<Hill>()) {
        const double p = hill->p;
        if (hill->a <= 0.0) return std::nullopt;
        const double rho = hill->h_m / hill->a;
        if (!(p > 2.0) || !(rho < (p - 2.0) * (p - 2.0) / (8.0 * p))) return std::nullopt;
        const double root = std::sqrt((p - 2.0) * (p - 2.0) - 8.0 * p * rho);
        const double q_minus = p - 2.0 - 4.0 * rho - root;
        const double q_plus = p - 2.0 - 4.0 * rho + root;
        const double x_M = hill->lambda * std::pow(q_minus / (4.0 * (1.0 + rho)), 1.0 / p);
        const double x_m = hill->lambda * std::pow(q_plus / (4.0 * (1.0 + rho)), 1.0 / p);
        return PhiExtrema{x_M / eta0, x_m / eta0};
    }

    const auto crit = [&](double x) { return x * h.derivative(x) - 2.0 * h(x); };
    const double x_hi = 20.0 * pair.L_scale();
    const auto roots = numeric::scan_roots(crit, x_hi * 1e-9, x_hi, 4096);
    // phi' changes sign from + to - at a local max, i.e. crit goes - to +.
    for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
        const double x_M = roots[i];
        const double x_m = roots[i + 1];
        const double probe = 0.5 * (x_M + x_m);
        if (crit(probe) > 0.0 && x_m > x_M) return PhiExtrema{x_M / eta0, x_m / eta0};
    }
    return std::nullopt;
}

namespace {

void check_branch_sign(const LimitPair& pair, double lo, double hi, double sign) {
    for (double u : numeric::linspace(lo, hi, 257)) {
        if (!(sign * pair.f(u, pair.phi(u)) > 0.0)) {
            throw NumericalError("limit cycle does not exist: equilibrium on stable branch");
        }
    }
}

}  // namespace

SlowFastCycle build_cycle(const LimitPair& pair) {
    require_differentiable(pair.h(), "build_cycle");
    const auto ext = phi_extrema(pair);
    if (!ext) throw NumericalError("no relaxation cycle: phi has no interior extrema");

    SlowFastCycle cy{};
    cy.eta0 = pair.eta0();
    cy.xi = pair.xi();
    cy.u_M = ext->u_M;
    cy.u_m = ext->u_m;
    cy.phi_M = pair.phi(cy.u_M);
    cy.phi_m = pair.phi(cy.u_m);
    if (!(cy.phi_M > cy.phi_m)) throw NumericalError("no relaxation cycle: phi extrema are not separated");

    const auto below = [&](double u) { return pair.phi(u) - cy.phi_m; };
    cy.u_m0 = numeric::bisect(below, 0.0, cy.u_M, 1e-14);
    double hi = 2.0 * cy.u_m;
    int guard = 0;
    while (pair.phi(hi) <= cy.phi_M) {
        hi *= 2.0;
        if (++guard > 200) throw NumericalError("build_cycle: phi does not grow without bound");
    }
    const auto above = [&](double u) { return pair.phi(u) - cy.phi_M; };
    cy.u_M0 = numeric::bisect(above, cy.u_m, hi, 1e-14);
    cy.amplitude_v = cy.phi_M - cy.phi_m;
    cy.amplitude_u = cy.u_M0 - cy.u_m0;

    check_branch_sign(pair, cy.u_m0, cy.u_M, 1.0);
    check_branch_sign(pair, cy.u_m, cy.u_M0, -1.0);

    const auto integrand = [&](double u) { return pair.dphi(u) / pair.f(u, pair.phi(u)); };
    const double rough = numeric::integrate(integrand, cy.u_m0, cy.u_M, 1e-4).value +
                         numeric::integrate(integrand, cy.u_M0, cy.u_m, 1e-4).value;
    const double tol = 1e-8 * std::max(std::abs(rough), 1e-300);
    cy.tau = numeric::integrate(integrand, cy.u_m0, cy.u_M, tol).value +
             numeric::integrate(integrand, cy.u_M0, cy.u_m, tol).value;
    if (!(cy.tau > 0.0)) throw NumericalError("build_cycle: nonpositive period");
    return cy;
}

SlowFastCycle build_cycle(const HatchFunction& h, double L_bar, double d_E) {
    return build_cycle(LimitPair(h, L_bar, d_E));
}

double hill_amplitude(double rho, double alpha, double p) {
    if (!(p > 2.0) || !(rho > 0.0) || !(rho < (p - 2.0) * (p - 2.0) / (8.0 * p)) || !(alpha > 0.0)) {
        throw std::invalid_argument("hill_amplitude: requires p > 2 and 0 < rho < (p-2)^2/(8p)");
    }
    const double root = std::sqrt((p - 2.0) * (p - 2.0) - 8.0 * p * rho);
    const double ap = std::pow(alpha, p);
    const auto level = [&](double q) {
        const double s = q / (4.0 * (1.0 + rho));
        return std::pow(s, 2.0 / p) / (rho + s / (1.0 + s));
    };
    const double q_minus = p - 2.0 - 4.0 * rho - root;
    const double q_plus = p - 2.0 - 4.0 * rho + root;
    return alpha * alpha * (rho + 1.0 / (1.0 + ap)) * (level(q_minus) - level(q_plus));
}

StepLimit step_limit(double h_m, double a, double alpha, double L_bar, double d_E) {
    if (d_E != 0.0) throw std::invalid_argument("step-limit formula outside validity domain: d_E must be 0");
    if (alpha == 1.0) throw std::invalid_argument("step-limit formula outside validity domain: alpha = 1");
    if (!(h_m > 0.0) || !(a > 0.0) || !(alpha > 0.0) || !(L_bar > 0.0)) {
        throw std::invalid_argument("step_limit: h_m, a, alpha, L_bar must be > 0");
    }
    const double rho = h_m / a;
    const double w = h_m + (alpha < 1.0 ? a : 0.0);
    const double s_lo = std::sqrt(rho / (1.0 + rho));
    const double s_hi = std::sqrt((1.0 + rho) / rho);
    StepLimit out{};
    out.A_u = alpha / L_bar * w * (s_hi - s_lo);
    out.A_v = alpha * alpha * w / (rho * (h_m + a));

    const double base = h_m + 0.5 * a;
    const double x = alpha * L_bar;
    const double n1 = base - x;
    const double d1 = base - x * s_lo;
    const double n2 = base - x * s_hi;
    const double r1 = n1 / d1;
    const double r2 = n2 / n1;
    if (!(r1 > 0.0) || !(r2 > 0.0) || !std::isfinite(r1) || !std::isfinite(r2)) {
        throw std::invalid_argument("step-limit formula outside validity domain");
    }
    out.tau = 2.0 / h_m * std::log(r1) + 2.0 / (h_m + a) * std::log(r2);
    return out;
}

std::array<double, 2> project_pi(double u0, double v0, const SlowFastCycle& cycle, const LimitPair& pair) {
    if (!(u0 >= 0.0) || !(v0 >= 0.0)) throw std::invalid_argument("project_pi: state must be nonnegative");
    const double scale = std::max(std::abs(cycle.phi_m), 1e-300);
    if (std::abs(v0 - cycle.phi_m) <= 1e-12 * scale && u0 > cycle.u_m0) return {cycle.u_m0, cycle.phi_m};

    const double gap = v0 - pair.phi(u0);
    if (std::abs(gap) <= 1e-14 * std::max(std::abs(v0), 1e-300)) {
        throw std::invalid_argument("projection undefined without rate quantification");
    }
    const auto F = [&](double u) { return pair.phi(u) - v0; };
    const double du = std::max(cycle.u_M0, u0) / 8192.0;
    if (gap > 0.0) {
        // g > 0: larvae grow until phi(u) reaches v0.
        double a = u0;
        for (int i = 0; i < 10'000'000; ++i) {
            const double b = a + du;
            if (F(b) >= 0.0) return {numeric::bisect(F, a, b, 1e-14), v0};
            a = b;
        }
        throw NumericalError("project_pi: no crossing found");
    }
    double b = u0;
    while (b > 0.0) {
        const double a = std::max(0.0, b - du);
        if (F(a) <= 0.0) return {numeric::bisect(F, a, b, 1e-14), v0};
        b = a;
    }
    return {0.0, v0};
}

std::vector<std::array<double, 2>> cycle_polyline(const SlowFastCycle& cy, const LimitPair& pair, std::size_t n) {
    std::vector<std::array<double, 2>> pts;
    pts.reserve(4 * n);
    for (double u : numeric::linspace(cy.u_m0, cy.u_M, n)) pts.push_back({u, pair.phi(u)});
    for (double u : numeric::linspace(cy.u_M, cy.u_M0, n)) pts.push_back({u, cy.phi_M});
    for (double u : numeric::linspace(cy.u_M0, cy.u_m, n)) pts.push_back({u, pair.phi(u)});
    for (double u : numeric::linspace(cy.u_m, cy.u_m0, n)) pts.push_back({u, cy.phi_m});
    return pts;
}

namespace {

double point_segment(const std::array<double, 2>& p, const std::array<double, 2>& a, const std::array<double, 2>& b) {
    const double dx = b[0] - a[0];
    const double dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2, 0.0, 1.0);
    const double ex = a[0] + t * dx - p[0];
    const double ey = a[1] + t * dy - p[1];
    return std::sqrt(ex * ex + ey * ey);
}

double directed(const std::vector<std::array<double, 2>>& from, const std::vector<std::array<double, 2>>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        if (to.size() == 1) best = point_segment(p, to[0], to[0]);
        for (std::size_t i = 0; i + 1 < to.size(); ++i) best = std::min(best, point_segment(p, to[i], to[i + 1]));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<std::array<double, 2>>& a, const std::vector<std::array<double, 2>>& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty polyline");
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace hatchcycle
