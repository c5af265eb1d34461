#include "hatchcycle/numeric.hpp"

#include "hatchcycle/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hatchcycle::numeric {

double bisect(const ScalarFn& f, double lo, double hi, double rel_tol, double abs_floor,
              int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw NumericalError("bisect: no sign change on bracket");
    }
    for (int it = 0; it < max_iter; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (hi - lo <= rel_tol * std::max(std::abs(mid), abs_floor)) return mid;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const ScalarFn& f, double lo, double hi, std::size_t n,
                               double rel_tol) {
    std::vector<double> roots;
    const double dx = (hi - lo) / static_cast<double>(n);
    double x0 = lo;
    double f0 = f(x0);
    if (f0 == 0.0) roots.push_back(x0);
    for (std::size_t i = 1; i <= n; ++i) {
        const double x1 = (i == n) ? hi : lo + dx * static_cast<double>(i);
        const double f1 = f(x1);
        if (f1 == 0.0) {
            roots.push_back(x1);
        } else if (f0 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
            roots.push_back(bisect(f, x0, x1, rel_tol));
        }
        x0 = x1;
        f0 = f1;
    }
    return roots;
}

Minimum golden_section(const ScalarFn& f, double lo, double hi, double tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    while (hi - lo > tol * std::max(1.0, std::abs(c) + std::abs(d))) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    const double x = 0.5 * (lo + hi);
    return {x, f(x)};
}

Minimum grid_then_golden(const ScalarFn& f, double lo, double hi, std::size_t n) {
    const auto xs = linspace(lo, hi, n);
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = f(xs[i]);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double a = xs[best == 0 ? 0 : best - 1];
    const double b = xs[std::min(best + 1, xs.size() - 1)];
    Minimum refined = golden_section(f, a, b);
    if (refined.value <= best_val) return refined;
    return {xs[best], best_val};
}

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for nodes 1, 3, 5 and 7 of the Kronrod set.
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double kronrod;
    double error;
};

Panel gk15(const ScalarFn& f, double a, double b, int& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double k = fc * kKronrodWeights[7];
    double g = fc * kGaussWeights[3];
    evals += 1;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
        const double s = f(center - dx) + f(center + dx);
        evals += 2;
        k += kKronrodWeights[static_cast<std::size_t>(i)] * s;
        if (i % 2 == 1) g += kGaussWeights[static_cast<std::size_t>(i / 2)] * s;
    }
    return {k * half, std::abs((k - g) * half)};
}

void adapt(const ScalarFn& f, double a, double b, double tol, int depth, QuadratureResult& out) {
    const Panel p = gk15(f, a, b, out.evaluations);
    if (p.error <= tol || depth <= 0 || !(std::abs(b - a) > 1e-15 * std::max(1.0, std::abs(a)))) {
        out.value += p.kronrod;
        out.error_estimate += p.error;
        return;
    }
    const double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1, out);
    adapt(f, m, b, 0.5 * tol, depth - 1, out);
}

}  // namespace

QuadratureResult integrate(const ScalarFn& f, double a, double b, double abs_tol, int max_depth) {
    QuadratureResult out;
    if (a == b) return out;
    adapt(f, a, b, abs_tol, max_depth, out);
    if (!std::isfinite(out.value)) throw NumericalError("integrate: non-finite integrand");
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> xs(n);
    if (n == 1) {
        xs[0] = lo;
        return xs;
    }
    const double dx = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) xs[i] = lo + dx * static_cast<double>(i);
    xs[n - 1] = hi;
    return xs;
}

}  // namespace hatchcycle::numeric
