#include "hatchcycle/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hatchcycle/errors.hpp"

namespace hatchcycle {

std::vector<double> Trajectory::component(std::size_t j) const {
    if (j >= dimension) throw std::out_of_range("component index out of range");
    std::vector<double> out(size());
    for (std::size_t i = 0; i < size(); ++i) out[i] = data[i * dimension + j];
    return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension coefficients.
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

class Stepper {
public:
    Stepper(const RhsFn& f, std::size_t n) : f_(f), n_(n) {
        for (auto* v : {&k1, &k2, &k3, &k4, &k5, &k6, &k7, &tmp, &y1, &err, &r1, &r2, &r3, &r4, &r5})
            v->resize(n);
    }

    void eval(const std::vector<double>& x, std::vector<double>& out) const { f_(x, out); }

    // One trial step from (t, y) with k1 = f(t, y) already set. Fills y1, k7, err.
    void trial(const std::vector<double>& y, double h) {
        for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        eval(tmp, k2);
        for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        eval(tmp, k3);
        for (std::size_t i = 0; i < n_; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        eval(tmp, k4);
        for (std::size_t i = 0; i < n_; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        eval(tmp, k5);
        for (std::size_t i = 0; i < n_; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        eval(tmp, k6);
        for (std::size_t i = 0; i < n_; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        eval(y1, k7);
        for (std::size_t i = 0; i < n_; ++i)
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }

    void prepare_dense(const std::vector<double>& y, double h) {
        for (std::size_t i = 0; i < n_; ++i) {
            const double ydiff = y1[i] - y[i];
            const double bspl = h * k1[i] - ydiff;
            r1[i] = y[i];
            r2[i] = ydiff;
            r3[i] = bspl;
            r4[i] = ydiff - h * k7[i] - bspl;
            r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        }
    }

    void dense(double theta, double* out) const {
        const double t1 = 1.0 - theta;
        for (std::size_t i = 0; i < n_; ++i)
            out[i] = r1[i] + theta * (r2[i] + t1 * (r3[i] + theta * (r4[i] + t1 * r5[i])));
    }

    std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, y1, err;
    std::vector<double> r1, r2, r3, r4, r5;

private:
    const RhsFn& f_;
    std::size_t n_;
};

double error_norm(const std::vector<double>& y0, const std::vector<double>& y1, const std::vector<double>& err,
                  double rtol, double atol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y0.size(); ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        const double r = err[i] / sc;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(y0.size()));
}

double initial_step(Stepper& s, const std::vector<double>& y, double t0, double t1, double rtol, double atol) {
    const std::size_t n = y.size();
    double d0 = 0.0, dd1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::abs(y[i]);
        d0 += (y[i] / sc) * (y[i] / sc);
        dd1 += (s.k1[i] / sc) * (s.k1[i] / sc);
    }
    d0 = std::sqrt(d0 / static_cast<double>(n));
    dd1 = std::sqrt(dd1 / static_cast<double>(n));
    double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
    h0 = std::min(h0, t1 - t0);
    for (std::size_t i = 0; i < n; ++i) s.tmp[i] = y[i] + h0 * s.k1[i];
    std::vector<double> f1(n);
    s.eval(s.tmp, f1);
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::abs(y[i]);
        d2 += ((f1[i] - s.k1[i]) / sc) * ((f1[i] - s.k1[i]) / sc);
    }
    d2 = std::sqrt(d2 / static_cast<double>(n)) / h0;
    const double m = std::max(dd1, d2);
    const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 1.0 / 5.0);
    return std::min({100.0 * h0, h1, t1 - t0});
}

}  // namespace

Trajectory integrate(const RhsFn& f, std::vector<double> x0, double t0, double t1, const IntegratorOptions& opt) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("integrate: empty state");
    if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
        throw std::invalid_argument("integrate: t_span must be finite and increasing");
    }
    if (opt.fixed_step <= 0.0) {
        if (!(opt.rtol >= 1e-12 && opt.rtol <= 1e-3)) throw std::invalid_argument("integrate: rtol must lie in [1e-12, 1e-3]");
        if (!(opt.atol > 0.0)) throw std::invalid_argument("integrate: atol must be > 0");
    }
    for (double v : x0)
        if (!std::isfinite(v)) throw std::invalid_argument("integrate: non-finite initial state");

    Trajectory tr;
    tr.dimension = n;
    tr.rtol = opt.rtol;
    tr.atol = opt.atol;
    const auto record = [&](double t, const double* y) {
        tr.times.push_back(t);
        tr.data.insert(tr.data.end(), y, y + n);
    };

    Stepper s(f, n);
    std::vector<double> y = std::move(x0);
    double t = t0;
    record(t, y.data());
    s.eval(y, s.k1);

    const bool adaptive = opt.fixed_step <= 0.0;
    const double max_step = opt.max_step > 0.0 ? opt.max_step : (t1 - t0);
    double h = adaptive ? (opt.initial_step > 0.0 ? opt.initial_step : initial_step(s, y, t0, t1, opt.rtol, opt.atol))
                        : opt.fixed_step;
    h = std::min(h, max_step);

    const double dt_out = opt.output_step;
    std::size_t next_out = 1;
    std::vector<double> buf(n);
    const double neg_floor = -10.0 * opt.atol;

    while (t < t1) {
        if (tr.accepted_steps + tr.rejected_steps >= opt.max_steps) {
            throw NumericalError("integrate: step budget exhausted");
        }
        const bool last = t + h >= t1 || t1 - (t + h) < 1e-12 * std::abs(t1);
        const double step = last ? t1 - t : h;
        if (adaptive && step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
            throw NumericalError("stiffness or singularity encountered");
        }
        s.trial(y, step);

        bool ok = true;
        for (double v : s.y1)
            if (!std::isfinite(v)) ok = false;
        if (ok && opt.nonnegative) {
            for (double v : s.y1)
                if (v < neg_floor) ok = false;
        }
        double err = 0.0;
        if (ok && adaptive) err = error_norm(y, s.y1, s.err, opt.rtol, opt.atol);

        if (!ok || (adaptive && err > 1.0)) {
            if (!adaptive) throw NumericalError("integrate: fixed step produced an invalid state");
            ++tr.rejected_steps;
            h = ok ? step * std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.5 * step;
            continue;
        }

        ++tr.accepted_steps;
        const double t_new = last ? t1 : t + step;
        if (dt_out > 0.0) {
            s.prepare_dense(y, step);
            while (true) {
                const double to = t0 + dt_out * static_cast<double>(next_out);
                if (to > t_new || to >= t1) break;
                s.dense((to - t) / step, buf.data());
                record(to, buf.data());
                ++next_out;
            }
        }
        y.swap(s.y1);
        t = t_new;
        std::swap(s.k1, s.k7);
        if (dt_out <= 0.0 || t == t1) {
            if (tr.times.back() < t) record(t, y.data());
        }
        if (adaptive) {
            const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
            h = std::min(step * fac, max_step);
        }
    }
    return tr;
}

Trajectory integrate(const System& sys, std::vector<double> x0, double t0, double t1, IntegratorOptions opt) {
    opt.nonnegative = true;
    if (x0.size() != static_cast<std::size_t>(sys.dimension())) {
        throw std::invalid_argument("integrate: initial state does not match system dimension");
    }
    return integrate([&sys](std::span<const double> x, std::span<double> d) { sys(x, d); }, std::move(x0), t0,
                     t1, opt);
}

OscillationMetrics measure_oscillation(const Trajectory& traj, std::size_t variable_index, double L_ref,
                                       double transient_fraction) {
    if (!(transient_fraction >= 0.0 && transient_fraction < 1.0)) {
        throw std::invalid_argument("measure_oscillation: transient_fraction must lie in [0, 1)");
    }
    if (!(L_ref > 0.0)) throw std::invalid_argument("measure_oscillation: L_ref must be > 0");
    OscillationMetrics m;
    if (traj.size() < 3) return m;
    const auto x = traj.component(variable_index);
    const auto& t = traj.times;
    const double t_cut = t.front() + transient_fraction * (t.back() - t.front());
    std::size_t start = 0;
    while (start < t.size() && t[start] < t_cut) ++start;
    if (t.size() - start < 3) return m;

    m.L_min = *std::min_element(x.begin() + static_cast<std::ptrdiff_t>(start), x.end());
    m.L_max = *std::max_element(x.begin() + static_cast<std::ptrdiff_t>(start), x.end());

    std::vector<double> peak_t;
    std::vector<double> peak_v;
    for (std::size_t i = std::max<std::size_t>(start, 1); i + 1 < x.size(); ++i) {
        if (!(x[i] > x[i - 1] && x[i] >= x[i + 1])) continue;
        // Vertex of the parabola through the three samples.
        const double ta = t[i - 1], tb = t[i], tc = t[i + 1];
        const double fa = x[i - 1], fb = x[i], fc = x[i + 1];
        const double num = (tb - ta) * (tb - ta) * (fb - fc) - (tb - tc) * (tb - tc) * (fb - fa);
        const double den = (tb - ta) * (fb - fc) - (tb - tc) * (fb - fa);
        double tp = tb;
        if (den != 0.0) tp = tb - 0.5 * num / den;
        if (!(tp >= ta && tp <= tc)) tp = tb;
        const double l0 = (tp - tb) * (tp - tc) / ((ta - tb) * (ta - tc));
        const double l1 = (tp - ta) * (tp - tc) / ((tb - ta) * (tb - tc));
        const double l2 = (tp - ta) * (tp - tb) / ((tc - ta) * (tc - tb));
        peak_t.push_back(tp);
        peak_v.push_back(fa * l0 + fb * l1 + fc * l2);
    }

    const double range = m.L_max - m.L_min;
    m.L_max = std::max(m.L_max, peak_v.empty() ? m.L_max : *std::max_element(peak_v.begin(), peak_v.end()));
    m.relative_amplitude_pct = 100.0 * std::max(m.L_max - L_ref, L_ref - m.L_min) / L_ref;
    m.relative_amplitude_pct = std::max(0.0, m.relative_amplitude_pct);
    m.peak_to_trough_pct = 100.0 * (m.L_max - m.L_min) / L_ref;
    m.n_peaks_used = peak_t.size();
    if (peak_t.size() < 2) return m;

    std::vector<double> intervals;
    for (std::size_t i = 1; i < peak_t.size(); ++i) intervals.push_back(peak_t[i] - peak_t[i - 1]);
    double mean = 0.0;
    for (double d : intervals) mean += d;
    mean /= static_cast<double>(intervals.size());
    m.period = mean;
    const auto [imin, imax] = std::minmax_element(intervals.begin(), intervals.end());
    m.interval_spread = (*imax - *imin) / mean;
    const auto [hmin, hmax] = std::minmax_element(peak_v.begin(), peak_v.end());
    m.height_spread = range > 0.0 ? (*hmax - *hmin) / range : 0.0;

    const bool visible = range > 1e-6 * std::max(std::abs(L_ref), std::abs(m.L_max));
    m.converged = peak_t.size() >= 5 && m.interval_spread < 0.01 && m.height_spread < 0.01 && visible;
    return m;
}

}  // namespace hatchcycle
