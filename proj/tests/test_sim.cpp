#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "hatchcycle/equilibria.hpp"
#include "hatchcycle/errors.hpp"
#include "hatchcycle/hopf.hpp"
#include "hatchcycle/sim.hpp"
#include "support.hpp"

using namespace hatchcycle;
using support::kLbar;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void harmonic(std::span<const double> x, std::span<double> d) {
    d[0] = x[1];
    d[1] = -x[0];
}

struct ArctanCase {
    HatchFunction h;
    ReducedParams p;
    double E_bar;
};

ArctanCase arctan_case(double a, double b) {
    HatchFunction h = Arctan{a, b, kLbar};
    const double c = calibrate_c(20.94, 1.0 / 180.0, 0.15, h, kLbar);
    const double E_bar = 20.94 * kLbar / (1.0 / 180.0 + h(kLbar));
    return {h, support::reference_params(c), E_bar};
}

OscillationMetrics simulate_case(const ArctanCase& ac, double t_end, double rtol = 1e-8) {
    IntegratorOptions opt;
    opt.rtol = rtol;
    opt.output_step = 0.02;
    const auto traj = integrate(System(ac.p, ac.h), {ac.E_bar, kLbar + 0.02}, 0.0, t_end, opt);
    return measure_oscillation(traj, 1, kLbar);
}

Trajectory shifted(const Trajectory& tr, double dt, double scale) {
    Trajectory out = tr;
    for (auto& t : out.times) t += dt;
    for (auto& v : out.data) v *= scale;
    return out;
}

}  // namespace

TEST_CASE("exponential decay") {
    IntegratorOptions opt;
    opt.rtol = 1e-8;
    opt.atol = 1e-12;
    const auto tr = integrate([](std::span<const double> x, std::span<double> d) { d[0] = -x[0]; }, {1.0}, 0.0, 1.0,
                              opt);
    CHECK(tr.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(opt.rtol));
    CHECK(tr.times.back() == 1.0);
    for (std::size_t i = 1; i < tr.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
}

TEST_CASE("harmonic oscillator period") {
    IntegratorOptions opt;
    opt.rtol = 1e-7;
    opt.atol = 1e-12;
    opt.output_step = kTwoPi / 256.0;
    const auto tr = integrate(harmonic, {1.0, 0.0}, 0.0, 20 * kTwoPi, opt);
    const auto m = measure_oscillation(tr, 0, 1.0);
    CHECK(m.converged);
    CHECK(m.n_peaks_used >= 5);
    CHECK(m.period == doctest::Approx(kTwoPi).epsilon(10 * opt.rtol));
    // Swing of 2 about L_ref = 1.
    CHECK(m.relative_amplitude_pct == doctest::Approx(200.0).epsilon(1e-4));
}

TEST_CASE("fixed-step convergence order") {
    const auto err_at = [](double h) {
        IntegratorOptions opt;
        opt.fixed_step = h;
        const auto tr = integrate(harmonic, {1.0, 0.0}, 0.0, 10.0, opt);
        return std::hypot(tr.back()[0] - std::cos(10.0), tr.back()[1] + std::sin(10.0));
    };
    const double ratio = err_at(0.1) / err_at(0.05);
    CHECK(ratio > 32.0 / 4.0);
    CHECK(ratio < 32.0 * 4.0);
}

TEST_CASE("adaptive error tracks the tolerance") {
    const auto err_at = [](double rtol) {
        IntegratorOptions opt;
        opt.rtol = rtol;
        opt.atol = rtol * 1e-3;
        const auto tr = integrate(harmonic, {1.0, 0.0}, 0.0, 10.0, opt);
        return std::hypot(tr.back()[0] - std::cos(10.0), tr.back()[1] + std::sin(10.0));
    };
    for (double rtol : {1e-5, 1e-7, 1e-9}) {
        CAPTURE(rtol);
        CHECK(err_at(rtol) < 100 * rtol);
        CHECK(err_at(rtol / 2) < err_at(rtol));
    }
}

TEST_CASE("dense output samples are evenly spaced") {
    IntegratorOptions opt;
    opt.output_step = 0.25;
    const auto tr = integrate(harmonic, {1.0, 0.0}, 0.0, 10.0, opt);
    REQUIRE(tr.size() == 41);
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr.times[i] == doctest::Approx(0.25 * i));
        CHECK(tr.state(i)[0] == doctest::Approx(std::cos(tr.times[i])).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("integrator errors") {
    IntegratorOptions bad;
    bad.rtol = 1e-2;
    CHECK_THROWS_AS(integrate(harmonic, {1.0, 0.0}, 0.0, 1.0, bad), std::invalid_argument);
    CHECK_THROWS_AS(integrate(harmonic, {1.0, 0.0}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate(harmonic, {}, 0.0, 1.0), std::invalid_argument);
    const auto blowup = [](std::span<const double> x, std::span<double> d) { d[0] = x[0] * x[0]; };
    CHECK_THROWS_WITH_AS(integrate(blowup, {1.0}, 0.0, 2.0), "stiffness or singularity encountered", NumericalError);
    const System sys(support::reference_params(), Constant{0.2});
    CHECK_THROWS_AS(integrate(sys, {1.0, 2.0, 3.0}, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("model trajectories respect the negativity floor") {
    const auto ac = arctan_case(0.5, 2.0 * b_crit(0.5, support::reference_params(), kLbar));
    const auto tr = integrate(System(ac.p, ac.h), {ac.E_bar, kLbar + 0.02}, 0.0, 100.0);
    for (double v : tr.data) CHECK(v >= -10 * tr.atol);
}

TEST_CASE("sustained oscillation in the reference setup") {
    const auto ac = arctan_case(0.1, 2.91);
    const auto m = simulate_case(ac, 100.0);
    CHECK(m.converged);
    CHECK(m.period == doctest::Approx(5.18).epsilon(0.10));
    CHECK(m.relative_amplitude_pct == doctest::Approx(23.1).epsilon(0.15));
}

TEST_CASE("tabulated a = 0.25, b = 4.18 cell") {
    const auto ac = arctan_case(0.25, 4.18);
    const auto m = simulate_case(ac, 200.0);
    CHECK(m.converged);
    CHECK(m.period == doctest::Approx(6.96).epsilon(0.10));
    CHECK(m.relative_amplitude_pct == doctest::Approx(50.67).epsilon(0.15));
}

TEST_CASE("measured cycle is stationary and tolerance-insensitive") {
    const auto ac = arctan_case(0.1, 4.16);
    const auto base = simulate_case(ac, 300.0);
    const auto twice = simulate_case(ac, 600.0);
    REQUIRE(base.converged);
    REQUIRE(twice.converged);
    CHECK(std::abs(twice.period / base.period - 1.0) < 0.005);
    for (double rtol : {1e-6, 1e-10}) {
        const auto m = simulate_case(ac, 300.0, rtol);
        CAPTURE(rtol);
        CHECK(std::abs(m.period / base.period - 1.0) < 1e-3);
        CHECK(std::abs(m.relative_amplitude_pct / base.relative_amplitude_pct - 1.0) < 1e-3);
    }
}

TEST_CASE("measure_oscillation invariances") {
    const auto ac = arctan_case(0.25, 4.18);
    IntegratorOptions opt;
    opt.output_step = 0.02;
    const auto tr = integrate(System(ac.p, ac.h), {ac.E_bar, kLbar + 0.02}, 0.0, 150.0, opt);
    const auto m = measure_oscillation(tr, 1, kLbar);
    REQUIRE(m.converged);

    const auto moved = measure_oscillation(shifted(tr, 37.5, 1.0), 1, kLbar);
    CHECK(moved.period == doctest::Approx(m.period).epsilon(1e-9));
    CHECK(moved.relative_amplitude_pct == doctest::Approx(m.relative_amplitude_pct).epsilon(1e-12));

    const double s = 3.7;
    const auto scaled = measure_oscillation(shifted(tr, 0.0, s), 1, s * kLbar);
    CHECK(scaled.period == doctest::Approx(m.period).epsilon(1e-12));
    CHECK(scaled.relative_amplitude_pct == doctest::Approx(m.relative_amplitude_pct).epsilon(1e-12));
    CHECK(scaled.converged);
}

TEST_CASE("constant trajectory is not an oscillation") {
    const auto ac = arctan_case(0.1, 2.0);
    const auto eq = classify(ac.p, ac.h, ac.E_bar, kLbar);
    REQUIRE_FALSE(is_unstable(eq.classification));
    IntegratorOptions opt;
    opt.output_step = 0.05;
    const auto tr = integrate(System(ac.p, ac.h), {ac.E_bar, kLbar}, 0.0, 100.0, opt);
    const auto m = measure_oscillation(tr, 1, kLbar);
    CHECK_FALSE(m.converged);
    CHECK(m.relative_amplitude_pct == doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
}

TEST_CASE("too few peaks gives a partial, unconverged result") {
    IntegratorOptions opt;
    opt.output_step = 0.05;
    const auto tr = integrate(harmonic, {1.0, 0.0}, 0.0, 3 * kTwoPi, opt);
    const auto m = measure_oscillation(tr, 0, 1.0);
    CHECK_FALSE(m.converged);
    CHECK(m.n_peaks_used < 5);
    CHECK(m.L_max == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(measure_oscillation(tr, 0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(measure_oscillation(tr, 0, 0.0), std::invalid_argument);
}
