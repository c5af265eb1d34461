#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hatchcycle/equilibria.hpp"
#include "hatchcycle/io.hpp"
#include "hatchcycle/sweep.hpp"
#include "support.hpp"

using namespace hatchcycle;
using support::kLbar;

namespace {

ArctanGridSpec reference_grid() {
    ArctanGridSpec spec;
    spec.base = support::reference_params();
    spec.L_bar = kLbar;
    return spec;
}

/// Stage parameters with delta_E = 0 and beta_E chosen so that b_E = 20.94.
StageParams stage_base() {
    StageParams s{1.0, 0.0, 0.05, 0.05, 0.1, 0.1, 0.5, 1.0};
    s.beta_E = 20.94 * s.delta_A / s.adult_recruitment();
    return s;
}

class WorkersEnv {
public:
    explicit WorkersEnv(const char* value) {
        if (const char* old = std::getenv("HATCHCYCLE_WORKERS")) saved_ = old;
        if (value) ::setenv("HATCHCYCLE_WORKERS", value, 1);
        else ::unsetenv("HATCHCYCLE_WORKERS");
    }
    ~WorkersEnv() {
        if (saved_.empty()) ::unsetenv("HATCHCYCLE_WORKERS");
        else ::setenv("HATCHCYCLE_WORKERS", saved_.c_str(), 1);
    }
    WorkersEnv(const WorkersEnv&) = delete;
    WorkersEnv& operator=(const WorkersEnv&) = delete;

private:
    std::string saved_;
};

}  // namespace

TEST_CASE("default J values") {
    const auto J = default_j_values();
    CHECK(J.size() == 18);
    CHECK(std::is_sorted(J.begin(), J.end()));
    CHECK(J.front() == 0.05);
    CHECK(J.back() == 4.0);
    for (double v : {0.05, 0.5, 2.0}) CHECK(std::find(J.begin(), J.end(), v) != J.end());
}

TEST_CASE("arctan grid") {
    const auto cells = arctan_grid(reference_grid());
    REQUIRE(cells.size() == 162);
    CHECK(cells.front().a == doctest::Approx(0.1));
    CHECK(cells.back().a == doctest::Approx(0.5));
    CHECK(cells[0].b == doctest::Approx(2.91).epsilon(5e-3));
    for (std::size_t n = 0; n < cells.size(); ++n) {
        const auto& c = cells[n];
        CHECK(c.i == static_cast<int>(n / 18) + 1);
        CHECK(c.b == doctest::Approx(c.b_min * (1 + c.j)).epsilon(1e-15));
        CHECK(c.h(kLbar) == doctest::Approx(c.a * std::numbers::pi / 2).epsilon(1e-15));
    }
    CHECK(cells[0 * 18].E_bar == doctest::Approx(145.92).epsilon(5e-3));
    CHECK(cells[3 * 18].E_bar == doctest::Approx(59.59).epsilon(5e-3));
    CHECK(cells[8 * 18].E_bar == doctest::Approx(30.0).epsilon(5e-3));

    auto spec = reference_grid();
    spec.j_values.clear();
    CHECK(arctan_grid(spec).empty());
    CHECK(run_sweep(spec, SimSettings{}).empty());
}

TEST_CASE("2D Hill grid") {
    HillGridSpec spec;
    spec.iota = {0.05, 0.2};
    spec.zeta = {0.2, 0.8};
    CHECK(hill_X(spec) == doctest::Approx(0.672238).epsilon(1e-6));
    const auto cells = hill_grid(spec);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0].alpha == doctest::Approx(1.3752).epsilon(1e-4));
    for (const auto& c : cells) {
        CHECK(c.h_m > 0.0);
        CHECK(c.h(kLbar) == doctest::Approx(spec.k).epsilon(1e-12));
        ReducedParams p = spec.base2;
        p.c = c.c;
        CHECK(c.c == doctest::Approx((p.b_E - p.d_L) / kLbar));
        const auto eqs = find_steady_states(p, c.h);
        REQUIRE(eqs.size() == 2);
        CHECK(eqs[1].L_bar == doctest::Approx(kLbar).epsilon(1e-9));
        CHECK(is_unstable(eqs[1].classification));
        const auto t = thresholds(p, kLbar);
        CHECK(c.h.derivative(kLbar) > t.T(spec.k));
        CHECK(eqs[1].trace > 0.0);
    }
}

TEST_CASE("Hill grid rejects boundary and impossible cases") {
    HillGridSpec spec;
    spec.iota = {0.05};
    spec.zeta = {1.0};
    CHECK_THROWS_AS(hill_grid(spec), std::invalid_argument);
    spec.zeta = {0.5};
    spec.iota = {0.5};
    CHECK_THROWS_AS(hill_grid(spec), std::invalid_argument);
    spec.iota = {0.05};
    spec.p = 2.0;
    CHECK_THROWS_WITH_AS(hill_grid(spec), "no destabilizing Hill function exists for this (p, k)",
                         std::invalid_argument);
    HillGridSpec mortal;
    mortal.base2.d_E = 0.01;
    mortal.iota = {0.05};
    mortal.zeta = {0.5};
    CHECK_THROWS_AS(hill_grid(mortal), std::invalid_argument);
}

TEST_CASE("3D Hill grid") {
    HillGridSpec spec;
    spec.dimension = 3;
    spec.base3 = stage_base();
    CHECK(reduce_stage_params(spec.base3).b_E == doctest::Approx(20.94).epsilon(1e-14));
    spec.iota_from_X = true;
    spec.zeta = {0.1, 0.9};
    const double X = hill_X(spec);
    CHECK(X < 1.0);
    const auto cells = hill_grid(spec);
    REQUIRE(cells.size() == 2);
    for (const auto& c : cells) {
        CHECK(c.iota == doctest::Approx((1 - X) / 10));
        CHECK(c.h_m > 0.0);
        StageParams s = spec.base3;
        s.c = c.c;
        const double A = s.adult_recruitment() * kLbar / s.delta_A;
        const State3 x{c.E_bar, kLbar, A};
        const auto r = rhs(s, c.h, x);
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(r[i]) < 1e-10 * (1 + x[i]));
        double max_re = -1e300;
        for (const auto& z : eigenvalues(jacobian(s, c.h, x))) max_re = std::max(max_re, z.real());
        CHECK(max_re > 0.0);
    }
}

TEST_CASE("worker count resolution") {
    {
        WorkersEnv env(nullptr);
        CHECK(resolve_workers(3) == 3);
        CHECK(resolve_workers(0) >= 1);
    }
    {
        WorkersEnv env("5");
        CHECK(resolve_workers(2) == 5);
    }
    {
        WorkersEnv env("junk");
        CHECK(resolve_workers(2) == 2);
    }
}

TEST_CASE("sweep results do not depend on the worker count") {
    WorkersEnv env(nullptr);
    auto spec = reference_grid();
    spec.i_values = {1, 5, 9};
    spec.j_values = {0.05, 0.5, 2.0};
    SimSettings serial;
    serial.workers = 1;
    SimSettings parallel;
    parallel.workers = 4;
    const auto a = run_sweep(spec, serial);
    const auto b = run_sweep(spec, parallel);
    REQUIRE(a.size() == 9);
    REQUIRE(b.size() == 9);
    for (std::size_t n = 0; n < a.size(); ++n) {
        CHECK(a[n].record.ok);
        CHECK(a[n].record.ok == b[n].record.ok);
        CHECK(a[n].record.metrics.period == b[n].record.metrics.period);
        CHECK(a[n].record.metrics.relative_amplitude_pct == b[n].record.metrics.relative_amplitude_pct);
        CHECK(a[n].classification == b[n].classification);
    }
    std::ostringstream sa;
    std::ostringstream sb;
    io::write_sweep_csv(sa, a);
    io::write_sweep_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("a,b,c,E_bar,period_days,amplitude_pct,class\n", 0) == 0);
}

TEST_CASE("full arctan sweep: period and amplitude grow with b") {
    const auto rows = run_sweep(reference_grid(), SimSettings{});
    REQUIRE(rows.size() == 162);
    for (const auto& r : rows) {
        CAPTURE(r.cell.a);
        CAPTURE(r.cell.b);
        CHECK(r.record.ok);
        CHECK((r.classification == "UnstableFocus" || r.classification == "UnstableNode"));
    }
    for (int i = 0; i < 9; ++i) {
        for (int j = 1; j < 18; ++j) {
            const auto& prev = rows[i * 18 + j - 1].record.metrics;
            const auto& cur = rows[i * 18 + j].record.metrics;
            CAPTURE(rows[i * 18 + j].cell.a);
            CAPTURE(rows[i * 18 + j].cell.b);
            CHECK(cur.period >= prev.period * (1 - 1e-3));
            CHECK(cur.relative_amplitude_pct >= prev.relative_amplitude_pct * (1 - 1e-3));
        }
    }
}

TEST_CASE("sweep records failures instead of aborting") {
    SweepTask bad{System(support::reference_params(), Constant{0.3}), {1.0, 1.0}, 1.0, 1.0, 1};
    SimSettings s;
    s.min_days = 20;
    s.max_attempts = 1;
    const auto recs = run_tasks({bad}, s);
    REQUIRE(recs.size() == 1);
    CHECK_FALSE(recs[0].ok);
    CHECK_FALSE(recs[0].failure.empty());
}
