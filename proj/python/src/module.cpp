#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "hatchcycle/cli.hpp"
#include "hatchcycle/equilibria.hpp"
#include "hatchcycle/errors.hpp"
#include "hatchcycle/hopf.hpp"
#include "hatchcycle/io.hpp"
#include "hatchcycle/sim.hpp"
#include "hatchcycle/slowfast.hpp"

namespace py = pybind11;
using namespace hatchcycle;

namespace {

py::tuple trajectory_arrays(const Trajectory& tr) {
    py::array_t<double> times(static_cast<py::ssize_t>(tr.size()));
    std::copy(tr.times.begin(), tr.times.end(), times.mutable_data());
    py::array_t<double> states({static_cast<py::ssize_t>(tr.size()), static_cast<py::ssize_t>(tr.dimension)});
    std::copy(tr.data.begin(), tr.data.end(), states.mutable_data());
    return py::make_tuple(times, states);
}

IntegratorOptions options(double rtol, double atol, double output_step) {
    IntegratorOptions opt;
    opt.rtol = rtol;
    opt.atol = atol;
    opt.output_step = output_step;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_hatchcycle, m) {
    m.doc() = "Egg/larva population dynamics with density-dependent hatching";

    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<HatchFunction>(m, "HatchFunction")
        .def("__call__", &HatchFunction::value, py::arg("L"))
        .def("derivative", &HatchFunction::derivative, py::arg("L"))
        .def("supremum", &HatchFunction::supremum)
        .def_property_readonly("family", [](const HatchFunction& h) { return std::string(h.family_name()); })
        .def("to_json", [](const HatchFunction& h) { return io::to_json(h).dump(); });

    m.def("arctan", [](double a, double b, double L_ref) { return HatchFunction(Arctan{a, b, L_ref}); },
          py::arg("a"), py::arg("b"), py::arg("L_ref"));
    m.def("hill", [](double h_m, double a, double lambda, double p) { return HatchFunction(Hill{h_m, a, lambda, p}); },
          py::arg("h_m"), py::arg("a"), py::arg("lambda_"), py::arg("p"));
    m.def("inverse_hill",
          [](double h_m, double a, double lambda, double p) { return HatchFunction(InverseHill{h_m, a, lambda, p}); },
          py::arg("h_m"), py::arg("a"), py::arg("lambda_"), py::arg("p"));
    m.def("step", [](double h_m, double a, double threshold) { return HatchFunction(Step{h_m, a, threshold}); },
          py::arg("h_m"), py::arg("a"), py::arg("threshold"));
    m.def("constant", [](double k) { return HatchFunction(Constant{k}); }, py::arg("k"));

    py::class_<ReducedParams>(m, "ReducedParams")
        .def(py::init([](double b_E, double d_E, double d_L, double c) {
                 ReducedParams p{b_E, d_E, d_L, c};
                 p.validate();
                 return p;
             }),
             py::arg("b_E"), py::arg("d_E"), py::arg("d_L"), py::arg("c") = 1.0)
        .def_readwrite("b_E", &ReducedParams::b_E)
        .def_readwrite("d_E", &ReducedParams::d_E)
        .def_readwrite("d_L", &ReducedParams::d_L)
        .def_readwrite("c", &ReducedParams::c);

    py::class_<StageParams>(m, "StageParams")
        .def(py::init([](double beta_E, double delta_E, double delta_L, double delta_P, double delta_A, double tau_L,
                         double tau_P, double c) {
                 StageParams p{beta_E, delta_E, delta_L, delta_P, delta_A, tau_L, tau_P, c};
                 p.validate();
                 return p;
             }),
             py::arg("beta_E"), py::arg("delta_E"), py::arg("delta_L"), py::arg("delta_P"), py::arg("delta_A"),
             py::arg("tau_L"), py::arg("tau_P"), py::arg("c"));
    m.def("reduce_stage_params", &reduce_stage_params, py::arg("params"));

    m.def("rhs", [](const ReducedParams& p, const HatchFunction& h, State2 x) { return rhs(p, h, x); },
          py::arg("params"), py::arg("h"), py::arg("x"));

    py::class_<AssumptionReport>(m, "AssumptionReport")
        .def_readonly("hyp_h_ok", &AssumptionReport::hyp_h_ok)
        .def_readonly("hyp_naturelle_ok", &AssumptionReport::hyp_naturelle_ok)
        .def_readonly("hyp_params_ok", &AssumptionReport::hyp_params_ok)
        .def_readonly("sufcond_ok", &AssumptionReport::sufcond_ok)
        .def_readonly("Q0", &AssumptionReport::Q0)
        .def_readonly("K", &AssumptionReport::K)
        .def_readonly("U_M", &AssumptionReport::U_M);
    m.def("check_assumptions", &check_assumptions, py::arg("params"), py::arg("h"));

    py::class_<Equilibrium>(m, "Equilibrium")
        .def_readonly("E_bar", &Equilibrium::E_bar)
        .def_readonly("L_bar", &Equilibrium::L_bar)
        .def_readonly("trace", &Equilibrium::trace)
        .def_readonly("det", &Equilibrium::det)
        .def_property_readonly("classification",
                               [](const Equilibrium& e) { return std::string(to_string(e.classification)); });
    m.def("find_steady_states", [](const ReducedParams& p, const HatchFunction& h) { return find_steady_states(p, h); },
          py::arg("params"), py::arg("h"));
    m.def("calibrate_c", &calibrate_c, py::arg("b_E"), py::arg("d_E"), py::arg("d_L"), py::arg("h"), py::arg("L_bar"));

    py::class_<StabilityThresholds>(m, "StabilityThresholds")
        .def_readonly("k_plus", &StabilityThresholds::k_plus)
        .def_readonly("k_minus", &StabilityThresholds::k_minus)
        .def_readonly("a_crit", &StabilityThresholds::a_crit)
        .def("T", &StabilityThresholds::T, py::arg("k"))
        .def("D", &StabilityThresholds::D, py::arg("k"));
    m.def("thresholds", &thresholds, py::arg("params"), py::arg("L_bar"));

    py::class_<HopfPoint>(m, "HopfPoint")
        .def_readonly("a", &HopfPoint::a)
        .def_readonly("b_crit", &HopfPoint::b_crit)
        .def_readonly("c", &HopfPoint::c)
        .def_readonly("E_bar", &HopfPoint::E_bar)
        .def_readonly("omega", &HopfPoint::omega)
        .def_readonly("period_T0", &HopfPoint::period_T0)
        .def_readonly("alpha_N", &HopfPoint::alpha_N)
        .def_property_readonly("criticality", [](const HopfPoint& hp) { return std::string(to_string(hp.criticality)); });
    m.def("bifurcation_point", &bifurcation_point, py::arg("a"), py::arg("params"), py::arg("L_bar"));
    m.def("omega_at_bifurcation", &omega_at_bifurcation, py::arg("k"), py::arg("params"));

    m.def(
        "integrate",
        [](const ReducedParams& p, const HatchFunction& h, std::vector<double> x0, double t0, double t1, double rtol,
           double atol, double output_step) {
            return trajectory_arrays(integrate(System(p, h), std::move(x0), t0, t1, options(rtol, atol, output_step)));
        },
        py::arg("params"), py::arg("h"), py::arg("x0"), py::arg("t0"), py::arg("t1"), py::arg("rtol") = 1e-8,
        py::arg("atol") = 1e-10, py::arg("output_step") = 0.0);
    m.def(
        "integrate_stage",
        [](const StageParams& p, const HatchFunction& h, int dimension, std::vector<double> x0, double t0, double t1,
           double rtol, double atol, double output_step) {
            return trajectory_arrays(
                integrate(System(p, h, dimension), std::move(x0), t0, t1, options(rtol, atol, output_step)));
        },
        py::arg("params"), py::arg("h"), py::arg("dimension"), py::arg("x0"), py::arg("t0"), py::arg("t1"),
        py::arg("rtol") = 1e-8, py::arg("atol") = 1e-10, py::arg("output_step") = 0.0);

    py::class_<OscillationMetrics>(m, "OscillationMetrics")
        .def_readonly("period", &OscillationMetrics::period)
        .def_readonly("L_min", &OscillationMetrics::L_min)
        .def_readonly("L_max", &OscillationMetrics::L_max)
        .def_readonly("relative_amplitude_pct", &OscillationMetrics::relative_amplitude_pct)
        .def_readonly("peak_to_trough_pct", &OscillationMetrics::peak_to_trough_pct)
        .def_readonly("n_peaks_used", &OscillationMetrics::n_peaks_used)
        .def_readonly("converged", &OscillationMetrics::converged);
    m.def(
        "measure_oscillation",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> times,
           py::array_t<double, py::array::c_style | py::array::forcecast> values, double L_ref,
           double transient_fraction) {
            if (times.ndim() != 1 || values.ndim() != 1 || times.size() != values.size()) {
                throw std::invalid_argument("measure_oscillation: times and values must be 1D of equal length");
            }
            Trajectory tr;
            tr.dimension = 1;
            tr.times.assign(times.data(), times.data() + times.size());
            tr.data.assign(values.data(), values.data() + values.size());
            return measure_oscillation(tr, 0, L_ref, transient_fraction);
        },
        py::arg("times"), py::arg("values"), py::arg("L_ref"), py::arg("transient_fraction") = 0.5);

    py::class_<SlowFastCycle>(m, "SlowFastCycle")
        .def_readonly("u_m0", &SlowFastCycle::u_m0)
        .def_readonly("u_M", &SlowFastCycle::u_M)
        .def_readonly("u_m", &SlowFastCycle::u_m)
        .def_readonly("u_M0", &SlowFastCycle::u_M0)
        .def_readonly("phi_M", &SlowFastCycle::phi_M)
        .def_readonly("phi_m", &SlowFastCycle::phi_m)
        .def_readonly("amplitude_v", &SlowFastCycle::amplitude_v)
        .def_readonly("amplitude_u", &SlowFastCycle::amplitude_u)
        .def_readonly("tau", &SlowFastCycle::tau);
    m.def("build_cycle", py::overload_cast<const HatchFunction&, double, double>(&build_cycle), py::arg("h"),
          py::arg("L_bar"), py::arg("d_E"));
    m.def("hill_amplitude", &hill_amplitude, py::arg("rho"), py::arg("alpha"), py::arg("p"));

    m.def(
        "run_cli",
        [](std::vector<std::string> args) {
            args.insert(args.begin(), "hatchcycle");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out;
            std::ostringstream err;
            const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"));
}
