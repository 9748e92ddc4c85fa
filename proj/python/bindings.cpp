#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "qcsmc/analytic.hpp"
#include "qcsmc/controller.hpp"
#include "qcsmc/io.hpp"
#include "qcsmc/lyapunov.hpp"
#include "qcsmc/simulator.hpp"
#include "qcsmc/sweep.hpp"

namespace py = pybind11;
using namespace qcsmc;

namespace {

ControlLaw law_from_string(const std::string& s) {
    if (s == "modified") return ControlLaw::Modified;
    if (s == "original") return ControlLaw::Original;
    throw Error(Errc::BadConfig, "law must be 'modified' or 'original'");
}

}  // namespace

PYBIND11_MODULE(_qcsmc, m) {
    m.doc() = "Sliding-mode control simulation and verification toolkit";

    py::register_exception<Error>(m, "QcsmcError");

    py::class_<State>(m, "State")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("x1"), py::arg("x2"))
        .def_readwrite("x1", &State::x1)
        .def_readwrite("x2", &State::x2)
        .def("__neg__", &State::operator-)
        .def("__repr__", [](const State& s) {
            return "State(x1=" + format_double(s.x1) + ", x2=" + format_double(s.x2) + ")";
        });

    py::class_<ControlParams>(m, "ControlParams")
        .def(py::init<>())
        .def_readwrite("gamma", &ControlParams::gamma)
        .def_readwrite("D", &ControlParams::D)
        .def_readwrite("eta", &ControlParams::eta)
        .def_readwrite("epsilon", &ControlParams::epsilon);

    py::class_<ZeroDisturbance>(m, "ZeroDisturbance").def(py::init<>());
    py::class_<ConstantDisturbance>(m, "ConstantDisturbance")
        .def(py::init<double>(), py::arg("value"))
        .def_readwrite("value", &ConstantDisturbance::value);
    py::class_<SinusoidDisturbance>(m, "SinusoidDisturbance")
        .def(py::init<double, double, double>(), py::arg("amplitude"), py::arg("frequency_hz"),
             py::arg("phase_rad") = 0.0)
        .def_readwrite("amplitude", &SinusoidDisturbance::amplitude)
        .def_readwrite("frequency_hz", &SinusoidDisturbance::frequency_hz)
        .def_readwrite("phase_rad", &SinusoidDisturbance::phase_rad);
    py::class_<UniformRandomDisturbance>(m, "UniformRandomDisturbance")
        .def(py::init<double, std::uint64_t>(), py::arg("bound"), py::arg("seed") = 0)
        .def_readwrite("bound", &UniformRandomDisturbance::bound)
        .def_readwrite("seed", &UniformRandomDisturbance::seed);
    py::class_<TableDisturbance>(m, "TableDisturbance")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("times"),
             py::arg("values"))
        .def_readwrite("times", &TableDisturbance::times)
        .def_readwrite("values", &TableDisturbance::values);

    py::enum_<PostCapture>(m, "PostCapture")
        .value("Hold", PostCapture::Hold)
        .value("Chatter", PostCapture::Chatter);
    py::enum_<IntegratorKind>(m, "IntegratorKind")
        .value("Euler", IntegratorKind::Euler)
        .value("RK4", IntegratorKind::RK4);
    py::enum_<Domain>(m, "Domain").value("U", Domain::U).value("C", Domain::C);

    py::class_<Region>(m, "Region")
        .def_readonly("domain", &Region::domain)
        .def_readonly("in_ca", &Region::in_ca)
        .def_property_readonly("quadrant",
                               [](const Region& r) { return std::string(to_string(r.quadrant)); });

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("x0", &SimConfig::x0)
        .def_readwrite("params", &SimConfig::params)
        .def_readwrite("disturbance", &SimConfig::disturbance)
        .def_readwrite("dt", &SimConfig::dt)
        .def_readwrite("t_end", &SimConfig::t_end)
        .def_readwrite("capture_eps1", &SimConfig::capture_eps1)
        .def_readwrite("capture_eps2", &SimConfig::capture_eps2)
        .def_readwrite("delta_cap", &SimConfig::delta_cap)
        .def_readwrite("post_capture", &SimConfig::post_capture)
        .def_readwrite("filter_cutoff_hz", &SimConfig::filter_cutoff_hz)
        .def_readwrite("integrator", &SimConfig::integrator);

    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("t", &TrajectorySample::t)
        .def_readonly("state", &TrajectorySample::state)
        .def_readonly("u", &TrajectorySample::u)
        .def_readonly("u_filt", &TrajectorySample::u_filt)
        .def_readonly("d", &TrajectorySample::d)
        .def_readonly("region", &TrajectorySample::region)
        .def_readonly("v_new", &TrajectorySample::v_new)
        .def_readonly("energy", &TrajectorySample::energy);

    py::class_<Event>(m, "Event")
        .def_readonly("t", &Event::t)
        .def_property_readonly("kind",
                               [](const Event& e) { return std::string(to_string(e.kind)); });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("samples", &Trajectory::samples)
        .def_readonly("events", &Trajectory::events)
        .def_readonly("captured_at", &Trajectory::captured_at);

    py::class_<ControlOutput>(m, "ControlOutput")
        .def_readonly("u", &ControlOutput::u)
        .def_readonly("delta", &ControlOutput::delta)
        .def_readonly("clamped", &ControlOutput::clamped);

    py::class_<ParabolicArc>(m, "ParabolicArc")
        .def_readonly("x0", &ParabolicArc::x0)
        .def_readonly("gamma", &ParabolicArc::gamma)
        .def_readonly("sign_branch", &ParabolicArc::sign_branch)
        .def_readonly("t_exit", &ParabolicArc::t_exit)
        .def("eval", &ParabolicArc::eval, py::arg("t"))
        .def("control", &ParabolicArc::control);

    py::class_<HarmonicArc>(m, "HarmonicArc")
        .def_readonly("B", &HarmonicArc::B)
        .def_readonly("omega", &HarmonicArc::omega)
        .def_readonly("phi", &HarmonicArc::phi)
        .def_readonly("t_reach", &HarmonicArc::t_reach)
        .def_readonly("mirrored", &HarmonicArc::mirrored);

    py::class_<AnalyticSolution>(m, "AnalyticSolution")
        .def_readonly("u_arc", &AnalyticSolution::u_arc)
        .def_readonly("c_arc", &AnalyticSolution::c_arc)
        .def_readonly("total_time", &AnalyticSolution::total_time)
        .def_readonly("trajectory", &AnalyticSolution::trajectory)
        .def("eval_state", &AnalyticSolution::eval_state, py::arg("t"))
        .def("eval_control", &AnalyticSolution::eval_control, py::arg("t"));

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("max_x1_err", &ErrorReport::max_x1_err)
        .def_readonly("max_x2_err", &ErrorReport::max_x2_err)
        .def_readonly("max_u_err", &ErrorReport::max_u_err)
        .def_readonly("at_t", &ErrorReport::at_t);

    py::class_<OvershootReport>(m, "OvershootReport")
        .def_readonly("overshoot", &OvershootReport::overshoot)
        .def_readonly("first_violation_t", &OvershootReport::first_violation_t)
        .def_readonly("max_opposite_x1", &OvershootReport::max_opposite_x1)
        .def_readonly("threshold", &OvershootReport::threshold);

    py::class_<LyapunovParams>(m, "LyapunovParams")
        .def(py::init<>())
        .def_readwrite("gamma", &LyapunovParams::gamma)
        .def_readwrite("D", &LyapunovParams::D)
        .def_readwrite("eta", &LyapunovParams::eta)
        .def_readwrite("epsilon", &LyapunovParams::epsilon);

    py::class_<VdotReport>(m, "VdotReport")
        .def_readonly("series", &VdotReport::series)
        .def_readonly("monotone", &VdotReport::monotone)
        .def_readonly("max_positive_jump", &VdotReport::max_positive_jump);

    py::class_<GridMap>(m, "GridMap")
        .def_readonly("x1_lo", &GridMap::x1_lo)
        .def_readonly("x1_hi", &GridMap::x1_hi)
        .def_readonly("x2_lo", &GridMap::x2_lo)
        .def_readonly("x2_hi", &GridMap::x2_hi)
        .def_readonly("resolution", &GridMap::resolution)
        .def_readonly("values", &GridMap::values)
        .def("at", &GridMap::at, py::arg("i1"), py::arg("i2"))
        .def("x1_at", &GridMap::x1_at, py::arg("i1"))
        .def("x2_at", &GridMap::x2_at, py::arg("i2"));

    py::enum_<SampleRegion>(m, "SampleRegion")
        .value("U", SampleRegion::U)
        .value("Ca", SampleRegion::Ca)
        .value("C", SampleRegion::C)
        .value("Any", SampleRegion::Any);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("base", &SweepSpec::base)
        .def_readwrite("samples", &SweepSpec::samples)
        .def_readwrite("x0_region", &SweepSpec::x0_region)
        .def_readwrite("x1_lo", &SweepSpec::x1_lo)
        .def_readwrite("x1_hi", &SweepSpec::x1_hi)
        .def_readwrite("x2_lo", &SweepSpec::x2_lo)
        .def_readwrite("x2_hi", &SweepSpec::x2_hi)
        .def_readwrite("disturbance_family", &SweepSpec::disturbance_family)
        .def_readwrite("seed", &SweepSpec::seed);

    py::class_<SweepRunResult>(m, "SweepRunResult")
        .def_readonly("index", &SweepRunResult::index)
        .def_readonly("x0", &SweepRunResult::x0)
        .def_readonly("capture_time", &SweepRunResult::capture_time)
        .def_readonly("u_exit_time", &SweepRunResult::u_exit_time)
        .def_readonly("bracket_lo", &SweepRunResult::bracket_lo)
        .def_readonly("bracket_hi", &SweepRunResult::bracket_hi)
        .def_readonly("in_bracket", &SweepRunResult::in_bracket)
        .def_readonly("overshoot", &SweepRunResult::overshoot)
        .def_readonly("max_abs_u_in_U", &SweepRunResult::max_abs_u_in_U)
        .def_readonly("vdot_monotone", &SweepRunResult::vdot_monotone)
        .def_readonly("diverged", &SweepRunResult::diverged);

    py::class_<SweepSummary>(m, "SweepSummary")
        .def_readonly("runs", &SweepSummary::runs)
        .def_readonly("captured", &SweepSummary::captured)
        .def_readonly("bracket_violations", &SweepSummary::bracket_violations)
        .def_readonly("overshoots", &SweepSummary::overshoots)
        .def_readonly("vdot_violations", &SweepSummary::vdot_violations)
        .def_readonly("diverged", &SweepSummary::diverged);

    m.def("control_modified", &control_modified, py::arg("x"), py::arg("params"),
          py::arg("delta_cap"));
    m.def("control_original", &control_original, py::arg("x"), py::arg("params"),
          py::arg("delta_cap"));
    m.def("classify", &classify, py::arg("x"), py::arg("gamma"));
    m.def(
        "validate_config", [](const SimConfig& cfg) { return validate_config(cfg); },
        py::arg("cfg"));

    m.def("parabolic_arc", &parabolic_arc, py::arg("x0"), py::arg("gamma"));
    m.def("harmonic_params", &harmonic_params, py::arg("x0"), py::arg("gamma"));
    m.def("harmonic_eval", &harmonic_eval, py::arg("arc"), py::arg("t"));
    m.def("reach_time_Ca", &reach_time_Ca, py::arg("x0"), py::arg("gamma"));
    m.def("reach_time_Ca_printed", &reach_time_Ca_printed, py::arg("x0"), py::arg("gamma"));
    m.def("reach_time_U", &reach_time_U, py::arg("x0"), py::arg("gamma"));
    m.def("reach_time_U_bounds", &reach_time_U_bounds, py::arg("x0"), py::arg("params"));
    m.def("compose_trajectory", &compose_trajectory, py::arg("x0"), py::arg("gamma"),
          py::arg("sample_dt"));

    m.def(
        "simulate",
        [](const SimConfig& cfg, const std::string& law) {
            return simulate(cfg, law_from_string(law));
        },
        py::arg("cfg"), py::arg("law") = "modified",
        py::call_guard<py::gil_scoped_release>());
    m.def("compare_with_analytic", &compare_with_analytic, py::arg("cfg"),
          py::arg("tail_margin") = std::nullopt);
    m.def(
        "overshoot_check",
        [](const Trajectory& traj, const SimConfig& cfg, std::optional<double> threshold) {
            return overshoot_check(traj, cfg, threshold);
        },
        py::arg("traj"), py::arg("cfg"), py::arg("threshold") = std::nullopt);

    m.def("v_new", &v_new, py::arg("x"), py::arg("params"));
    m.def("v_old", &v_old, py::arg("x"), py::arg("gamma"), py::arg("epsilon"));
    m.def("energy", &energy, py::arg("x"), py::arg("gamma"));
    m.def("gamma_min_old", &gamma_min_old, py::arg("D"));
    m.def("gamma_min_new", &gamma_min_new, py::arg("D"));
    m.def("epsilon_interval", &epsilon_interval, py::arg("gamma"), py::arg("D"), py::arg("eta"));
    m.def("default_eta", &default_eta, py::arg("D"));
    m.def("default_epsilon", &default_epsilon, py::arg("gamma"), py::arg("D"), py::arg("eta"));
    m.def("vdot_along", &vdot_along, py::arg("traj"), py::arg("params"),
          py::arg("capture_eps1") = std::nullopt, py::arg("capture_eps2") = std::nullopt);
    m.def("grid_map", &grid_map, py::arg("params"), py::arg("x1_lo"), py::arg("x1_hi"),
          py::arg("x2_lo"), py::arg("x2_hi"), py::arg("resolution"),
          py::call_guard<py::gil_scoped_release>());

    m.def("run_sweep", &run_sweep, py::arg("spec"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "config_from_json",
        [](const std::string& text) { return config_from_json(nlohmann::json::parse(text)); },
        py::arg("text"), "Parses a scenario from a JSON string.");
    m.def(
        "config_to_json",
        [](const SimConfig& cfg) { return config_to_json(cfg).dump(2); }, py::arg("cfg"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("write_trajectory_csv",
          py::overload_cast<const std::string&, const Trajectory&>(&write_trajectory_csv),
          py::arg("path"), py::arg("traj"));
    m.def("format_double", &format_double, py::arg("v"));
}
