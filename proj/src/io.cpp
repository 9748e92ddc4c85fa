#include "qcsmc/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "qcsmc/lyapunov.hpp"

namespace qcsmc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::BadConfig, msg); }

double as_number(const json& j, const std::string& key) {
    if (!j.is_number()) bad("'" + key + "' must be a number");
    return j.get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
    for (const auto& [key, _] : j.items())
        if (!allowed.contains(key)) bad("unknown key '" + key + "' in " + where);
}

}  // namespace

DisturbanceSpec disturbance_from_json(const json& j) {
    if (!j.is_object()) bad("'disturbance' must be an object");
    if (!j.contains("type") || !j.at("type").is_string())
        bad("'disturbance' requires a string 'type'");
    const std::string type = j.at("type").get<std::string>();

    if (type == "zero") {
        reject_unknown(j, {"type"}, "disturbance");
        return ZeroDisturbance{};
    }
    if (type == "constant") {
        reject_unknown(j, {"type", "value"}, "disturbance");
        if (!j.contains("value")) bad("constant disturbance requires 'value'");
        return ConstantDisturbance{as_number(j.at("value"), "value")};
    }
    if (type == "sinusoid") {
        reject_unknown(j, {"type", "amplitude", "frequency_hz", "phase_rad"}, "disturbance");
        if (!j.contains("amplitude") || !j.contains("frequency_hz"))
            bad("sinusoid disturbance requires 'amplitude' and 'frequency_hz'");
        SinusoidDisturbance s;
        s.amplitude = as_number(j.at("amplitude"), "amplitude");
        s.frequency_hz = as_number(j.at("frequency_hz"), "frequency_hz");
        if (j.contains("phase_rad")) s.phase_rad = as_number(j.at("phase_rad"), "phase_rad");
        return s;
    }
    if (type == "uniform_random") {
        reject_unknown(j, {"type", "bound", "seed"}, "disturbance");
        if (!j.contains("bound")) bad("uniform_random disturbance requires 'bound'");
        UniformRandomDisturbance s;
        s.bound = as_number(j.at("bound"), "bound");
        if (j.contains("seed")) {
            if (!j.at("seed").is_number_unsigned()) bad("'seed' must be a non-negative integer");
            s.seed = j.at("seed").get<std::uint64_t>();
        }
        return s;
    }
    if (type == "table") {
        reject_unknown(j, {"type", "times", "values"}, "disturbance");
        if (!j.contains("times") || !j.contains("values") || !j.at("times").is_array() ||
            !j.at("values").is_array())
            bad("table disturbance requires 'times' and 'values' arrays");
        TableDisturbance s;
        for (const auto& v : j.at("times")) s.times.push_back(as_number(v, "times"));
        for (const auto& v : j.at("values")) s.values.push_back(as_number(v, "values"));
        return s;
    }
    bad("unknown disturbance type '" + type + "'");
}

json disturbance_to_json(const DisturbanceSpec& spec) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ZeroDisturbance>) {
                return {{"type", "zero"}};
            } else if constexpr (std::is_same_v<T, ConstantDisturbance>) {
                return {{"type", "constant"}, {"value", s.value}};
            } else if constexpr (std::is_same_v<T, SinusoidDisturbance>) {
                return {{"type", "sinusoid"},
                        {"amplitude", s.amplitude},
                        {"frequency_hz", s.frequency_hz},
                        {"phase_rad", s.phase_rad}};
            } else if constexpr (std::is_same_v<T, UniformRandomDisturbance>) {
                return {{"type", "uniform_random"}, {"bound", s.bound}, {"seed", s.seed}};
            } else {
                return {{"type", "table"}, {"times", s.times}, {"values", s.values}};
            }
        },
        spec);
}

SimConfig config_from_json(const json& j) {
    if (!j.is_object()) bad("scenario must be a JSON object");
    reject_unknown(j,
                   {"x0", "gamma", "D", "eta", "epsilon", "dt", "t_end", "disturbance", "capture",
                    "delta_cap", "post_capture", "filter_cutoff_hz", "integrator"},
                   "scenario");

    SimConfig cfg;
    if (!j.contains("x0") || !j.at("x0").is_array() || j.at("x0").size() != 2)
        bad("'x0' must be an array [x1, x2]");
    cfg.x0.x1 = as_number(j.at("x0")[0], "x0");
    cfg.x0.x2 = as_number(j.at("x0")[1], "x0");

    if (!j.contains("gamma")) bad("scenario requires 'gamma'");
    cfg.params.gamma = as_number(j.at("gamma"), "gamma");
    if (!j.contains("D")) bad("scenario requires 'D'");
    cfg.params.D = as_number(j.at("D"), "D");
    if (j.contains("eta")) cfg.params.eta = as_number(j.at("eta"), "eta");
    if (j.contains("epsilon")) cfg.params.epsilon = as_number(j.at("epsilon"), "epsilon");

    if (j.contains("dt")) cfg.dt = as_number(j.at("dt"), "dt");
    if (j.contains("t_end")) cfg.t_end = as_number(j.at("t_end"), "t_end");
    if (j.contains("disturbance")) cfg.disturbance = disturbance_from_json(j.at("disturbance"));

    if (j.contains("capture")) {
        const json& c = j.at("capture");
        if (!c.is_object()) bad("'capture' must be an object");
        reject_unknown(c, {"eps1", "eps2"}, "capture");
        if (c.contains("eps1")) cfg.capture_eps1 = as_number(c.at("eps1"), "capture.eps1");
        if (c.contains("eps2")) cfg.capture_eps2 = as_number(c.at("eps2"), "capture.eps2");
    }
    if (j.contains("delta_cap")) cfg.delta_cap = as_number(j.at("delta_cap"), "delta_cap");

    if (j.contains("post_capture")) {
        const std::string mode = j.at("post_capture").get<std::string>();
        if (mode == "hold")
            cfg.post_capture = PostCapture::Hold;
        else if (mode == "chatter")
            cfg.post_capture = PostCapture::Chatter;
        else
            bad("'post_capture' must be \"hold\" or \"chatter\"");
    }
    if (j.contains("filter_cutoff_hz"))
        cfg.filter_cutoff_hz = as_number(j.at("filter_cutoff_hz"), "filter_cutoff_hz");
    if (j.contains("integrator")) {
        const std::string kind = j.at("integrator").get<std::string>();
        if (kind == "euler")
            cfg.integrator = IntegratorKind::Euler;
        else if (kind == "rk4")
            cfg.integrator = IntegratorKind::RK4;
        else
            bad("'integrator' must be \"euler\" or \"rk4\"");
    }
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open scenario file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        bad("scenario file " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

json config_to_json(const SimConfig& cfg, const std::vector<std::string>& defaulted) {
    json j;
    j["x0"] = {cfg.x0.x1, cfg.x0.x2};
    j["gamma"] = cfg.params.gamma;
    j["D"] = cfg.params.D;
    if (cfg.params.eta) j["eta"] = *cfg.params.eta;
    if (cfg.params.epsilon) j["epsilon"] = *cfg.params.epsilon;
    if (cfg.dt) j["dt"] = *cfg.dt;
    j["t_end"] = cfg.t_end;
    j["disturbance"] = disturbance_to_json(cfg.disturbance);
    json cap;
    if (cfg.capture_eps1) cap["eps1"] = *cfg.capture_eps1;
    if (cfg.capture_eps2) cap["eps2"] = *cfg.capture_eps2;
    if (!cap.empty()) j["capture"] = cap;
    if (cfg.delta_cap) j["delta_cap"] = *cfg.delta_cap;
    j["post_capture"] = cfg.post_capture == PostCapture::Hold ? "hold" : "chatter";
    j["filter_cutoff_hz"] = cfg.filter_cutoff_hz;
    j["integrator"] = cfg.integrator == IntegratorKind::Euler ? "euler" : "rk4";
    j["provenance"] = {{"defaulted", defaulted}};
    return j;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x1,x2,u,u_filt,d,region,in_ca,v_new,energy\n";
    for (const auto& s : traj.samples) {
        os << format_double(s.t) << ',' << format_double(s.state.x1) << ','
           << format_double(s.state.x2) << ',' << format_double(s.u) << ','
           << format_double(s.u_filt) << ',' << format_double(s.d) << ','
           << to_string(s.region.domain) << ',' << (s.region.in_ca ? 1 : 0) << ','
           << format_double(s.v_new) << ',' << format_double(s.energy) << '\n';
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path, std::ios::binary);
    if (!out) bad("cannot open output file: " + path);
    write_trajectory_csv(out, traj);
    if (!out) bad("failed writing output file: " + path);
}

json trajectory_sidecar(const Trajectory& traj, const json& effective_config) {
    json events = json::array();
    for (const auto& e : traj.events)
        events.push_back({{"t", e.t}, {"kind", to_string(e.kind)}});
    json j;
    j["config"] = effective_config;
    j["events"] = events;
    j["samples"] = traj.samples.size();
    if (traj.captured_at)
        j["captured_at"] = *traj.captured_at;
    else
        j["captured_at"] = nullptr;
    if (!traj.samples.empty()) {
        const auto& last = traj.samples.back();
        j["final_state"] = {last.state.x1, last.state.x2};
        j["final_t"] = last.t;
    }
    return j;
}

}  // namespace qcsmc
