// qcsmc command-line front end.
//
// Subcommands: simulate, analytic, compare, gain, lyapunov-map, sweep.
// Exit status: 0 success, 2 validation/configuration error, 3 runtime
// divergence (non-finite trajectory).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcsmc/analytic.hpp"
#include "qcsmc/controller.hpp"
#include "qcsmc/io.hpp"
#include "qcsmc/lyapunov.hpp"
#include "qcsmc/simulator.hpp"
#include "qcsmc/sweep.hpp"

namespace {

using nlohmann::json;
using namespace qcsmc;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

std::string sidecar_path(const std::string& out_path) {
    if (out_path.size() > 4 && out_path.ends_with(".csv"))
        return out_path.substr(0, out_path.size() - 4) + ".json";
    return out_path + ".json";
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::BadConfig, "cannot open output file: " + path);
    out << j.dump(2) << '\n';
}

void apply_overrides(SimConfig& cfg, std::optional<double> dt, std::optional<std::uint64_t> seed) {
    if (dt) cfg.dt = *dt;
    if (seed)
        if (auto* ur = std::get_if<UniformRandomDisturbance>(&cfg.disturbance)) ur->seed = *seed;
}

int run_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& law_flag, std::optional<double> dt,
                 std::optional<std::uint64_t> seed) {
    SimConfig cfg = load_config(config_path);
    apply_overrides(cfg, dt, seed);
    std::vector<std::string> defaulted;
    const SimConfig eff = validate_config(cfg, &defaulted);
    const ControlLaw law =
        law_flag == "original" ? ControlLaw::Original : ControlLaw::Modified;

    const Trajectory traj = simulate(eff, law);
    write_trajectory_csv(out_path, traj);
    json side = trajectory_sidecar(traj, config_to_json(eff, defaulted));
    side["law"] = law_flag;
    write_json_file(sidecar_path(out_path), side);

    if (traj.first_event(EventKind::Diverged)) {
        std::cerr << "trajectory diverged\n";
        return kExitDiverged;
    }
    if (traj.captured_at)
        std::cout << "captured at t=" << format_double(*traj.captured_at) << "\n";
    else
        std::cout << "not captured by t_end\n";
    return kExitOk;
}

int run_analytic(double x1, double x2, double gamma, double sample_dt,
                 const std::string& out_path) {
    const AnalyticSolution sol = compose_trajectory({x1, x2}, gamma, sample_dt);

    json arcs = json::object();
    if (sol.u_arc)
        arcs["parabolic"] = {{"t_exit", sol.u_arc->t_exit},
                             {"sign_branch", sol.u_arc->sign_branch}};
    if (sol.c_arc)
        arcs["harmonic"] = {{"B", sol.c_arc->B},
                            {"omega", sol.c_arc->omega},
                            {"phi", sol.c_arc->phi},
                            {"t_reach", sol.c_arc->t_reach},
                            {"mirrored", sol.c_arc->mirrored}};
    json meta = {{"x0", {x1, x2}},
                 {"gamma", gamma},
                 {"sample_dt", sample_dt},
                 {"total_time", sol.total_time},
                 {"arcs", arcs}};
    if (!out_path.empty()) {
        write_trajectory_csv(out_path, sol.trajectory);
        write_json_file(sidecar_path(out_path), meta);
    }
    std::cout << meta.dump(2) << "\n";
    return kExitOk;
}

int run_compare(const std::string& config_path, std::optional<double> dt,
                std::optional<double> tail_margin) {
    SimConfig cfg = load_config(config_path);
    apply_overrides(cfg, dt, std::nullopt);
    const ErrorReport rep = compare_with_analytic(cfg, tail_margin);
    const json j = {{"max_x1_err", rep.max_x1_err},
                    {"max_x2_err", rep.max_x2_err},
                    {"max_u_err", rep.max_u_err},
                    {"at_t", rep.at_t}};
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_gain(double D, std::optional<double> eta) {
    json j = {{"D", D},
              {"gamma_min_old", gamma_min_old(D)},
              {"gamma_min_new", gamma_min_new(D)}};
    const double gamma_probe = gamma_min_new(D) * 1.001;
    const double eta_eff = eta.value_or(default_eta(D));
    j["epsilon_interval_at"] = {{"gamma", gamma_probe}, {"eta", eta_eff}};
    if (auto iv = epsilon_interval(gamma_probe, D, eta_eff)) {
        j["epsilon_interval_at"]["lo"] = iv->first;
        j["epsilon_interval_at"]["hi"] = iv->second;
    } else {
        j["epsilon_interval_at"]["empty"] = true;
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

int run_lyapunov_map(double gamma, double D, std::optional<double> eta,
                     std::optional<double> epsilon, double x1_lo, double x1_hi, double x2_lo,
                     double x2_hi, int resolution, const std::string& out_path) {
    std::vector<std::string> defaulted;
    LyapunovParams p;
    p.gamma = gamma;
    p.D = D;
    if (eta) {
        p.eta = *eta;
    } else {
        p.eta = default_eta(D);
        defaulted.emplace_back("eta");
    }
    if (epsilon) {
        p.epsilon = *epsilon;
    } else {
        p.epsilon = default_epsilon(gamma, D, p.eta);
        defaulted.emplace_back("epsilon");
    }
    p = validate_lyapunov(p);

    const GridMap map = grid_map(p, x1_lo, x1_hi, x2_lo, x2_hi, resolution);

    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error(Errc::BadConfig, "cannot open output file: " + out_path);
    out << "x1,x2,v_new\n";
    for (int i2 = 0; i2 < resolution; ++i2)
        for (int i1 = 0; i1 < resolution; ++i1)
            out << format_double(map.x1_at(i1)) << ',' << format_double(map.x2_at(i2)) << ','
                << format_double(map.at(i1, i2)) << '\n';

    const json meta = {{"gamma", p.gamma},
                       {"D", p.D},
                       {"eta", p.eta},
                       {"epsilon", p.epsilon},
                       {"x1_range", {x1_lo, x1_hi}},
                       {"x2_range", {x2_lo, x2_hi}},
                       {"resolution", resolution},
                       {"provenance", {{"defaulted", defaulted}}}};
    write_json_file(sidecar_path(out_path), meta);
    return kExitOk;
}

SweepSpec sweep_from_json(const json& j) {
    if (!j.is_object()) throw Error(Errc::BadConfig, "sweep config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> allowed{"base",   "samples",            "x0_region",
                                                  "x0_box", "disturbance_family", "seed"};
        if (!allowed.contains(key))
            throw Error(Errc::BadConfig, "unknown key '" + key + "' in sweep config");
    }
    if (!j.contains("base")) throw Error(Errc::BadConfig, "sweep config requires 'base'");
    SweepSpec spec;
    spec.base = config_from_json(j.at("base"));
    if (j.contains("samples")) spec.samples = j.at("samples").get<int>();
    if (j.contains("x0_region")) {
        const std::string r = j.at("x0_region").get<std::string>();
        if (r == "U")
            spec.x0_region = SampleRegion::U;
        else if (r == "Ca")
            spec.x0_region = SampleRegion::Ca;
        else if (r == "C")
            spec.x0_region = SampleRegion::C;
        else if (r == "any")
            spec.x0_region = SampleRegion::Any;
        else
            throw Error(Errc::BadConfig, "'x0_region' must be one of U, Ca, C, any");
    }
    if (j.contains("x0_box")) {
        const json& b = j.at("x0_box");
        if (!b.is_array() || b.size() != 2 || b[0].size() != 2 || b[1].size() != 2)
            throw Error(Errc::BadConfig, "'x0_box' must be [[x1_lo,x1_hi],[x2_lo,x2_hi]]");
        spec.x1_lo = b[0][0].get<double>();
        spec.x1_hi = b[0][1].get<double>();
        spec.x2_lo = b[1][0].get<double>();
        spec.x2_hi = b[1][1].get<double>();
        if (!(spec.x1_lo < spec.x1_hi) || !(spec.x2_lo < spec.x2_hi))
            throw Error(Errc::BadConfig, "'x0_box' intervals must be non-degenerate");
    }
    if (j.contains("disturbance_family"))
        spec.disturbance_family = disturbance_from_json(j.at("disturbance_family"));
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_path,
                  std::optional<std::uint64_t> seed, int threads) {
    std::ifstream in(config_path);
    if (!in) throw Error(Errc::BadConfig, "cannot open sweep config: " + config_path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error(Errc::BadConfig, std::string("sweep config is not valid JSON: ") + e.what());
    }
    SweepSpec spec = sweep_from_json(j);
    if (seed) spec.seed = *seed;

    const SweepSummary summary = run_sweep(spec, threads);

    json runs = json::array();
    for (const auto& r : summary.runs) {
        json jr = {{"index", r.index},
                   {"x0", {r.x0.x1, r.x0.x2}},
                   {"in_bracket", r.in_bracket},
                   {"max_abs_u_in_U", r.max_abs_u_in_U},
                   {"vdot_monotone", r.vdot_monotone},
                   {"diverged", r.diverged}};
        jr["capture_time"] = r.capture_time ? json(*r.capture_time) : json(nullptr);
        jr["u_exit_time"] = r.u_exit_time ? json(*r.u_exit_time) : json(nullptr);
        if (r.u_exit_time) jr["bracket"] = {r.bracket_lo, r.bracket_hi};
        jr["overshoot"] = r.overshoot ? json(*r.overshoot) : json(nullptr);
        runs.push_back(std::move(jr));
    }
    std::vector<std::string> defaulted;
    const json out = {{"config",
                       {{"base", config_to_json(validate_config(spec.base, &defaulted), defaulted)},
                        {"samples", spec.samples},
                        {"seed", spec.seed}}},
                      {"summary",
                       {{"captured", summary.captured},
                        {"bracket_violations", summary.bracket_violations},
                        {"overshoots", summary.overshoots},
                        {"vdot_violations", summary.vdot_violations},
                        {"diverged", summary.diverged}}},
                      {"runs", runs}};
    if (!out_path.empty())
        write_json_file(out_path, out);
    else
        std::cout << out.dump(2) << "\n";
    std::cout << "captured " << summary.captured << "/" << spec.samples << ", bracket violations "
              << summary.bracket_violations << ", overshoots " << summary.overshoots
              << ", diverged " << summary.diverged << "\n";
    return summary.diverged == 0 ? kExitOk : kExitDiverged;
}

int classify_exit(const Error& e) {
    switch (e.code()) {
        case Errc::NonFiniteState: return kExitDiverged;
        default: return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sliding-mode control simulation and verification toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, law_flag = "modified";
    std::optional<double> dt_override, tail_margin;
    std::optional<std::uint64_t> seed_override;
    double x1 = 0.0, x2 = 0.0, gamma = 100.0, D = 0.0, sample_dt = 1e-4;
    std::optional<double> eta, epsilon;
    double x1_lo = -2.0, x1_hi = 2.0, x2_lo = -20.0, x2_hi = 20.0;
    int resolution = 201, threads = 0;

    auto* sim = app.add_subcommand("simulate", "Run a closed-loop simulation from a scenario file");
    sim->add_option("--config", config_path, "Scenario JSON file")->required();
    sim->add_option("--out", out_path, "Trajectory CSV output path")->required();
    sim->add_option("--law", law_flag, "Control law")
        ->check(CLI::IsMember({"modified", "original"}));
    sim->add_option("--dt", dt_override, "Override the scenario time step");
    sim->add_option("--seed", seed_override, "Override the uniform_random disturbance seed");

    auto* ana = app.add_subcommand("analytic", "Emit the closed-form trajectory from x0");
    ana->add_option("--x1", x1, "Initial x1")->required();
    ana->add_option("--x2", x2, "Initial x2")->required();
    ana->add_option("--gamma", gamma, "Control gain")->required();
    ana->add_option("--dt", sample_dt, "Sampling step for the emitted CSV");
    ana->add_option("--out", out_path, "Trajectory CSV output path");

    auto* cmp = app.add_subcommand("compare", "Compare simulation against the closed form");
    cmp->add_option("--config", config_path, "Scenario JSON file (zero disturbance)")->required();
    cmp->add_option("--dt", dt_override, "Override the scenario time step");
    cmp->add_option("--tail-margin", tail_margin, "Window excluded before the capture point");

    auto* gain = app.add_subcommand("gain", "Print gain thresholds for a disturbance bound");
    gain->add_option("--D", D, "Disturbance bound")->required();
    gain->add_option("--eta", eta, "Lyapunov margin for the epsilon interval");

    auto* lmap = app.add_subcommand("lyapunov-map", "Write a Lyapunov-function grid map");
    lmap->add_option("--gamma", gamma, "Control gain")->required();
    lmap->add_option("--D", D, "Disturbance bound")->required();
    lmap->add_option("--eta", eta, "Lyapunov margin (defaulted when omitted)");
    lmap->add_option("--epsilon", epsilon, "Coupling coefficient (defaulted when omitted)");
    lmap->add_option("--x1-lo", x1_lo, "Grid x1 lower bound");
    lmap->add_option("--x1-hi", x1_hi, "Grid x1 upper bound");
    lmap->add_option("--x2-lo", x2_lo, "Grid x2 lower bound");
    lmap->add_option("--x2-hi", x2_hi, "Grid x2 upper bound");
    lmap->add_option("--resolution", resolution, "Grid points per axis");
    lmap->add_option("--out", out_path, "Grid CSV output path")->required();

    auto* swp = app.add_subcommand("sweep", "Run a randomized batch of simulations");
    swp->add_option("--config", config_path, "Sweep JSON file")->required();
    swp->add_option("--out", out_path, "Summary JSON output path");
    swp->add_option("--seed", seed_override, "Override the sweep seed");
    swp->add_option("--threads", threads, "Worker threads (0 = hardware)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return run_simulate(config_path, out_path, law_flag, dt_override, seed_override);
        if (ana->parsed()) return run_analytic(x1, x2, gamma, sample_dt, out_path);
        if (cmp->parsed()) return run_compare(config_path, dt_override, tail_margin);
        if (gain->parsed()) return run_gain(D, eta);
        if (lmap->parsed())
            return run_lyapunov_map(gamma, D, eta, epsilon, x1_lo, x1_hi, x2_lo, x2_hi, resolution,
                                    out_path);
        if (swp->parsed()) return run_sweep_cmd(config_path, out_path, seed_override, threads);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
