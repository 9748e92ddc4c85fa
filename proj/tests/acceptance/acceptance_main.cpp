// Acceptance gate: one line per criterion, PASS/FAIL, nonzero exit on any
// failure. Each check is self-contained and deterministic.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qcsmc/analytic.hpp"
#include "qcsmc/controller.hpp"
#include "qcsmc/io.hpp"
#include "qcsmc/lyapunov.hpp"
#include "qcsmc/simulator.hpp"
#include "qcsmc/sweep.hpp"

using namespace qcsmc;

namespace {

int g_failures = 0;

void report(int index, bool pass, const std::string& what, const std::string& detail = "") {
    std::printf("criterion %d: %s - %s%s%s\n", index, pass ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : " ", detail.c_str());
    if (!pass) ++g_failures;
}

SimConfig unperturbed(State x0, double gamma, double dt) {
    SimConfig cfg;
    cfg.x0 = x0;
    cfg.params.gamma = gamma;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    return cfg;
}

// --- 1: gain threshold ------------------------------------------------------
void criterion1() {
    const double g = gamma_min_new(100.0);
    const bool pass = g >= 2928.9 && g < 2929.0 && 2929.0 > g;
    report(1, pass, "gain threshold: gamma_min_new(100) in [2928.9, 2929.0), 2929 admissible",
           "(value " + format_double(g) + ")");
}

// --- 2: analytic vs numeric -------------------------------------------------
double axis_reference_error(double dt) {
    // x0 on the x2-axis has no closed form start; compare against a dt=1e-6
    // reference simulation on the shared time grid.
    SimConfig coarse = unperturbed({0.0, 5.0}, 100.0, dt);
    SimConfig fine = unperturbed({0.0, 5.0}, 100.0, 1e-6);
    const Trajectory a = simulate(validate_config(coarse));
    const Trajectory b = simulate(validate_config(fine));
    const auto stride = static_cast<std::size_t>(std::llround(dt / 1e-6));
    // Wider tail exclusion than the analytic comparisons: the one-step u=0
    // start offsets x2 by ~gamma*dt, which compounds into a phase lag over
    // the terminal harmonic swing.
    const double t_cut = std::min(a.captured_at.value_or(1.0), b.captured_at.value_or(1.0)) - 0.04;
    double err = 0.0;
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        const std::size_t kf = k * stride;
        if (kf >= b.samples.size()) break;
        if (a.samples[k].t > t_cut) break;
        err = std::max(err, std::abs(a.samples[k].state.x1 - b.samples[kf].state.x1));
        err = std::max(err, std::abs(a.samples[k].state.x2 - b.samples[kf].state.x2));
    }
    return err;
}

void criterion2() {
    bool pass = true;
    std::string detail;
    for (const State x0 : {State{1.0, 2.0}, State{1.0, -10.0}}) {
        const ErrorReport coarse = compare_with_analytic(unperturbed(x0, 100.0, 1e-4));
        const ErrorReport fine = compare_with_analytic(unperturbed(x0, 100.0, 5e-5));
        const double ec = std::max(coarse.max_x1_err, coarse.max_x2_err);
        const double ef = std::max(fine.max_x1_err, fine.max_x2_err);
        const double ratio = ec / ef;
        const bool ok = ec <= 1e-2 && coarse.max_u_err <= 0.5 && ratio > 2.0 / 1.5 &&
                        ratio < 2.0 * 1.5;
        if (!ok) pass = false;
        detail += "(" + format_double(x0.x1) + "," + format_double(x0.x2) +
                  "): err=" + format_double(ec) + " u_err=" + format_double(coarse.max_u_err) +
                  " ratio=" + format_double(ratio) + "; ";
    }
    const double e_axis = axis_reference_error(1e-4);
    const double e_axis_half = axis_reference_error(5e-5);
    const double r_axis = e_axis / e_axis_half;
    if (!(e_axis <= 1e-2 && r_axis > 2.0 / 1.5 && r_axis < 2.0 * 1.5)) pass = false;
    detail += "(0,5)/ref: err=" + format_double(e_axis) + " ratio=" + format_double(r_axis);
    report(2, pass, "analytic-numeric agreement for (1,2), (1,-10), (0,5)", detail);
}

// --- 3: reach-time oracle ---------------------------------------------------
void criterion3() {
    SweepSpec spec;
    spec.base.params.gamma = 100.0;
    spec.base.dt = 1e-5;
    spec.base.t_end = 2.0;
    spec.x0_region = SampleRegion::Ca;
    spec.x1_lo = -2.0;
    spec.x1_hi = 2.0;
    spec.x2_lo = -20.0;
    spec.x2_hi = 20.0;
    spec.seed = 31337;
    spec.samples = 100;

    const SweepSummary sum = run_sweep(spec);
    int bad = 0;
    double worst = 0.0;
    for (const auto& r : sum.runs) {
        if (!r.capture_time) {
            ++bad;
            continue;
        }
        const double t_ref = reach_time_Ca(r.x0, 100.0);
        const double tol = std::max(0.01 * t_ref, 5.0 * 1e-5);
        const double dev = std::abs(*r.capture_time - t_ref);
        worst = std::max(worst, dev / tol);
        if (dev > tol) ++bad;
    }
    // The literal printed reach-time variant must demonstrably fail where its
    // denominator vanishes while the implemented form passes above.
    const auto printed = reach_time_Ca_printed({1.0, -10.0}, 100.0);
    const bool printed_fails = !printed.has_value() || !std::isfinite(*printed);
    const bool pass = bad == 0 && printed_fails;
    report(3, pass, "reach-time oracle on 100 seeded C_a points; printed variant degenerates",
           "(violations " + std::to_string(bad) + ", worst dev/tol " + format_double(worst) +
               ", printed@(1,-10) " +
               (printed ? format_double(*printed) : std::string("none")) + ")");
}

// --- 4 & 5: U-exit bracket and non-overshooting over the 1000-run sweep -----
SweepSummary big_sweep(const DisturbanceSpec& family, std::uint64_t seed) {
    SweepSpec spec;
    spec.base.params.gamma = 150.0;
    spec.base.params.D = 100.0;
    spec.base.t_end = 2.0;
    spec.x0_region = SampleRegion::U;
    spec.x1_lo = 0.1;
    spec.x1_hi = 2.0;
    spec.x2_lo = 0.1;
    spec.x2_hi = 20.0;
    spec.disturbance_family = family;
    spec.seed = seed;
    spec.samples = 500;
    return run_sweep(spec);
}

void criteria45() {
    const SweepSummary random_half = big_sweep(UniformRandomDisturbance{100.0, 0}, 41);
    const SweepSummary sinus_half = big_sweep(SinusoidDisturbance{100.0, 10.0, 0.0}, 42);
    const int violations = random_half.bracket_violations + sinus_half.bracket_violations;
    report(4, violations == 0,
           "U-exit bracket holds on 1000 seeded runs (gamma=150, D=100, two families)",
           "(violations " + std::to_string(violations) + ")");

    // Non-overshooting: asserted where gamma >= gamma_min_old(D). The sweep
    // gain 150 is below that threshold, so its verdicts are recorded only;
    // the gamma=2929 scenario is the asserted instance. Capture before
    // t_end = 2 s is required for both scenario gains.
    bool pass = true;
    std::string detail;
    for (double gamma : {150.0, 2929.0}) {
        SimConfig cfg;
        cfg.x0 = {1.5, 15.0};
        cfg.params.gamma = gamma;
        cfg.params.D = 100.0;
        cfg.disturbance = SinusoidDisturbance{100.0, 10.0, 0.0};
        cfg.t_end = 2.0;
        const SimConfig eff = validate_config(cfg);
        const Trajectory traj = simulate(eff);
        const bool captured = traj.captured_at.has_value();
        const auto rep = overshoot_check(traj, eff);
        if (!captured) pass = false;
        if (gamma >= gamma_min_old(100.0) && rep.overshoot) pass = false;
        detail += "gamma=" + format_double(gamma) + ": captured_at=" +
                  (captured ? format_double(*traj.captured_at) : std::string("never")) +
                  " overshoot=" + (rep.overshoot ? "true" : "false") + "; ";
    }
    int sweep_overshoots = random_half.overshoots + sinus_half.overshoots;
    detail += "sweep overshoots (gamma below old threshold, recorded only): " +
              std::to_string(sweep_overshoots);
    report(5, pass, "non-overshooting scenarios capture without sign reversal", detail);
}

// --- 6: Lyapunov decrease ---------------------------------------------------
struct VRunOutcome {
    bool monotone = true;
    bool u_rate_ok = true;
    bool captured = false;
};

VRunOutcome vdot_run(int index) {
    const double gamma = 2929.0, D = 100.0, eta = 1e-4;
    const auto interval = epsilon_interval(gamma, D, eta);
    LyapunovParams p{gamma, D, eta, 0.5 * (interval->first + interval->second)};

    SimConfig cfg;
    const auto idx = static_cast<std::uint64_t>(index);
    // dt = 1e-8 keeps the per-step discretization increment of V below the
    // 1e-9 monotonicity tolerance; the x0 box keeps runs short enough.
    cfg.x0 = {uniform_draw(606, idx * 2, -0.1, 0.1), uniform_draw(606, idx * 2 + 1, -0.5, 0.5)};
    if (std::abs(cfg.x0.x1) < 0.02) cfg.x0.x1 = std::copysign(0.02, cfg.x0.x1 + 0.5);
    cfg.params.gamma = gamma;
    cfg.params.D = D;
    cfg.params.eta = eta;
    cfg.params.epsilon = p.epsilon;
    cfg.dt = 1e-8;
    cfg.t_end = 0.05;
    if (index % 2 == 0)
        cfg.disturbance = SinusoidDisturbance{
            100.0, 10.0, uniform_draw(607, idx, 0.0, 2.0 * std::numbers::pi)};
    else
        cfg.disturbance = UniformRandomDisturbance{100.0, 1000u + idx};

    const SimConfig eff = validate_config(cfg);
    const Trajectory traj = simulate(eff);

    VRunOutcome out;
    out.captured = traj.captured_at.has_value();
    out.monotone = vdot_along(traj, p, eff.capture_eps1, eff.capture_eps2).monotone;

    // Sampled decay rate in the open U region: Vdot <= -eta|x2| + 10*dt*gamma^2
    const double dt = *eff.dt;
    const double slack = 10.0 * dt * gamma * gamma;
    for (std::size_t k = 0; k + 1 < traj.samples.size(); ++k) {
        const State& a = traj.samples[k].state;
        const State& b = traj.samples[k + 1].state;
        if (!(a.x1 * a.x2 > 0.0) || !(b.x1 * b.x2 > 0.0)) continue;
        if (std::abs(a.x1) <= *eff.capture_eps1 && std::abs(a.x2) <= *eff.capture_eps2) continue;
        const double vdot = (v_new(b, p) - v_new(a, p)) / dt;
        if (vdot > -eta * std::abs(a.x2) + slack) {
            out.u_rate_ok = false;
            break;
        }
    }
    return out;
}

void criterion6() {
    const int runs = 100;
    std::vector<VRunOutcome> outcomes(runs);
    const int workers = 4;  // trajectories at dt=1e-8 are large; bound memory
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < runs; i += workers) outcomes[i] = vdot_run(i);
        });
    for (auto& th : pool) th.join();

    int non_monotone = 0, rate_fail = 0, uncaptured = 0;
    for (const auto& o : outcomes) {
        if (!o.monotone) ++non_monotone;
        if (!o.u_rate_ok) ++rate_fail;
        if (!o.captured) ++uncaptured;
    }
    const bool pass = non_monotone == 0 && rate_fail == 0;
    report(6, pass, "Lyapunov decrease along 100 perturbed runs (gamma=2929, dt=1e-8)",
           "(non-monotone " + std::to_string(non_monotone) + ", U-rate failures " +
               std::to_string(rate_fail) + ", uncaptured " + std::to_string(uncaptured) + ")");
}

// --- 7: control amplitude ---------------------------------------------------
void criterion7() {
    bool pass = true;
    std::string detail;

    // Closed-form trajectories: the recorded |u| peaks at exactly gamma.
    for (const State x0 : {State{1.0, 2.0}, State{1.0, -10.0}, State{-0.4, 3.0}}) {
        const AnalyticSolution sol = compose_trajectory(x0, 100.0, 1e-4);
        double max_u = 0.0;
        for (const auto& s : sol.trajectory.samples) max_u = std::max(max_u, std::abs(s.u));
        if (std::abs(max_u - 100.0) > 1e-9) pass = false;
    }

    // Simulated runs: while in U with x1 != 0, |u| = gamma exactly; the
    // modified law never exceeds gamma there.
    for (const State x0 : {State{1.0, 2.0}, State{1.0, -10.0}, State{-1.5, -6.0}}) {
        const Trajectory traj = simulate(validate_config(unperturbed(x0, 100.0, 1e-4)));
        for (const auto& s : traj.samples) {
            if (traj.captured_at && s.t >= *traj.captured_at) break;
            if (s.region.domain == Domain::U && s.state.x1 != 0.0 && std::abs(s.u) != 100.0)
                pass = false;
        }
    }

    const double u_original = control_original({1.0, 2.0}, {100.0, 0.0, {}, {}}, 1e5).u;
    if (std::abs(u_original) != 104.0) pass = false;
    detail = "(original law at (1,2): |u| = " + format_double(std::abs(u_original)) +
             " > gamma = 100)";
    report(7, pass, "control amplitude: modified law capped at gamma, original law exceeds it",
           detail);
}

// --- 8: symmetry and determinism --------------------------------------------
void criterion8() {
    SimConfig cfg;
    cfg.x0 = {1.5, 15.0};
    cfg.params.gamma = 150.0;
    cfg.params.D = 100.0;
    cfg.disturbance = SinusoidDisturbance{100.0, 10.0, 0.0};
    cfg.t_end = 2.0;
    const SimConfig fwd = validate_config(cfg);
    SimConfig neg = fwd;
    neg.x0 = -fwd.x0;
    neg.disturbance = SinusoidDisturbance{-100.0, 10.0, 0.0};

    const Trajectory a = simulate(fwd);
    const Trajectory b = simulate(neg);
    bool symmetric = a.samples.size() == b.samples.size();
    double worst = 0.0;
    if (symmetric)
        for (std::size_t k = 0; k < a.samples.size(); ++k) {
            worst = std::max({worst, std::abs(a.samples[k].state.x1 + b.samples[k].state.x1),
                              std::abs(a.samples[k].state.x2 + b.samples[k].state.x2),
                              std::abs(a.samples[k].u + b.samples[k].u)});
        }
    symmetric = symmetric && worst <= 1e-12;

    // Determinism: identical configs produce byte-identical CSV text, and an
    // identically seeded random-disturbance sweep reproduces its results.
    std::ostringstream csv1, csv2;
    write_trajectory_csv(csv1, a);
    write_trajectory_csv(csv2, simulate(fwd));
    bool deterministic = csv1.str() == csv2.str();

    SweepSpec spec;
    spec.base = fwd;
    spec.disturbance_family = UniformRandomDisturbance{100.0, 0};
    spec.x0_region = SampleRegion::U;
    spec.x1_lo = 0.1;
    spec.x1_hi = 2.0;
    spec.x2_lo = 0.1;
    spec.x2_hi = 20.0;
    spec.samples = 20;
    spec.seed = 99;
    const SweepSummary s1 = run_sweep(spec, 4);
    const SweepSummary s2 = run_sweep(spec, 2);
    for (std::size_t i = 0; i < s1.runs.size(); ++i)
        if (s1.runs[i].capture_time != s2.runs[i].capture_time ||
            s1.runs[i].x0.x1 != s2.runs[i].x0.x1)
            deterministic = false;

    report(8, symmetric && deterministic, "odd symmetry exact and outputs byte-deterministic",
           "(worst asymmetry " + format_double(worst) + ")");
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criteria45();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
