#include "qcsmc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcsmc/analytic.hpp"
#include "qcsmc/controller.hpp"
#include "qcsmc/lyapunov.hpp"

namespace qcsmc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0, 1)
}

ControlOutput eval_law(const State& x, const ControlParams& params, double delta_cap,
                       ControlLaw law) {
    return law == ControlLaw::Modified ? control_modified(x, params, delta_cap)
                                       : control_original(x, params, delta_cap);
}

}  // namespace

double eval_disturbance(const DisturbanceSpec& spec, double t, std::uint64_t step_index) {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ZeroDisturbance>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, ConstantDisturbance>) {
                return s.value;
            } else if constexpr (std::is_same_v<T, SinusoidDisturbance>) {
                return s.amplitude *
                       std::sin(2.0 * std::numbers::pi * s.frequency_hz * t + s.phase_rad);
            } else if constexpr (std::is_same_v<T, UniformRandomDisturbance>) {
                // counter-based: constant over a step, independent of call order
                const double u = unit_interval(splitmix64(s.seed ^ splitmix64(step_index)));
                return s.bound * (2.0 * u - 1.0);
            } else {
                // zero-order hold; zero before the first knot
                if (s.times.empty() || t < s.times.front()) return 0.0;
                auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
                return s.values[static_cast<std::size_t>(it - s.times.begin()) - 1];
            }
        },
        spec);
}

StepOutcome step(const State& x, double t, std::uint64_t step_index, const SimConfig& cfg,
                 ControlLaw law) {
    if (!x.finite()) throw Error(Errc::NonFiniteState, "state is not finite");
    const double dt = *cfg.dt;
    const double d = eval_disturbance(cfg.disturbance, t, step_index);
    const ControlOutput c = eval_law(x, cfg.params, *cfg.delta_cap, law);
    if (cfg.integrator == IntegratorKind::Euler) {
        return {{x.x1 + dt * x.x2, x.x2 + dt * (c.u + d)}, c.u, d, c.clamped};
    }
    // Classic RK4, offered for refinement studies; the disturbance is held
    // over the step like the zero-order-hold control hardware would.
    auto f = [&](const State& y) -> State {
        return {y.x2, eval_law(y, cfg.params, *cfg.delta_cap, law).u + d};
    };
    const State k1 = f(x);
    const State k2 = f({x.x1 + 0.5 * dt * k1.x1, x.x2 + 0.5 * dt * k1.x2});
    const State k3 = f({x.x1 + 0.5 * dt * k2.x1, x.x2 + 0.5 * dt * k2.x2});
    const State k4 = f({x.x1 + dt * k3.x1, x.x2 + dt * k3.x2});
    return {{x.x1 + dt / 6.0 * (k1.x1 + 2.0 * k2.x1 + 2.0 * k3.x1 + k4.x1),
             x.x2 + dt / 6.0 * (k1.x2 + 2.0 * k2.x2 + 2.0 * k3.x2 + k4.x2)},
            c.u, d, c.clamped};
}

Trajectory simulate(const SimConfig& raw, ControlLaw law) {
    const SimConfig cfg = validate_config(raw);
    const double dt = *cfg.dt;
    const double eps1 = *cfg.capture_eps1;
    const double eps2 = *cfg.capture_eps2;
    const auto n_steps = static_cast<std::uint64_t>(std::llround(cfg.t_end / dt));

    LyapunovParams lp;
    lp.gamma = cfg.params.gamma;
    lp.D = cfg.params.D;
    lp.eta = cfg.params.eta.value_or(default_eta(lp.D));
    lp.epsilon = cfg.params.epsilon.value_or(default_epsilon(lp.gamma, lp.D, lp.eta));

    const double alpha = cfg.filter_cutoff_hz > 0.0
                             ? 1.0 - std::exp(-2.0 * std::numbers::pi * cfg.filter_cutoff_hz * dt)
                             : 1.0;

    Trajectory traj;
    traj.samples.reserve(std::min<std::uint64_t>(n_steps + 2, 1u << 20));

    State x = cfg.x0;
    bool have_filter_state = false;
    double y_filt = 0.0;
    bool was_clamped = false;
    std::optional<Domain> prev_domain;

    for (std::uint64_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;

        if (!traj.captured_at && std::abs(x.x1) <= eps1 && std::abs(x.x2) <= eps2) {
            traj.captured_at = t;
            traj.events.push_back({t, EventKind::Capture});
            if (cfg.post_capture == PostCapture::Hold) {
                TrajectorySample s;
                s.t = t;
                s.state = {0.0, 0.0};
                s.u = 0.0;
                s.u_filt = have_filter_state ? y_filt + alpha * (0.0 - y_filt) : 0.0;
                s.d = eval_disturbance(cfg.disturbance, t, k);
                s.region = classify(s.state, cfg.params.gamma);
                s.v_new = 0.0;
                s.energy = 0.0;
                traj.samples.push_back(s);
                return traj;
            }
        }

        const Region region = classify(x, cfg.params.gamma);
        if (prev_domain && region.domain != *prev_domain)
            traj.events.push_back(
                {t, region.domain == Domain::C ? EventKind::EnterC : EventKind::EnterU});
        prev_domain = region.domain;

        StepOutcome out;
        try {
            out = step(x, t, k, cfg, law);
        } catch (const Error& e) {
            if (e.code() != Errc::NonFiniteState) throw;
            traj.events.push_back({t, EventKind::Diverged});
            return traj;
        }
        if (out.clamped && !was_clamped) traj.events.push_back({t, EventKind::DeltaClamped});
        was_clamped = out.clamped;

        y_filt = have_filter_state ? y_filt + alpha * (out.u - y_filt) : out.u;
        have_filter_state = true;

        TrajectorySample s;
        s.t = t;
        s.state = x;
        s.u = out.u;
        s.u_filt = y_filt;
        s.d = out.d;
        s.region = region;
        s.v_new = v_new(x, lp);
        s.energy = energy(x, cfg.params.gamma);
        traj.samples.push_back(s);

        if (!out.next.finite()) {
            traj.events.push_back({t + dt, EventKind::Diverged});
            return traj;
        }
        x = out.next;
    }
    return traj;
}

std::vector<double> filter_control(std::span<const double> u_series, double cutoff_hz, double dt) {
    std::vector<double> out(u_series.begin(), u_series.end());
    if (out.empty() || cutoff_hz <= 0.0) return out;
    const double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz * dt);
    for (std::size_t k = 1; k < out.size(); ++k)
        out[k] = out[k - 1] + alpha * (u_series[k] - out[k - 1]);
    return out;
}

ErrorReport compare_with_analytic(const SimConfig& raw, std::optional<double> tail_margin) {
    const SimConfig cfg = validate_config(raw);
    if (!std::holds_alternative<ZeroDisturbance>(cfg.disturbance))
        throw Error(Errc::PreconditionViolated, "comparison requires the Zero disturbance");

    const double dt = *cfg.dt;
    const AnalyticSolution sol = compose_trajectory(cfg.x0, cfg.params.gamma, dt);
    const Trajectory traj = simulate(cfg, ControlLaw::Modified);

    const double margin = tail_margin.value_or(std::max(0.02, 200.0 * dt));
    const double t_cut = sol.total_time - margin;

    ErrorReport rep;
    for (const auto& s : traj.samples) {
        if (s.t > t_cut) break;
        if (traj.captured_at && s.t >= *traj.captured_at) break;
        const State ref = sol.eval_state(s.t);
        const double uref = sol.eval_control(s.t);
        const double e1 = std::abs(s.state.x1 - ref.x1);
        const double e2 = std::abs(s.state.x2 - ref.x2);
        if (std::max(e1, e2) > std::max(rep.max_x1_err, rep.max_x2_err)) rep.at_t = s.t;
        rep.max_x1_err = std::max(rep.max_x1_err, e1);
        rep.max_x2_err = std::max(rep.max_x2_err, e2);
        rep.max_u_err = std::max(rep.max_u_err, std::abs(s.u - uref));
    }
    return rep;
}

OvershootReport overshoot_check(const Trajectory& traj, double capture_eps1,
                                std::optional<double> threshold) {
    // A trajectory that starts in C is treated as entering C at its first sample.
    std::optional<double> enter_c = traj.first_event(EventKind::EnterC);
    if (!enter_c && !traj.samples.empty() &&
        traj.samples.front().region.domain == Domain::C)
        enter_c = traj.samples.front().t;
    if (!enter_c) throw Error(Errc::NoCPhase, "trajectory never enters C");

    int ref_sign = 0;
    double ref_scale = 0.0;
    OvershootReport rep;
    for (const auto& s : traj.samples) {
        if (s.t < *enter_c) continue;
        if (traj.captured_at && s.t >= *traj.captured_at) break;
        if (ref_sign == 0) {
            ref_sign = sgn(s.state.x1);
            ref_scale = std::abs(s.state.x1);
            rep.threshold = threshold.value_or(std::max(capture_eps1, 1e-3 * ref_scale));
            continue;
        }
        if (sgn(s.state.x1) == -ref_sign) {
            rep.max_opposite_x1 = std::max(rep.max_opposite_x1, std::abs(s.state.x1));
            if (std::abs(s.state.x1) > rep.threshold && !rep.overshoot) {
                rep.overshoot = true;
                rep.first_violation_t = s.t;
            }
        }
    }
    return rep;
}

OvershootReport overshoot_check(const Trajectory& traj, const SimConfig& raw,
                                std::optional<double> threshold) {
    const SimConfig cfg = validate_config(raw);
    return overshoot_check(traj, *cfg.capture_eps1, threshold);
}

}  // namespace qcsmc
