#include "qcsmc/analytic.hpp"

#include <algorithm>
#include <numbers>

#include "qcsmc/controller.hpp"
#include "qcsmc/lyapunov.hpp"

namespace qcsmc {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite_state(const State& x) {
    if (!x.finite()) throw Error(Errc::NonFinite, "state is not finite");
}

/// Clamps an arccos argument that drifted past [-1, 1] by floating-point
/// noise at the C_a boundary; anything further out is a caller error.
double clamped_acos_arg(double a) {
    if (a > 1.0 + 1e-12 || a < -1.0 - 1e-12)
        throw Error(Errc::NotInCa, "arccos argument out of range");
    return std::clamp(a, -1.0, 1.0);
}

}  // namespace

ParabolicArc parabolic_arc(const State& x0, double gamma) {
    require_finite_state(x0);
    if (x0.x1 * x0.x2 < 0.0) throw Error(Errc::NotInU, "x0 is not in U");
    if (x0.x1 == 0.0 && x0.x2 == 0.0)
        throw Error(Errc::DegenerateOrigin, "no parabolic arc from the origin");
    // On the x2-axis the trajectory enters quadrant I or III immediately;
    // the branch follows sgn(x1), or sgn(x2) when starting on the axis.
    const int s = x0.x1 != 0.0 ? sgn(x0.x1) : sgn(x0.x2);
    return {x0, gamma, s, std::abs(x0.x2) / gamma};
}

HarmonicArc harmonic_params(const State& x0, double gamma) {
    require_finite_state(x0);
    const bool boundary = x0.x2 == 0.0 && x0.x1 != 0.0;
    if (!boundary) {
        const Region r = classify(x0, gamma);
        if (r.domain != Domain::C || !r.in_ca) throw Error(Errc::NotInCa, "x0 is not in C_a");
    }
    HarmonicArc arc;
    arc.gamma = gamma;
    arc.x0 = x0;
    arc.mirrored = x0.x1 < 0.0;
    const double x1 = arc.mirrored ? -x0.x1 : x0.x1;
    const double x2 = arc.mirrored ? -x0.x2 : x0.x2;
    arc.B = gamma * x1 * x1 / (2.0 * gamma * x1 - x2 * x2);
    arc.omega = std::sqrt(gamma / arc.B);
    arc.phi = kPi + std::acos(clamped_acos_arg(1.0 - x2 * x2 / (gamma * x1)));
    arc.t_reach = (2.0 * kPi - arc.phi) / arc.omega;
    return arc;
}

std::pair<State, double> harmonic_eval(const HarmonicArc& arc, double t) {
    const double slack = 1e-12 * std::max(1.0, arc.t_reach);
    if (t < -slack || t > arc.t_reach + slack)
        throw Error(Errc::OutOfWindow, "t outside the arc validity window");
    const double theta = arc.omega * t + arc.phi;
    State x{-(arc.gamma / (arc.omega * arc.omega)) * std::cos(theta) + arc.B,
            (arc.gamma / arc.omega) * std::sin(theta)};
    double u = arc.gamma * std::cos(theta);
    if (arc.mirrored) {
        x = -x;
        u = -u;
    }
    return {x, u};
}

double reach_time_Ca(const State& x0, double gamma) {
    // Equivalent to (2*pi - phi)/omega with the arc constants above.
    require_finite_state(x0);
    const bool boundary = x0.x2 == 0.0 && x0.x1 != 0.0;
    if (!boundary) {
        const Region r = classify(x0, gamma);
        if (r.domain != Domain::C || !r.in_ca) throw Error(Errc::NotInCa, "x0 is not in C_a");
    }
    const double a1 = std::abs(x0.x1);
    const double q = x0.x2 * x0.x2;
    return a1 * (kPi - std::acos(clamped_acos_arg(1.0 - q / (gamma * a1)))) /
           std::sqrt(2.0 * gamma * a1 - q);
}

std::optional<double> reach_time_Ca_printed(const State& x0, double gamma) {
    const double a1 = std::abs(x0.x1);
    const double q = x0.x2 * x0.x2;
    const double denom_sq = gamma * a1 - q;
    if (denom_sq < 0.0) return std::nullopt;
    return a1 * (kPi - std::acos(clamped_acos_arg(1.0 - q / (gamma * a1)))) / std::sqrt(denom_sq);
}

double reach_time_U(const State& x0, double gamma) {
    require_finite_state(x0);
    if (x0.x1 * x0.x2 < 0.0) throw Error(Errc::NotInU, "x0 is not in U");
    return std::abs(x0.x2) / gamma;
}

std::pair<double, double> reach_time_U_bounds(const State& x0, const ControlParams& params) {
    require_finite_state(x0);
    if (x0.x1 * x0.x2 < 0.0) throw Error(Errc::NotInU, "x0 is not in U");
    if (!(params.gamma > params.D))
        throw Error(Errc::GammaTooSmall, "bracket requires gamma > D");
    const double a2 = std::abs(x0.x2);
    return {a2 / (params.gamma + params.D), a2 / (params.gamma - params.D)};
}

State AnalyticSolution::eval_state(double t) const {
    if (u_arc && t < u_arc->t_exit) return u_arc->eval(t);
    if (c_arc) {
        const double tu = u_arc ? u_arc->t_exit : 0.0;
        if (t <= total_time) return harmonic_eval(*c_arc, t - tu).first;
    }
    return {0.0, 0.0};
}

double AnalyticSolution::eval_control(double t) const {
    if (u_arc && t < u_arc->t_exit) return u_arc->control();
    if (c_arc) {
        const double tu = u_arc ? u_arc->t_exit : 0.0;
        if (t <= total_time) return harmonic_eval(*c_arc, t - tu).second;
    }
    return 0.0;
}

AnalyticSolution compose_trajectory(const State& x0, double gamma, double sample_dt) {
    require_finite_state(x0);
    if (!(sample_dt > 0.0)) throw Error(Errc::BadConfig, "sample_dt must be positive");

    AnalyticSolution sol;
    const Region r0 = classify(x0, gamma);
    if (r0.quadrant == Quadrant::Origin) {
        sol.total_time = 0.0;
    } else if (r0.domain == Domain::U) {
        ParabolicArc pa = parabolic_arc(x0, gamma);
        sol.u_arc = pa;
        const State junction = pa.eval(pa.t_exit);
        // junction has x2 = 0 exactly by construction of t_exit
        sol.c_arc = harmonic_params({junction.x1, 0.0}, gamma);
        sol.total_time = pa.t_exit + sol.c_arc->t_reach;
    } else {
        if (!r0.in_ca)
            throw Error(Errc::NotCovered, "no closed form for x0 in C \\ C_a");
        sol.c_arc = harmonic_params(x0, gamma);
        sol.total_time = sol.c_arc->t_reach;
    }

    auto push = [&](double t) {
        TrajectorySample s;
        s.t = t;
        s.state = sol.eval_state(t);
        s.u = s.u_filt = sol.eval_control(t);
        s.d = 0.0;
        s.region = classify(s.state, gamma);
        s.energy = energy(s.state, gamma);
        s.v_new = s.energy;  // unperturbed specialization (D = eta = eps = 0)
        sol.trajectory.samples.push_back(s);
    };

    const auto n = static_cast<std::size_t>(sol.total_time / sample_dt);
    sol.trajectory.samples.reserve(n + 2);
    for (std::size_t k = 0; k <= n; ++k) push(static_cast<double>(k) * sample_dt);
    if (sol.trajectory.samples.empty() || sol.trajectory.samples.back().t < sol.total_time)
        push(sol.total_time);  // exact endpoint, where u attains +-gamma

    if (sol.u_arc && sol.c_arc)
        sol.trajectory.events.push_back({sol.u_arc->t_exit, EventKind::EnterC});
    sol.trajectory.events.push_back({sol.total_time, EventKind::Capture});
    sol.trajectory.captured_at = sol.total_time;
    return sol;
}

}  // namespace qcsmc
