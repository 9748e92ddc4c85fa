#pragma once

// Closed-form unperturbed solutions: parabolic arcs in U, harmonic arcs in
// C_a, reaching times, the disturbance-bounded U-exit bracket, and piecewise
// composition of a full trajectory to the origin.

#include <optional>

#include "qcsmc/core.hpp"

namespace qcsmc {

/// Constant-control parabola in U: x1(t) = x1(0) + x2(0) t - s*gamma*t^2/2,
/// x2(t) = x2(0) - s*gamma*t with s = sign_branch, valid on [0, t_exit].
struct ParabolicArc {
    State x0;
    double gamma = 0.0;
    int sign_branch = +1;  // +1 for quadrant I, -1 for III
    double t_exit = 0.0;   // time at which x2 reaches 0

    State eval(double t) const {
        const double s = static_cast<double>(sign_branch);
        return {x0.x1 + x0.x2 * t - s * gamma * t * t / 2.0, x0.x2 - s * gamma * t};
    }
    double control() const { return -gamma * sign_branch; }
};

/// Harmonic arc in C_a: x1(t) = -(gamma/omega^2) cos(omega t + phi) + B,
/// x2(t) = (gamma/omega) sin(omega t + phi), u(t) = gamma cos(omega t + phi).
/// `mirrored` marks arcs derived through the (x1,x2) -> (-x1,-x2) symmetry.
struct HarmonicArc {
    double B = 0.0;
    double omega = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    State x0;
    double t_reach = 0.0;
    bool mirrored = false;
};

ParabolicArc parabolic_arc(const State& x0, double gamma);

/// Requires x0 in C_a (x2 == 0 with x1 != 0, the closure boundary, is
/// accepted; it is where a U arc hands over).
HarmonicArc harmonic_params(const State& x0, double gamma);

/// State and control along the arc; t must lie in [0, t_reach].
std::pair<State, double> harmonic_eval(const HarmonicArc& arc, double t);

/// Finite reaching time of the origin from x0 in C_a, from the first-period
/// root of cos(omega t + phi) = 1:
///   T = |x1(0)| (pi - arccos(1 - x2(0)^2/(gamma |x1(0)|))) / sqrt(2 gamma |x1(0)| - x2(0)^2)
double reach_time_Ca(const State& x0, double gamma);

/// The literal printed variant with denominator sqrt(gamma|x1(0)| - x2(0)^2),
/// exposed for comparison; empty when the denominator is not real.
std::optional<double> reach_time_Ca_printed(const State& x0, double gamma);

/// T_U = |x2(0)|/gamma, the unperturbed time to reach x2 = 0 within U.
double reach_time_U(const State& x0, double gamma);

/// Bounds [|x2(0)|/(gamma+D), |x2(0)|/(gamma-D)] on the U-exit time under
/// any disturbance with sup-norm <= D.
std::pair<double, double> reach_time_U_bounds(const State& x0, const ControlParams& params);

/// Piecewise closed-form solution to the origin plus its sampled trajectory.
struct AnalyticSolution {
    std::optional<ParabolicArc> u_arc;  // present when x0 in U \ {0}
    std::optional<HarmonicArc> c_arc;   // absent only for x0 == origin
    double total_time = 0.0;
    Trajectory trajectory;

    State eval_state(double t) const;
    double eval_control(double t) const;
};

/// x0 must lie in U or C_a; throws NotCovered for C \ C_a. The sampled
/// trajectory includes the exact endpoint at total_time.
AnalyticSolution compose_trajectory(const State& x0, double gamma, double sample_dt);

}  // namespace qcsmc
