#pragma once

// Fixed-step closed-loop simulation of the perturbed double integrator under
// the modified (or original) control law, with region-transition events,
// origin capture, control filtering and overshoot/error diagnostics.

#include <optional>
#include <span>
#include <vector>

#include "qcsmc/core.hpp"

namespace qcsmc {

enum class ControlLaw { Modified, Original };

struct StepOutcome {
    State next;
    double u = 0.0;
    double d = 0.0;
    bool clamped = false;
};

struct ErrorReport {
    double max_x1_err = 0.0;
    double max_x2_err = 0.0;
    double max_u_err = 0.0;
    double at_t = 0.0;  // time of the largest state deviation
};

/// Evaluates a disturbance spec at time t / step index. UniformRandom values
/// are derived from (seed, step_index) so replay does not depend on call order.
double eval_disturbance(const DisturbanceSpec& spec, double t, std::uint64_t step_index);

/// One explicit first-order step with the control held at the left endpoint.
StepOutcome step(const State& x, double t, std::uint64_t step_index, const SimConfig& cfg,
                 ControlLaw law);

/// Runs until t_end or capture (|x1| <= eps1 and |x2| <= eps2). Under Hold the
/// trajectory ends with a pinned origin sample at capture; under Chatter the
/// raw discrete dynamics continue to t_end. Emits EnterU/EnterC on domain
/// changes, DeltaClamped when the damping clamp engages, Diverged on
/// non-finite state.
Trajectory simulate(const SimConfig& cfg, ControlLaw law = ControlLaw::Modified);

/// First-order exponential smoother, alpha = 1 - exp(-2*pi*cutoff*dt).
std::vector<double> filter_control(std::span<const double> u_series, double cutoff_hz, double dt);

/// Simulates cfg (disturbance must be Zero) and compares against the composed
/// closed-form trajectory on the same grid. Samples with t beyond
/// total_time - tail_margin are excluded: there the closed-loop damping term
/// is steeply state-sensitive and the discrete system is entering its
/// chattering band. Default margin: max(0.02 s, 200*dt).
ErrorReport compare_with_analytic(const SimConfig& cfg,
                                  std::optional<double> tail_margin = std::nullopt);

struct OvershootReport {
    bool overshoot = false;
    std::optional<double> first_violation_t;
    double max_opposite_x1 = 0.0;  // largest |x1| attained on the wrong side
    double threshold = 0.0;        // the value a crossing had to exceed
};

/// Checks whether x1 strictly changes sign after the first EnterC event and
/// before capture. Terminal sliding-mode chatter flips x1 across zero at the
/// one-step scale, so the crossing must exceed
/// max(capture_eps1, 1e-3 * |x1 at the first EnterC|) to count as overshoot;
/// pass `threshold` to override. Throws NoCPhase when the trajectory never
/// enters C.
OvershootReport overshoot_check(const Trajectory& traj, double capture_eps1,
                                std::optional<double> threshold = std::nullopt);

/// Convenience overload deriving capture_eps1 from the validated config.
OvershootReport overshoot_check(const Trajectory& traj, const SimConfig& cfg,
                                std::optional<double> threshold = std::nullopt);

}  // namespace qcsmc
