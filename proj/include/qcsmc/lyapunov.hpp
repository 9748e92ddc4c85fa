#pragma once

// Lyapunov machinery: the region-coupled function V_new, the predecessor
// V_old, the energy function, gain thresholds, the epsilon interval,
// decrease checks along trajectories and grid maps.

#include <array>
#include <optional>
#include <vector>

#include "qcsmc/core.hpp"

namespace qcsmc {

struct LyapunovParams {
    double gamma = 0.0;
    double D = 0.0;
    double eta = 0.0;
    double epsilon = 0.0;
};

/// Throws unless gamma > D + eta and epsilon in (0, sqrt(2(gamma - D - eta))).
LyapunovParams validate_lyapunov(const LyapunovParams& p);

/// xi(x) = [sqrt(|x1|) sign(x1), x2]
std::array<double, 2> xi(const State& x);

/// V(x) = (gamma - D - eta)|x1| + eps(x) sqrt(|x1|) sign(x1) x2 + x2^2/2,
/// with eps(x) = epsilon where x1*x2 < 0 and 0 otherwise.
double v_new(const State& x, const LyapunovParams& p);

/// Predecessor function gamma|x1| + eps sqrt(|x1|) sign(x1) x2 + x2^2/2,
/// requires epsilon in (0, 2/3).
double v_old(const State& x, double gamma, double epsilon);

/// E(x) = gamma |x1| + x2^2 / 2
double energy(const State& x, double gamma);

/// gamma > D^1.5 + D + 1/2 (predecessor sufficient gain condition)
double gamma_min_old(double D);

/// gamma > 2*sqrt(2)*D^1.5 + D + 1/2 (sufficient gain condition for V_new)
double gamma_min_new(double D);

/// Admissible coupling range
/// ((2/3)(2D+eta)^1.5/(gamma-1/2-D), min(2/3, sqrt(2(gamma-D-eta)))),
/// empty when the bounds cross. Requires gamma > D + eta and gamma > 1/2 + D.
std::optional<std::pair<double, double>> epsilon_interval(double gamma, double D, double eta);

/// Defaults used when a scenario leaves eta/epsilon unset: eta =
/// 1e-3*max(1, D); epsilon = the interval midpoint when non-empty, else 0.6.
double default_eta(double D);
double default_epsilon(double gamma, double D, double eta);

struct VdotReport {
    std::vector<double> series;  // (V[k+1]-V[k])/dt, one entry per step
    bool monotone = true;
    double max_positive_jump = 0.0;  // largest checked V[k+1]-V[k]-tol excess
};

/// Finite-difference decrease check along a uniformly sampled trajectory.
/// Steps are exempt when either endpoint lies on an axis, the step crosses an
/// axis, either endpoint is inside the capture band, or the sample is
/// post-capture. Tolerance per step: 1e-9 * max(1, V[k]).
/// eps1/eps2 default to the capture-band defaults gamma*dt^2 and gamma*dt.
VdotReport vdot_along(const Trajectory& traj, const LyapunovParams& p,
                      std::optional<double> capture_eps1 = std::nullopt,
                      std::optional<double> capture_eps2 = std::nullopt);

struct GridMap {
    double x1_lo = 0.0, x1_hi = 0.0;
    double x2_lo = 0.0, x2_hi = 0.0;
    int resolution = 0;          // points per axis
    std::vector<double> values;  // row-major over x2 rows, x1 columns

    double at(int i1, int i2) const { return values[static_cast<std::size_t>(i2) * resolution + i1]; }
    double x1_at(int i1) const { return x1_lo + (x1_hi - x1_lo) * i1 / (resolution - 1); }
    double x2_at(int i2) const { return x2_lo + (x2_hi - x2_lo) * i2 / (resolution - 1); }
};

/// V_new on a uniform grid; resolution >= 2. Rows evaluate in parallel with
/// deterministic assembly.
GridMap grid_map(const LyapunovParams& p, double x1_lo, double x1_hi, double x2_lo, double x2_hi,
                 int resolution);

}  // namespace qcsmc
