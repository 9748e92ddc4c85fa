#pragma once

// Pointwise evaluation of the modified quasi-continuous control law, the
// original-law comparison variant, and state-space region classification.

#include "qcsmc/core.hpp"

namespace qcsmc {

struct ControlOutput {
    double u = 0.0;
    double delta = 0.0;
    bool clamped = false;
};

/// Single-valued sign with sgn(0) = 0.
inline int sgn(double v) { return (v > 0.0) - (v < 0.0); }

/// Nonlinear damping term |x2| x2 / |x1|, active only where x1*x2 < 0.
/// The magnitude is clamped (sign-preserving) at delta_cap.
std::pair<double, bool> damping_delta(const State& x, double delta_cap);

/// u = -gamma*sgn(x1) - delta; damping suppressed in the I. and III. quadrants.
ControlOutput control_modified(const State& x, const ControlParams& params, double delta_cap);

/// The predecessor law: damping active in all quadrants. Undefined on the
/// x2-axis (throws UndefinedOnAxis); returns u = 0 at the origin.
ControlOutput control_original(const State& x, const ControlParams& params, double delta_cap);

/// Region taxonomy: U (x1*x2 >= 0) vs C, quadrant, and the C_a subset
/// x2^2 < 2*gamma*|x1|. The origin is in U with quadrant Origin.
Region classify(const State& x, double gamma);

}  // namespace qcsmc
