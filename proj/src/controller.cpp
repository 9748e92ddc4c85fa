#include "qcsmc/controller.hpp"

namespace qcsmc {

std::pair<double, bool> damping_delta(const State& x, double delta_cap) {
    if (x.x1 * x.x2 >= 0.0) return {0.0, false};
    // x1 != 0 here: x1 == 0 implies x1*x2 == 0 and the branch above.
    double delta = std::abs(x.x2) * x.x2 / std::abs(x.x1);
    if (std::abs(delta) > delta_cap) return {std::copysign(delta_cap, delta), true};
    return {delta, false};
}

ControlOutput control_modified(const State& x, const ControlParams& params, double delta_cap) {
    auto [delta, clamped] = damping_delta(x, delta_cap);
    return {-params.gamma * sgn(x.x1) - delta, delta, clamped};
}

ControlOutput control_original(const State& x, const ControlParams& params, double delta_cap) {
    if (x.x1 == 0.0) {
        if (x.x2 != 0.0)
            throw Error(Errc::UndefinedOnAxis, "original law is undefined on the x2-axis");
        return {0.0, 0.0, false};
    }
    double delta = std::abs(x.x2) * x.x2 / std::abs(x.x1);
    bool clamped = std::abs(delta) > delta_cap;
    if (clamped) delta = std::copysign(delta_cap, delta);
    return {-params.gamma * sgn(x.x1) - delta, delta, clamped};
}

Region classify(const State& x, double gamma) {
    Region r;
    if (x.x1 == 0.0 && x.x2 == 0.0) {
        r.domain = Domain::U;
        r.quadrant = Quadrant::Origin;
        return r;
    }
    if (x.x2 == 0.0) {
        r.domain = Domain::U;
        r.quadrant = Quadrant::AxisX1;
        return r;
    }
    if (x.x1 == 0.0) {
        r.domain = Domain::U;  // x1*x2 == 0
        r.quadrant = Quadrant::AxisX2;
        return r;
    }
    const bool p1 = x.x1 > 0.0;
    const bool p2 = x.x2 > 0.0;
    if (p1 == p2) {
        r.domain = Domain::U;
        r.quadrant = p1 ? Quadrant::I : Quadrant::III;
    } else {
        r.domain = Domain::C;
        r.quadrant = p1 ? Quadrant::IV : Quadrant::II;
        r.in_ca = x.x2 * x.x2 < 2.0 * gamma * std::abs(x.x1);
    }
    return r;
}

}  // namespace qcsmc
