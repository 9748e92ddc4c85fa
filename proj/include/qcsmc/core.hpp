#pragma once

// Shared domain types for the quasi-continuous sliding-mode control toolkit:
// plant state, controller parameters, state-space regions, disturbance
// specifications, simulation configuration and trajectory records.

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace qcsmc {

enum class Errc {
    GammaTooSmall,
    DisturbanceExceedsBound,
    NonFinite,
    BadTable,
    BadConfig,
    NotInU,
    NotInCa,
    NotCovered,
    DegenerateOrigin,
    OutOfWindow,
    UndefinedOnAxis,
    EpsilonOutOfRange,
    NoCPhase,
    PreconditionViolated,
    NonFiniteState,
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Plant state (x1, x2) of the double integrator.
struct State {
    double x1 = 0.0;
    double x2 = 0.0;

    bool finite() const { return std::isfinite(x1) && std::isfinite(x2); }
    State operator-() const { return {-x1, -x2}; }
};

/// Control gain and disturbance bound, plus the optional Lyapunov-analysis
/// parameters eta and epsilon (defaulted during validation when absent).
struct ControlParams {
    double gamma = 0.0;
    double D = 0.0;
    std::optional<double> eta;
    std::optional<double> epsilon;
};

enum class Domain { U, C };
enum class Quadrant { I, II, III, IV, AxisX1, AxisX2, Origin };

struct Region {
    Domain domain = Domain::U;
    Quadrant quadrant = Quadrant::Origin;
    bool in_ca = false;  // meaningful only when domain == C
};

// --- Disturbance specifications -------------------------------------------

struct ZeroDisturbance {};
struct ConstantDisturbance {
    double value = 0.0;
};
struct SinusoidDisturbance {
    double amplitude = 0.0;
    double frequency_hz = 0.0;
    double phase_rad = 0.0;
};
/// Piecewise-constant per integration step, values uniform in [-bound, bound],
/// addressable by step index for deterministic replay.
struct UniformRandomDisturbance {
    double bound = 0.0;
    std::uint64_t seed = 0;
};
/// Zero-order hold over (times, values); times strictly increasing.
struct TableDisturbance {
    std::vector<double> times;
    std::vector<double> values;
};

using DisturbanceSpec = std::variant<ZeroDisturbance, ConstantDisturbance, SinusoidDisturbance,
                                     UniformRandomDisturbance, TableDisturbance>;

/// Declared sup-norm of the signal a spec produces (checked against D).
double disturbance_sup_norm(const DisturbanceSpec& spec);

enum class PostCapture { Hold, Chatter };
enum class IntegratorKind { Euler, RK4 };

struct SimConfig {
    State x0;
    ControlParams params;
    DisturbanceSpec disturbance = ZeroDisturbance{};
    std::optional<double> dt;            // default 1e-4
    double t_end = 1.0;
    std::optional<double> capture_eps1;  // default gamma*dt^2
    std::optional<double> capture_eps2;  // default gamma*dt
    std::optional<double> delta_cap;     // default 1e3*gamma
    PostCapture post_capture = PostCapture::Hold;
    double filter_cutoff_hz = 0.0;       // 0 disables
    IntegratorKind integrator = IntegratorKind::Euler;
};

/// Checks every type invariant and fills defaulted fields; idempotent.
/// When `defaulted` is given, the names of fields that were filled in are
/// appended (for provenance reporting in emitted artifacts).
SimConfig validate_config(SimConfig cfg, std::vector<std::string>* defaulted = nullptr);

// --- Trajectory records ----------------------------------------------------

struct TrajectorySample {
    double t = 0.0;
    State state;
    double u = 0.0;       // raw control
    double u_filt = 0.0;  // low-pass filtered control (== u when filter off)
    double d = 0.0;       // applied disturbance
    Region region;
    double v_new = 0.0;
    double energy = 0.0;
};

enum class EventKind { EnterU, EnterC, Capture, DeltaClamped, Diverged };

struct Event {
    double t = 0.0;
    EventKind kind = EventKind::EnterU;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<Event> events;
    std::optional<double> captured_at;

    std::optional<double> first_event(EventKind kind) const {
        for (const auto& e : events)
            if (e.kind == kind) return e.t;
        return std::nullopt;
    }
};

const char* to_string(EventKind kind);
const char* to_string(Domain domain);
const char* to_string(Quadrant quadrant);

}  // namespace qcsmc
