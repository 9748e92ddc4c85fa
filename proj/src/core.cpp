#include "qcsmc/core.hpp"

#include <algorithm>

namespace qcsmc {

double disturbance_sup_norm(const DisturbanceSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ZeroDisturbance>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, ConstantDisturbance>) {
                return std::abs(s.value);
            } else if constexpr (std::is_same_v<T, SinusoidDisturbance>) {
                return std::abs(s.amplitude);
            } else if constexpr (std::is_same_v<T, UniformRandomDisturbance>) {
                return std::abs(s.bound);
            } else {
                double m = 0.0;
                for (double v : s.values) m = std::max(m, std::abs(v));
                return m;
            }
        },
        spec);
}

namespace {

void check_disturbance(const DisturbanceSpec& spec, double D) {
    if (const auto* tab = std::get_if<TableDisturbance>(&spec)) {
        if (tab->times.size() != tab->values.size() || tab->times.empty())
            throw Error(Errc::BadTable, "disturbance table times/values length mismatch");
        for (std::size_t i = 0; i + 1 < tab->times.size(); ++i)
            if (!(tab->times[i] < tab->times[i + 1]))
                throw Error(Errc::BadTable, "disturbance table times must be strictly increasing");
        for (double t : tab->times)
            if (!std::isfinite(t)) throw Error(Errc::NonFinite, "disturbance table time not finite");
    }
    const double sup = disturbance_sup_norm(spec);
    if (!std::isfinite(sup)) throw Error(Errc::NonFinite, "disturbance bound not finite");
    if (sup > D)
        throw Error(Errc::DisturbanceExceedsBound,
                    "declared disturbance sup-norm exceeds bound D");
}

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, std::string(name) + " is not finite");
}

}  // namespace

SimConfig validate_config(SimConfig cfg, std::vector<std::string>* defaulted) {
    auto mark = [&](const char* name) {
        if (defaulted) defaulted->emplace_back(name);
    };

    require_finite(cfg.x0.x1, "x0.x1");
    require_finite(cfg.x0.x2, "x0.x2");
    require_finite(cfg.params.gamma, "gamma");
    require_finite(cfg.params.D, "D");
    require_finite(cfg.t_end, "t_end");
    require_finite(cfg.filter_cutoff_hz, "filter_cutoff_hz");

    if (cfg.params.gamma <= 0.0) throw Error(Errc::BadConfig, "gamma must be positive");
    if (cfg.params.D < 0.0) throw Error(Errc::BadConfig, "D must be non-negative");
    if (!(cfg.params.gamma > cfg.params.D))
        throw Error(Errc::GammaTooSmall, "well-posedness requires gamma > D");
    if (cfg.params.eta) {
        require_finite(*cfg.params.eta, "eta");
        if (!(*cfg.params.eta > 0.0) || !(*cfg.params.eta < cfg.params.gamma - cfg.params.D))
            throw Error(Errc::BadConfig, "eta must lie in (0, gamma - D)");
    }
    if (cfg.params.epsilon) {
        require_finite(*cfg.params.epsilon, "epsilon");
        if (!(*cfg.params.epsilon > 0.0))
            throw Error(Errc::BadConfig, "epsilon must be positive");
    }

    check_disturbance(cfg.disturbance, cfg.params.D);

    if (!cfg.dt) {
        cfg.dt = 1e-4;
        mark("dt");
    }
    require_finite(*cfg.dt, "dt");
    if (!(*cfg.dt > 0.0)) throw Error(Errc::BadConfig, "dt must be positive");
    if (!(*cfg.dt <= cfg.t_end)) throw Error(Errc::BadConfig, "dt must not exceed t_end");

    const double gamma = cfg.params.gamma;
    const double dt = *cfg.dt;
    if (!cfg.capture_eps2) {
        cfg.capture_eps2 = gamma * dt;  // x2 change per step
        mark("capture_eps2");
    }
    if (!cfg.capture_eps1) {
        cfg.capture_eps1 = gamma * dt * dt;
        mark("capture_eps1");
    }
    if (!cfg.delta_cap) {
        cfg.delta_cap = 1e3 * gamma;
        mark("delta_cap");
    }
    for (auto [v, name] : {std::pair{*cfg.capture_eps1, "capture_eps1"},
                           std::pair{*cfg.capture_eps2, "capture_eps2"},
                           std::pair{*cfg.delta_cap, "delta_cap"}}) {
        require_finite(v, name);
        if (!(v > 0.0)) throw Error(Errc::BadConfig, std::string(name) + " must be positive");
    }
    if (cfg.filter_cutoff_hz < 0.0)
        throw Error(Errc::BadConfig, "filter_cutoff_hz must be >= 0");

    return cfg;
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::EnterU: return "EnterU";
        case EventKind::EnterC: return "EnterC";
        case EventKind::Capture: return "Capture";
        case EventKind::DeltaClamped: return "DeltaClamped";
        case EventKind::Diverged: return "Diverged";
    }
    return "?";
}

const char* to_string(Domain domain) { return domain == Domain::U ? "U" : "C"; }

const char* to_string(Quadrant quadrant) {
    switch (quadrant) {
        case Quadrant::I: return "I";
        case Quadrant::II: return "II";
        case Quadrant::III: return "III";
        case Quadrant::IV: return "IV";
        case Quadrant::AxisX1: return "AxisX1";
        case Quadrant::AxisX2: return "AxisX2";
        case Quadrant::Origin: return "Origin";
    }
    return "?";
}

}  // namespace qcsmc
