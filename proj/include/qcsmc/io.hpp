#pragma once

// Scenario-file parsing and the CSV/JSON artifact writers shared by the CLI
// and the test suites. All floating-point output uses 17 significant digits
// so emitted files round-trip exactly and golden-file comparisons are stable.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcsmc/core.hpp"

namespace qcsmc {

/// Parses a scenario JSON object (keys: x0, gamma, D, eta, epsilon, dt,
/// t_end, disturbance, capture, delta_cap, post_capture, filter_cutoff_hz,
/// integrator). Unknown keys are rejected so typos surface as errors.
SimConfig config_from_json(const nlohmann::json& j);
SimConfig load_config(const std::string& path);

/// Effective configuration after validation, with a `provenance` object
/// marking which fields were defaulted rather than user-assigned.
nlohmann::json config_to_json(const SimConfig& validated,
                              const std::vector<std::string>& defaulted = {});

nlohmann::json disturbance_to_json(const DisturbanceSpec& spec);
DisturbanceSpec disturbance_from_json(const nlohmann::json& j);

std::string format_double(double v);  // %.17g

/// Header: t,x1,x2,u,u_filt,d,region,in_ca,v_new,energy
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Sidecar with events, capture time and the echoed effective config.
nlohmann::json trajectory_sidecar(const Trajectory& traj, const nlohmann::json& effective_config);

}  // namespace qcsmc
