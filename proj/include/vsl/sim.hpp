#pragma once

#include "vsl/config.hpp"
#include "vsl/trace.hpp"

namespace vsl {

// Runs a scenario to completion: alternates controller updates (zero-order
// hold over control_interval steps) with Godunov plant steps, recording
// snapshots every `stride` steps and aggregates every step. Deterministic:
// identical config gives a bit-identical trace.
SimTrace simulate(const ScenarioConfig& cfg);
SimTrace simulate(const Simulation& sim);

}  // namespace vsl
