#pragma once

#include <string>

#include "probe/config.hpp"

namespace probe {

/// Exit codes: 0 success, 1 physics-gate or numerical failure (with
/// diagnostics.json in the output directory), 2 config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitPhysicsGate = 1;
inline constexpr int kExitConfigError = 2;

/// Execute a validated config, writing CSV/JSON artifacts into out_dir.
/// Identical config and seed produce byte-identical outputs.
int dispatch(const RunConfig& cfg, const std::string& out_dir);

}  // namespace probe
