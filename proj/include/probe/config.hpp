#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "probe/experiments.hpp"

namespace probe {

struct ModesSection {
    double x_min = -12.0;
    double x_max = 12.0;
    int n_points = 2001;
    std::string potential_type = "harmonic";  // or "double_well"
    double mass = 1.0;
    double frequency = 1.0;
    double center = 0.0;
    double x_a = -10.0;
    double x_b = 10.0;
    double barrier = 1.0;
    double lapse_quadratic = 0.0;  // N(x) = 1 + c x^2
    int n_modes = 10;
};

struct InfluenceSection {
    std::vector<double> omegas = {1.0, 2.0, 3.0};
    double t_start = 0.0;
    double t_end = 6.283185307179586;
    int n_samples = 513;
    int n_trajectories = 20;
    double lambda = 1e-2;
};

struct RunConfig {
    std::string command;  // modes | influence | reduce | harvest | sweep
    std::uint64_t seed = 0;
    int threads = 0;  // 0 = hardware concurrency

    ModesSection modes;
    InfluenceSection influence;
    ReductionConfig reduce;
    HarvestConfig harvest;
    std::vector<nlohmann::json> sweep_runs;
};

/// Parse and validate a JSON config file. Unknown keys are rejected and all
/// schema violations are reported together.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& j);

}  // namespace probe
