// Scenario catalog: each scenario turns a resolved config into a table,
// a JSON summary and optional plots.
#pragma once

#include "config.hpp"
#include "output.hpp"

#include <functional>
#include <string>
#include <vector>

namespace tcrelax::cli {

struct ScenarioResult {
    Table table;
    nlohmann::json summary;
    std::vector<Plot> plots;
    /// Human-readable report for stdout (the verify table).
    std::string console;
    int exit_code = 0;
};

using Progress = std::function<void(const std::string&)>;

std::string scenario_description(const std::string& name);

/// CSV columns of `name`; empty for scenarios without a table.
std::vector<Column> scenario_columns(const std::string& name);

ScenarioResult run_scenario(const ScenarioConfig& cfg, const Progress& progress = {});

/// Smallest cutoff whose thermal occupation tail (n/(n+1))^N drops below 1e-4, at least 8.
int thermal_cutoff(double n_th);

} // namespace tcrelax::cli
