// Scenario configuration: defaults per scenario, JSON overrides, validation.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcrelax::cli {

/// Bad invocation (unknown scenario, malformed flag). Maps to exit code 64.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Spacing { log, linear };

struct TimeGrid {
    double t_min = 0.1;  // first nonzero sample of a log grid
    double t_max = 1e5;
    int points = 200;
    Spacing spacing = Spacing::log;

    /// Starts at 0.
    std::vector<double> samples() const;
};

enum class Fault { none, half_convention };

struct ScenarioConfig {
    std::string scenario;
    std::vector<double> g0;
    std::vector<double> eps;
    std::vector<double> n_th;
    std::vector<double> gamma;
    /// Empty means auto.
    std::optional<int> cutoff;
    TimeGrid time_grid;
    std::filesystem::path output = "out";
    std::uint64_t seed = 20240611;
    /// Exact lab-frame runs of the incoherent scenarios are skipped above this n_th.
    double exact_max_n_th = 3.0;
    bool plot = false;
    bool quiet = false;
    Fault fault = Fault::none;
};

const std::vector<std::string>& scenario_names();

/// Catalog defaults; UsageError for an unknown name.
ScenarioConfig default_config(const std::string& scenario);

/// Overlays the fields present in `j` (the "scenario" key is ignored here).
void apply_json(ScenarioConfig& cfg, const nlohmann::json& j);

/// Reads a JSON config file. tcrelax::IoError when unreadable, ArgumentError when malformed.
nlohmann::json read_config_file(const std::filesystem::path& path);

/// Throws tcrelax::ArgumentError on violated invariants.
void validate(const ScenarioConfig& cfg);

/// Fully resolved configuration, as recorded in the JSON summary.
nlohmann::json to_json(const ScenarioConfig& cfg);

/// Parses "auto" or a positive integer.
std::optional<int> parse_cutoff(const std::string& text);

/// Sorted, deduplicated list from a number, an array, or {"min", "max", "points", "spacing"}.
std::vector<double> parse_range(const nlohmann::json& j, const std::string& key);

} // namespace tcrelax::cli
