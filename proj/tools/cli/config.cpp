#include "config.hpp"

#include "tcrelax/dynamics.hpp"
#include "tcrelax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tcrelax::cli {

namespace {

std::vector<double> spaced(double lo, double hi, int points, Spacing spacing) {
    std::vector<double> out;
    if (points == 1) return {lo};
    for (int k = 0; k < points; ++k) {
        const double f = static_cast<double>(k) / (points - 1);
        out.push_back(spacing == Spacing::log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
    out.back() = hi;
    return out;
}

Spacing parse_spacing(const nlohmann::json& j, const std::string& where) {
    const std::string s = j.get<std::string>();
    if (s == "log") return Spacing::log;
    if (s == "linear") return Spacing::linear;
    throw ArgumentError(where + ": spacing must be \"log\" or \"linear\"");
}

const char* spacing_name(Spacing s) { return s == Spacing::log ? "log" : "linear"; }

double number(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number()) throw ArgumentError(where + ": expected a number");
    return j.get<double>();
}

} // namespace

std::vector<double> TimeGrid::samples() const {
    if (spacing == Spacing::log) return log_time_grid(t_min, t_max, points - 1, true);
    return spaced(0.0, t_max, points, Spacing::linear);
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {"gap-coherent",   "second-rate-coherent", "mi-coherent", "gap-incoherent",
                                                   "mi-incoherent", "real-detector",        "verify"};
    return names;
}

ScenarioConfig default_config(const std::string& scenario) {
    const auto& names = scenario_names();
    if (std::find(names.begin(), names.end(), scenario) == names.end())
        throw UsageError("unknown scenario '" + scenario + "'");
    ScenarioConfig c;
    c.scenario = scenario;
    c.n_th = {0.0};
    c.gamma = {0.0};
    c.eps = {0.0};
    if (scenario == "gap-coherent" || scenario == "second-rate-coherent") {
        c.g0 = {0.125, 0.25, 0.5};
        c.eps = spaced(1.0, 1000.0, 7, Spacing::log);
    } else if (scenario == "mi-coherent") {
        c.g0 = {0.125, 0.25};
        c.eps = {1000.0};
        c.time_grid = {0.01, 1e8, 401, Spacing::log};
    } else if (scenario == "gap-incoherent") {
        c.g0 = {0.01, 0.1};
        c.n_th = spaced(0.1, 100.0, 10, Spacing::log);
    } else if (scenario == "mi-incoherent") {
        c.g0 = {0.01};
        c.n_th = {1.0, 3.0, 10.0, 100.0};
        c.time_grid = {0.1, 1e6, 301, Spacing::log};
    } else if (scenario == "real-detector") {
        c.g0 = {0.1};
        c.eps = {std::sqrt(10.0)};
        c.gamma = {0.0, 1e-5, 1e-4, 1e-3};
        c.time_grid = {0.1, 1e7, 301, Spacing::log};
    } else {
        c.g0 = {};
        c.eps = {};
        c.n_th = {};
        c.gamma = {};
    }
    return c;
}

std::vector<double> parse_range(const nlohmann::json& j, const std::string& key) {
    std::vector<double> out;
    if (j.is_number()) {
        out.push_back(j.get<double>());
    } else if (j.is_array()) {
        for (const auto& x : j) out.push_back(number(x, key));
    } else if (j.is_object()) {
        for (const char* k : {"min", "max", "points"})
            if (!j.contains(k)) throw ArgumentError(key + ": range object needs min, max and points");
        const double lo = number(j.at("min"), key + ".min");
        const double hi = number(j.at("max"), key + ".max");
        if (!j.at("points").is_number_integer()) throw ArgumentError(key + ".points: expected an integer");
        const int points = j.at("points").get<int>();
        const Spacing sp = j.contains("spacing") ? parse_spacing(j.at("spacing"), key) : Spacing::log;
        if (points < 1) throw ArgumentError(key + ": points must be >= 1");
        if (!(hi >= lo)) throw ArgumentError(key + ": max must be >= min");
        if (sp == Spacing::log && !(lo > 0.0)) throw ArgumentError(key + ": log spacing needs min > 0");
        out = spaced(lo, hi, points, sp);
    } else {
        throw ArgumentError(key + ": expected a number, an array or a range object");
    }
    for (const double x : out)
        if (!std::isfinite(x)) throw ArgumentError(key + ": non-finite value");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<int> parse_cutoff(const std::string& text) {
    if (text == "auto") return std::nullopt;
    std::size_t used = 0;
    int value = 0;
    try {
        value = std::stoi(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || value < 1) throw UsageError("--cutoff expects 'auto' or a positive integer, got '" + text + "'");
    return value;
}

void apply_json(ScenarioConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw ArgumentError("config: top level must be an object");
    static const std::vector<std::string> known = {"scenario", "params", "cutoff", "time_grid", "output", "seeds", "seed",
                                                   "exact_max_n_th", "plot", "quiet"};
    for (const auto& [k, v] : j.items())
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ArgumentError("config: unknown key '" + k + "'");

    if (j.contains("params")) {
        const auto& p = j.at("params");
        if (!p.is_object()) throw ArgumentError("config.params: expected an object");
        for (const auto& [k, v] : p.items()) {
            if (k == "g0") cfg.g0 = parse_range(v, "params.g0");
            else if (k == "eps") cfg.eps = parse_range(v, "params.eps");
            else if (k == "n_th") cfg.n_th = parse_range(v, "params.n_th");
            else if (k == "gamma") cfg.gamma = parse_range(v, "params.gamma");
            else if (k == "kappa") {
                // Units are fixed by kappa = 1; the key is accepted so resolved configs read back.
                if (parse_range(v, "params.kappa") != std::vector<double>{1.0})
                    throw ArgumentError("config.params.kappa: rates are in units of kappa, so kappa must be 1");
            } else throw ArgumentError("config.params: unknown parameter '" + k + "'");
        }
    }
    if (j.contains("cutoff")) {
        const auto& c = j.at("cutoff");
        if (c.is_string()) {
            if (c.get<std::string>() != "auto") throw ArgumentError("config.cutoff: expected \"auto\" or a positive integer");
            cfg.cutoff.reset();
        } else if (c.is_number_integer() && c.get<int>() >= 1) {
            cfg.cutoff = c.get<int>();
        } else {
            throw ArgumentError("config.cutoff: expected \"auto\" or a positive integer");
        }
    }
    if (j.contains("time_grid")) {
        const auto& g = j.at("time_grid");
        if (!g.is_object()) throw ArgumentError("config.time_grid: expected an object");
        for (const auto& [k, v] : g.items()) {
            if (k == "t_max") cfg.time_grid.t_max = number(v, "time_grid.t_max");
            else if (k == "t_min") cfg.time_grid.t_min = number(v, "time_grid.t_min");
            else if (k == "points") {
                if (!v.is_number_integer()) throw ArgumentError("config.time_grid.points: expected an integer");
                cfg.time_grid.points = v.get<int>();
            } else if (k == "spacing") cfg.time_grid.spacing = parse_spacing(v, "time_grid");
            else throw ArgumentError("config.time_grid: unknown key '" + k + "'");
        }
    }
    if (j.contains("output")) {
        if (!j.at("output").is_string()) throw ArgumentError("config.output: expected a path string");
        cfg.output = j.at("output").get<std::string>();
    }
    for (const char* k : {"seeds", "seed"})
        if (j.contains(k)) {
            if (!j.at(k).is_number_unsigned()) throw ArgumentError(std::string("config.") + k + ": expected a nonnegative integer");
            cfg.seed = j.at(k).get<std::uint64_t>();
        }
    if (j.contains("exact_max_n_th")) cfg.exact_max_n_th = number(j.at("exact_max_n_th"), "exact_max_n_th");
    if (j.contains("plot")) cfg.plot = j.at("plot").get<bool>();
    if (j.contains("quiet")) cfg.quiet = j.at("quiet").get<bool>();
}

nlohmann::json read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ArgumentError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.scenario == "verify") return;
    const auto require = [](const std::vector<double>& v, const char* name, bool positive) {
        if (v.empty()) throw ArgumentError(std::string("config: range ") + name + " is empty");
        for (const double x : v)
            if (positive ? !(x > 0.0) : !(x >= 0.0))
                throw ArgumentError(std::string("config: ") + name + (positive ? " must be > 0" : " must be >= 0"));
    };
    require(cfg.g0, "g0", false);
    require(cfg.n_th, "n_th", false);
    require(cfg.gamma, "gamma", false);
    const bool coherent = cfg.scenario.find("coherent") != std::string::npos && cfg.scenario.find("incoherent") == std::string::npos;
    require(cfg.eps, "eps", coherent);
    if (!(cfg.time_grid.t_max > 0.0)) throw ArgumentError("config: time_grid.t_max must be > 0");
    if (cfg.time_grid.points < 2) throw ArgumentError("config: time_grid.points must be >= 2");
    if (cfg.time_grid.spacing == Spacing::log && !(cfg.time_grid.t_min > 0.0 && cfg.time_grid.t_min < cfg.time_grid.t_max))
        throw ArgumentError("config: log time grid needs 0 < t_min < t_max");
    if (cfg.cutoff && *cfg.cutoff < 2) throw ArgumentError("config: cutoff must be >= 2");
}

nlohmann::json to_json(const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["scenario"] = cfg.scenario;
    j["params"] = {{"g0", cfg.g0}, {"eps", cfg.eps}, {"n_th", cfg.n_th}, {"gamma", cfg.gamma}, {"kappa", 1.0}};
    j["cutoff"] = cfg.cutoff ? nlohmann::json(*cfg.cutoff) : nlohmann::json("auto");
    j["time_grid"] = {{"t_min", cfg.time_grid.t_min},
                      {"t_max", cfg.time_grid.t_max},
                      {"points", cfg.time_grid.points},
                      {"spacing", spacing_name(cfg.time_grid.spacing)}};
    j["output"] = cfg.output.generic_string();
    j["seeds"] = cfg.seed;
    j["exact_max_n_th"] = cfg.exact_max_n_th;
    return j;
}

} // namespace tcrelax::cli
