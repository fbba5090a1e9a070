#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/scenarios.hpp"

#include "tcrelax/diagnostics.hpp"
#include "tcrelax/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using namespace tcrelax;
using namespace tcrelax::cli;

enum Exit { ok = 0, verify_failed = 1, invalid = 2, numerical = 3, usage = 64 };

struct Flags {
    std::string scenario;
    std::string config;
    std::string out;
    std::string cutoff;
    std::string schema;
    std::string fault;
    bool plot = false;
    bool quiet = false;
};

ScenarioConfig resolve(const Flags& f) {
    nlohmann::json file;
    if (!f.config.empty()) file = read_config_file(f.config);
    std::string name = f.scenario;
    if (name.empty() && file.is_object() && file.contains("scenario")) {
        if (!file["scenario"].is_string()) throw ArgumentError("config: 'scenario' must be a string");
        name = file["scenario"].get<std::string>();
    }
    if (name.empty()) throw UsageError("no scenario given (use --scenario or a config file with \"scenario\")");
    ScenarioConfig cfg = default_config(name);
    if (!file.is_null()) apply_json(cfg, file);
    if (!f.out.empty()) cfg.output = f.out;
    if (!f.cutoff.empty()) cfg.cutoff = parse_cutoff(f.cutoff);
    if (f.plot) cfg.plot = true;
    if (f.quiet) cfg.quiet = true;
    if (f.fault == "half-convention") cfg.fault = Fault::half_convention;
    validate(cfg);
    return cfg;
}

int run(const Flags& f) {
    if (!f.schema.empty()) {
        write_file(f.schema, render_schema());
        if (f.scenario.empty() && f.config.empty()) return ok;
    }
    const ScenarioConfig cfg = resolve(f);
    if (cfg.quiet) diag::set_sink({});
    const Progress progress = cfg.quiet ? Progress{} : Progress([](const std::string& s) { std::cerr << s << "\n"; });

    ScenarioResult res = run_scenario(cfg, progress);

    nlohmann::json doc = {{"config", to_json(cfg)}, {"summary", res.summary}};
    const std::filesystem::path dir = cfg.output;
    if (!res.table.columns.empty()) write_file(dir / (cfg.scenario + ".csv"), render_csv(res.table));
    write_file(dir / (cfg.scenario + ".json"), doc.dump(2) + "\n");
    if (cfg.plot)
        for (std::size_t k = 0; k < res.plots.size(); ++k)
            write_file(dir / (cfg.scenario + (k ? "-" + std::to_string(k) : "") + ".svg"), render_svg(res.plots[k]));
    write_file(dir / "SCHEMA.md", render_schema());

    if (!res.console.empty()) std::cout << res.console;
    else if (!cfg.quiet) std::cout << "wrote " << (dir / cfg.scenario).string() << ".{csv,json}\n";
    return res.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Liouvillian spectra and atomic mutual information for two atoms in a driven or thermal cavity"};
    Flags f;
    app.add_option("--scenario", f.scenario, "Scenario name: " + [] {
        std::string s;
        for (const auto& n : scenario_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }());
    app.add_option("--config", f.config, "JSON config file");
    app.add_option("--out", f.out, "Output directory (default: out)");
    app.add_flag("--plot", f.plot, "Also write SVG plots");
    app.add_option("--cutoff", f.cutoff, "Fock cutoff N, or auto");
    app.add_flag("--quiet", f.quiet, "Suppress progress and warnings");
    app.add_option("--schema", f.schema, "Write the CSV column documentation to FILE");
    app.add_option("--inject-fault", f.fault, "Negative control")
        ->check(CLI::IsMember({"half-convention"}))
        ->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        return run(f);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.category() == Error::Category::numerical ? numerical : invalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical;
    }
}
