#include <doctest.h>

#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/scenarios.hpp"

#include "tcrelax/errors.hpp"

#include <fstream>
#include <sstream>

using namespace tcrelax;
using namespace tcrelax::cli;

TEST_CASE("ranges parse from numbers, arrays and range objects") {
    CHECK(parse_range(nlohmann::json(0.5), "x") == std::vector<double>{0.5});
    CHECK(parse_range(nlohmann::json::parse("[3, 1, 3, 2]"), "x") == std::vector<double>{1, 2, 3});
    const auto r = parse_range(nlohmann::json::parse(R"({"min": 1, "max": 100, "points": 3, "spacing": "log"})"), "x");
    REQUIRE(r.size() == 3);
    CHECK(r[1] == doctest::Approx(10.0));
    CHECK_THROWS_AS(parse_range(nlohmann::json("a"), "x"), ArgumentError);
    CHECK_THROWS_AS(parse_range(nlohmann::json::parse(R"({"min": 0, "max": 1, "points": 3, "spacing": "log"})"), "x"),
                    ArgumentError);
}

TEST_CASE("config overlay and validation") {
    ScenarioConfig cfg = default_config("mi-incoherent");
    apply_json(cfg, nlohmann::json::parse(R"({"params": {"g0": 0.02, "n_th": [1, 2]}, "cutoff": 12,
                                              "time_grid": {"t_max": 50, "points": 20}})"));
    CHECK(cfg.g0 == std::vector<double>{0.02});
    CHECK(cfg.n_th == std::vector<double>{1, 2});
    CHECK(cfg.cutoff == 12);
    CHECK(cfg.time_grid.samples().size() == 20);
    CHECK_NOTHROW(validate(cfg));
    CHECK_THROWS_AS(apply_json(cfg, nlohmann::json::parse(R"({"colour": 1})")), ArgumentError);
    ScenarioConfig neg = default_config("gap-incoherent");
    neg.g0 = {-0.1};
    CHECK_THROWS_AS(validate(neg), ArgumentError);
    CHECK_THROWS_AS(default_config("nope"), UsageError);
    CHECK(parse_cutoff("auto") == std::nullopt);
    CHECK(parse_cutoff("7") == 7);
    CHECK_THROWS_AS(parse_cutoff("0"), UsageError);
}

TEST_CASE("resolved config round-trips through JSON") {
    ScenarioConfig cfg = default_config("real-detector");
    ScenarioConfig back = default_config("real-detector");
    apply_json(back, to_json(cfg));
    CHECK(to_json(back) == to_json(cfg));
}

TEST_CASE("thermal cutoff") {
    CHECK(thermal_cutoff(0.0) == 8);
    CHECK(thermal_cutoff(1.0) == 14);  // 2^-14 < 1e-4 < 2^-13
    CHECK(thermal_cutoff(3.0) == 33);
}

TEST_CASE("small gap sweep is deterministic and matches the table") {
    ScenarioConfig cfg = default_config("gap-incoherent");
    cfg.g0 = {0.05};
    cfg.n_th = {0.5, 1.0};
    const ScenarioResult a = run_scenario(cfg), b = run_scenario(cfg);
    const std::string csv = render_csv(a.table);
    CHECK(csv == render_csv(b.table));
    CHECK(csv.rfind(units_line, 0) == 0);
    REQUIRE(a.table.rows.size() == 2);
    for (const auto& row : a.table.rows) {
        const double n = row[3];
        CHECK(row[7] == doctest::Approx(2.0 * n * 0.0025).epsilon(1e-12));  // gap_effective
        CHECK(row[9] < 0.05);                                              // exact vs closed form
    }
}

TEST_CASE("CSV numbers keep full precision") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("committed SCHEMA.md matches the generator") {
    std::ifstream in(TCRELAX_SCHEMA_PATH);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == render_schema());
}

TEST_CASE("every scenario has a description and unique column names") {
    for (const std::string& name : scenario_names()) {
        CHECK_FALSE(scenario_description(name).empty());
        const auto cols = scenario_columns(name);
        for (std::size_t i = 0; i < cols.size(); ++i)
            for (std::size_t j = i + 1; j < cols.size(); ++j) CHECK(cols[i].name != cols[j].name);
    }
}
