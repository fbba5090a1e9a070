// Artifact writers: CSV tables, JSON summaries, SVG line plots, SCHEMA.md.
#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace tcrelax::cli {

struct Column {
    std::string name;
    std::string unit;
    std::string meaning;
};

struct Table {
    std::string scenario;
    std::vector<Column> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
};

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = true;
    bool log_y = false;
    std::vector<Series> series;
};

inline constexpr const char* units_line = "# units: rates and times in units of kappa (kappa = 1); mutual information in bits";

/// 17 significant digits, "nan"/"inf" for non-finite values.
std::string format_number(double x);

std::string render_csv(const Table& table);
std::string render_svg(const Plot& plot);

/// Writes `text` to `path`, creating parent directories. tcrelax::IoError on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

/// Column documentation for every scenario.
std::string render_schema();

} // namespace tcrelax::cli
