#include "output.hpp"

#include "scenarios.hpp"

#include "tcrelax/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tcrelax::cli {

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add: row width does not match the columns");
    rows.push_back(std::move(row));
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << x;
    return os.str();
}

std::string render_csv(const Table& table) {
    std::ostringstream os;
    os << units_line << "\n";
    os << "# scenario: " << table.scenario << "\n";
    os << "# columns: ";
    for (std::size_t k = 0; k < table.columns.size(); ++k) os << (k ? "," : "") << table.columns[k].name;
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_number(row[k]);
        os << "\n";
    }
    return os.str();
}

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fixed(double x, int digits = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << x;
    return os.str();
}

std::string tick_label(double v) {
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double map(double v) const { return log ? std::log10(v) : v; }
    double unit(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const double v : values) {
        if (!std::isfinite(v) || (log && !(v > 0.0))) continue;
        lo = std::min(lo, a.map(v));
        hi = std::max(hi, a.map(v));
    }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    if (log) {
        lo = std::floor(lo);
        hi = std::ceil(hi);
    } else {
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    a.lo = lo;
    a.hi = hi;
    return a;
}

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

} // namespace

std::string render_svg(const Plot& plot) {
    const double width = 720, height = 480, left = 80, right = 200, top = 40, bottom = 60;
    const double pw = width - left - right, ph = height - top - bottom;
    std::vector<double> xs, ys;
    for (const Series& s : plot.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    const Axis ax = fit_axis(xs, plot.log_x), ay = fit_axis(ys, plot.log_y);
    const auto px = [&](double v) { return left + ax.unit(v) * pw; };
    const auto py = [&](double v) { return top + (1.0 - ay.unit(v)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape_xml(plot.title)
       << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const auto ticks = [](const Axis& a) {
        std::vector<double> t;
        if (a.log) {
            const int step = std::max(1, static_cast<int>(std::ceil((a.hi - a.lo) / 8.0)));
            for (int e = static_cast<int>(a.lo); e <= static_cast<int>(a.hi); e += step) t.push_back(std::pow(10.0, e));
        } else {
            for (int k = 0; k <= 5; ++k) t.push_back(a.lo + (a.hi - a.lo) * k / 5.0);
        }
        return t;
    };
    for (const double t : ticks(ax)) {
        const double x = px(t);
        os << "<line x1=\"" << fixed(x) << "\" y1=\"" << top + ph << "\" x2=\"" << fixed(x) << "\" y2=\"" << top + ph + 5
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << fixed(x) << "\" y=\"" << top + ph + 20 << "\" text-anchor=\"middle\">" << tick_label(t)
           << "</text>\n";
    }
    for (const double t : ticks(ay)) {
        const double y = py(t);
        os << "<line x1=\"" << left - 5 << "\" y1=\"" << fixed(y) << "\" x2=\"" << left << "\" y2=\"" << fixed(y)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << fixed(y + 4) << "\" text-anchor=\"end\">" << tick_label(t)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">" << escape_xml(plot.x_label)
       << "</text>\n";
    os << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << top + ph / 2
       << ")\">" << escape_xml(plot.y_label) << "</text>\n";

    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const Series& ser = plot.series[s];
        const char* color = palette[s % (sizeof(palette) / sizeof(*palette))];
        std::ostringstream path;
        bool pen_down = false;
        for (std::size_t k = 0; k < ser.x.size() && k < ser.y.size(); ++k) {
            const double x = ser.x[k], y = ser.y[k];
            const bool drawable = std::isfinite(x) && std::isfinite(y) && (!plot.log_x || x > 0.0) && (!plot.log_y || y > 0.0);
            if (!drawable) {
                pen_down = false;
                continue;
            }
            path << (pen_down ? " L" : " M") << fixed(px(x)) << "," << fixed(py(y));
            pen_down = true;
        }
        os << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(s);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
           << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << escape_xml(ser.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    out.close();
    if (!out) throw IoError("write failed for " + path.string());
}

std::string render_schema() {
    std::ostringstream os;
    os << "# Output schema\n\n"
       << "Generated by `tcrelax --schema`. Every CSV file starts with three comment lines:\n\n"
       << "```\n" << units_line << "\n# scenario: <name>\n# columns: <comma-separated names>\n```\n\n"
       << "followed by one data row per line. Numbers carry 17 significant digits; `nan` marks a value that was not "
          "computed for that row (for example an exact run skipped by `exact_max_n_th`). Every row repeats the fully "
          "resolved model parameters. Rows are ordered by parameter value, then by time.\n\n"
       << "Each run also writes `<scenario>.json` (resolved configuration plus the summary numbers) and, with "
          "`--plot`, `<scenario>.svg`.\n";
    for (const std::string& name : scenario_names()) {
        os << "\n## " << name << "\n\n" << scenario_description(name) << "\n\n";
        const std::vector<Column> cols = scenario_columns(name);
        if (cols.empty()) {
            os << "No CSV output.\n";
            continue;
        }
        os << "File: `" << name << ".csv`\n\n| column | unit | meaning |\n|---|---|---|\n";
        for (const Column& c : cols) os << "| `" << c.name << "` | " << c.unit << " | " << c.meaning << " |\n";
    }
    return os.str();
}

} // namespace tcrelax::cli
