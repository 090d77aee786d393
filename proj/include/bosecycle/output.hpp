#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace bosecycle {

/// Numeric table with named columns and free-form metadata.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();

    void add_row(std::vector<double> row);
    std::vector<double> column(const std::string& name) const;
};

/// Shortest round-trip decimal form; identical input gives identical text.
std::string format_number(double v);

std::string to_csv(const Table& t);
nlohmann::ordered_json to_json(const Table& t);

void write_text(const std::string& path, const std::string& text);
void write_csv(const Table& t, const std::string& path);
void write_json(const nlohmann::ordered_json& j, const std::string& path);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_x = false;
    std::vector<SvgSeries> series;
};

/// Static line plot.
std::string render_svg(const SvgPlot& plot);
void write_svg(const SvgPlot& plot, const std::string& path);

}  // namespace bosecycle
