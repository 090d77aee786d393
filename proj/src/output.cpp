#include "bosecycle/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bosecycle {

void Table::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) {
        throw std::invalid_argument("Table::add_row: row width differs from column count");
    }
    rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& col) const {
    const auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) {
        throw std::out_of_range("Table::column: no column '" + col + "'");
    }
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        out.push_back(r[idx]);
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string to_csv(const Table& t) {
    std::ostringstream out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        out << (c ? "," : "") << t.columns[c];
    }
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            out << (c ? "," : "") << format_number(r[c]);
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::ordered_json to_json(const Table& t) {
    nlohmann::ordered_json j;
    j["name"] = t.name;
    j["meta"] = t.meta;
    j["columns"] = t.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (double v : r) {
            if (std::isfinite(v)) {
                row.push_back(v);
            } else {
                row.push_back(format_number(v));
            }
        }
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path);
    }
    f << text;
}

void write_csv(const Table& t, const std::string& path) {
    write_text(path, to_csv(t));
}

void write_json(const nlohmann::ordered_json& j, const std::string& path) {
    write_text(path, j.dump(2) + "\n");
}

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
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

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

}  // namespace

std::string render_svg(const SvgPlot& plot) {
    constexpr double W = 640, H = 420, ml = 70, mr = 150, mt = 40, mb = 55;
    auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.y[i]) || (plot.log_x && !(s.x[i] > 0.0))) {
                continue;
            }
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) {
        xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    }
    if (xmax == xmin) {
        xmax = xmin + 1.0;
    }
    if (ymax == ymin) {
        ymax = ymin + 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    auto px = [&](double x) { return ml + (tx(x) - xmin) / (xmax - xmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fmt(W / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape_xml(plot.title) << "</text>\n";
    o << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << W - ml - mr << "\" height=\""
      << H - mt - mb << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + (xmax - xmin) * k / 4.0;
        const double xs = ml + (W - ml - mr) * k / 4.0;
        o << "<text x=\"" << fmt(xs) << "\" y=\"" << fmt(H - mb + 16) << "\" text-anchor=\"middle\">"
          << tick_label(plot.log_x ? std::pow(10.0, xv) : xv) << "</text>\n";
        const double yv = ymin + (ymax - ymin) * k / 4.0;
        o << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(py(yv) + 4) << "\" text-anchor=\"end\">"
          << tick_label(yv) << "</text>\n";
    }
    o << "<text x=\"" << fmt(ml + (W - ml - mr) / 2) << "\" y=\"" << fmt(H - 12)
      << "\" text-anchor=\"middle\">" << escape_xml(plot.xlabel) << "</text>\n";
    o << "<text transform=\"translate(16," << fmt(mt + (H - mt - mb) / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape_xml(plot.ylabel) << "</text>\n";
    for (std::size_t s = 0; s < plot.series.size(); ++s) {
        const auto& ser = plot.series[s];
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < std::min(ser.x.size(), ser.y.size()); ++i) {
            if (!std::isfinite(ser.y[i]) || (plot.log_x && !(ser.x[i] > 0.0))) {
                continue;
            }
            o << (first ? "" : " ") << fmt(px(ser.x[i])) << "," << fmt(py(ser.y[i]));
            first = false;
        }
        o << "\"/>\n";
        const double ly = mt + 14 + 18 * static_cast<double>(s);
        o << "<line x1=\"" << fmt(W - mr + 10) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(W - mr + 30)
          << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << fmt(W - mr + 35) << "\" y=\"" << fmt(ly) << "\">" << escape_xml(ser.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const SvgPlot& plot, const std::string& path) {
    write_text(path, render_svg(plot));
}

}  // namespace bosecycle
