#include "optotomo/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "optotomo/errors.hpp"

namespace optotomo {

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10e", value);
    return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) {
    add_row(header);
    rows_ = 0;
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw DataError("CSV row has the wrong number of columns");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += cells[i];
    }
    text_ += '\n';
    ++rows_;
}

void CsvTable::add_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    add_row(cells);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

namespace {

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt_short(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string SvgPlot::render(int width, int height) const {
    const double left = 90, right = 20, top = 40, bottom = 60;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!log_x || x > 0) && (!log_y || y > 0);
    };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            x0 = std::min(x0, tx(s.x[i]));
            x1 = std::max(x1, tx(s.x[i]));
            y0 = std::min(y0, ty(s.y[i]));
            y1 = std::max(y1, ty(s.y[i]));
        }
    }
    if (!std::isfinite(x0)) { x0 = 0; x1 = 1; y0 = 0; y1 = 1; }
    if (x1 == x0) x1 = x0 + 1;
    if (y1 == y0) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    auto px = [&](double v) { return left + (tx(v) - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return top + (1.0 - (ty(v) - y0) / (y1 - y0)) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(title) + "</text>\n";
    svg += "<rect x=\"" + fmt_short(left) + "\" y=\"" + fmt_short(top) + "\" width=\"" + fmt_short(pw) +
           "\" height=\"" + fmt_short(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    // Ticks: decades on log axes, five divisions otherwise.
    auto ticks = [](double lo, double hi, bool log) {
        std::vector<double> out;
        if (log) {
            for (double d = std::ceil(lo); d <= std::floor(hi); d += 1.0) out.push_back(d);
            if (out.size() > 12) {
                std::vector<double> thin;
                const auto stride = out.size() / 8 + 1;
                for (std::size_t i = 0; i < out.size(); i += stride) thin.push_back(out[i]);
                out = thin;
            }
        } else {
            for (int i = 0; i <= 5; ++i) out.push_back(lo + (hi - lo) * i / 5.0);
        }
        return out;
    };
    for (double t : ticks(x0, x1, log_x)) {
        const double v = log_x ? std::pow(10.0, t) : t;
        const double x = left + (t - x0) / (x1 - x0) * pw;
        svg += "<line x1=\"" + fmt_short(x) + "\" y1=\"" + fmt_short(top + ph) + "\" x2=\"" + fmt_short(x) +
               "\" y2=\"" + fmt_short(top + ph + 5) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt_short(x) + "\" y=\"" + fmt_short(top + ph + 18) +
               "\" text-anchor=\"middle\">" + fmt_short(v) + "</text>\n";
    }
    for (double t : ticks(y0, y1, log_y)) {
        const double v = log_y ? std::pow(10.0, t) : t;
        const double y = top + (1.0 - (t - y0) / (y1 - y0)) * ph;
        svg += "<line x1=\"" + fmt_short(left - 5) + "\" y1=\"" + fmt_short(y) + "\" x2=\"" + fmt_short(left) +
               "\" y2=\"" + fmt_short(y) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt_short(left - 8) + "\" y=\"" + fmt_short(y + 4) +
               "\" text-anchor=\"end\">" + fmt_short(v) + "</text>\n";
    }
    svg += "<text x=\"" + fmt_short(left + pw / 2) + "\" y=\"" + std::to_string(height - 15) +
           "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
    svg += "<text transform=\"translate(18," + fmt_short(top + ph / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";

    double legend_y = top + 16;
    for (const auto& s : series) {
        std::string points;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i])) continue;
            points += fmt_short(px(s.x[i])) + "," + fmt_short(py(s.y[i])) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"" +
               (s.dashed ? " stroke-dasharray=\"6,4\"" : "") + " points=\"" + points + "\"/>\n";
        svg += "<line x1=\"" + fmt_short(left + pw - 170) + "\" y1=\"" + fmt_short(legend_y - 4) +
               "\" x2=\"" + fmt_short(left + pw - 145) + "\" y2=\"" + fmt_short(legend_y - 4) +
               "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt_short(left + pw - 140) + "\" y=\"" + fmt_short(legend_y) + "\">" +
               escape(s.label) + "</text>\n";
        legend_y += 16;
    }
    svg += "</svg>\n";
    return svg;
}

bool RunReport::all_passed() const {
    return std::all_of(entries.begin(), entries.end(),
                       [](const ReportEntry& e) { return e.passed.value_or(true); });
}

std::string RunReport::render() const {
    std::string out = "scenario: " + scenario + "\n";
    for (const auto& e : entries) {
        char line[512];
        std::snprintf(line, sizeof line, "  %-34s %14.6e %-10s [%s]", e.name.c_str(), e.value,
                      e.unit.c_str(), e.provenance.c_str());
        out += line;
        if (e.reference) {
            std::snprintf(line, sizeof line, "  ref %.6e %s [%s]", *e.reference, e.unit.c_str(),
                          e.reference_provenance.c_str());
            out += line;
            if (!e.tolerance.empty()) out += " tol " + e.tolerance;
        } else if (!e.tolerance.empty()) {
            out += "  tol " + e.tolerance;
        }
        if (e.passed) out += *e.passed ? "  PASS" : "  FAIL";
        out += '\n';
    }
    out += all_passed() ? "overall: PASS\n" : "overall: FAIL\n";
    return out;
}

}  // namespace optotomo
