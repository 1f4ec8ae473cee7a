#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace optotomo {

/// Formats a double the same way on every run ("%.10e").
std::string format_number(double value);

/// Comma-separated table with a header row; LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<std::string>& cells);
    void add_row(const std::vector<double>& values);
    std::size_t rows() const { return rows_; }
    const std::string& text() const { return text_; }

private:
    std::size_t columns_;
    std::size_t rows_ = 0;
    std::string text_;
};

/// Writes `content` byte-for-byte. Throws IoError naming the path.
void write_text_file(const std::filesystem::path& path, const std::string& content);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

/// Minimal self-contained SVG line plot with optional log axes.
struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<PlotSeries> series;

    std::string render(int width = 800, int height = 500) const;
};

struct ReportEntry {
    ReportEntry() = default;
    ReportEntry(std::string name, double value, std::string unit)
        : name(std::move(name)), value(value), unit(std::move(unit)) {}

    std::string name;
    double value = 0.0;
    std::string unit;
    /// "computed" for model output, "published" for experimental reference numbers.
    std::string provenance = "computed";
    std::optional<double> reference;
    std::string reference_provenance = "published";
    std::string tolerance;
    std::optional<bool> passed;
};

struct RunReport {
    std::string scenario;
    std::vector<ReportEntry> entries;

    void add(ReportEntry entry) { entries.push_back(std::move(entry)); }
    bool all_passed() const;
    std::string render() const;
};

}  // namespace optotomo
