#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mixsa/csv.hpp"

namespace mixsa::exp {

struct Series
{
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec
{
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool log_y = false;
    std::vector<double> reference_lines;  ///< horizontal dotted lines
};

/// SVG text with one polyline per series. Throws std::invalid_argument when
/// there is nothing to draw. Output depends only on the inputs.
std::string line_plot_svg(const std::vector<Series>& series, const PlotSpec& spec);

struct BoxGroup
{
    std::string label;
    std::vector<double> values;
};

/// Box plot (quartiles, whiskers at the extremes) of each group.
std::string box_plot_svg(const std::vector<BoxGroup>& groups, const PlotSpec& spec);

struct PlotRequest
{
    enum class Kind
    {
        line,
        box,
    };
    Kind kind = Kind::line;
    std::string x = "n";           ///< line: abscissa column
    std::vector<std::string> y;    ///< line: one series per column (all numeric columns but x if empty)
    std::string group = "estimator";  ///< box: grouping column
    std::string value = "kl_marginal";  ///< box: value column
    PlotSpec spec;
};

/// Renders a CSV table and writes the SVG; nothing is written on error.
void emit_plot(const CsvTable& table, const PlotRequest& request, const std::filesystem::path& out);

/// Linear interpolation quantile (type 7) of unsorted values.
double quantile(std::vector<double> values, double p);

}  // namespace mixsa::exp
