#include "mixsa/exp/plot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace mixsa::exp {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 160.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s)
{
    std::string out;
    for (char ch : s)
    {
        switch (ch)
        {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

struct Axis
{
    double lo;
    double hi;

    static Axis around(double lo, double hi)
    {
        if (!(hi > lo))
        {
            const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
            return {lo - pad, hi + pad};
        }
        const double pad = 0.05 * (hi - lo);
        return {lo - pad, hi + pad};
    }
};

class Canvas
{
public:
    Canvas(const PlotSpec& spec, Axis x, Axis y) : spec_(spec), x_(x), y_(y)
    {
        out_ = fmt::format(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
            "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
            kWidth, kHeight);
        out_ += fmt::format("<text x=\"{:.1f}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
                            kLeft + plot_w() / 2.0, escape(spec.title));
        out_ += fmt::format(
            "<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" fill=\"none\" stroke=\"black\"/>\n",
            kLeft, kTop, plot_w(), plot_h());
        for (int i = 0; i <= 4; ++i)
        {
            const double v = y_.lo + (y_.hi - y_.lo) * i / 4.0;
            const double py = py_of(v);
            out_ += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"end\" font-size=\"11\">{}</text>\n",
                                kLeft - 6.0, py + 4.0, tick(spec.log_y ? std::pow(10.0, v) : v));
        }
        out_ += fmt::format(
            "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
            kLeft + plot_w() / 2.0, kHeight - 14.0, escape(spec.xlabel));
        out_ += fmt::format(
            "<text x=\"18\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 {:.1f})\">{}</text>\n",
            kTop + plot_h() / 2.0, kTop + plot_h() / 2.0, escape(spec.ylabel));
    }

    static double plot_w() { return kWidth - kLeft - kRight; }
    static double plot_h() { return kHeight - kTop - kBottom; }
    double px_of(double x) const { return kLeft + (x - x_.lo) / (x_.hi - x_.lo) * plot_w(); }
    double py_of(double y) const { return kTop + (y_.hi - y) / (y_.hi - y_.lo) * plot_h(); }

    static std::string tick(double v) { return fmt::format("{:.4g}", v); }

    void x_ticks()
    {
        for (int i = 0; i <= 4; ++i)
        {
            const double v = x_.lo + (x_.hi - x_.lo) * i / 4.0;
            out_ += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"11\">{}</text>\n",
                                px_of(v), kTop + plot_h() + 16.0, tick(v));
        }
    }

    void add(const std::string& s) { out_ += s; }
    std::string finish() { return out_ + "</svg>\n"; }

private:
    const PlotSpec& spec_;
    Axis x_;
    Axis y_;
    std::string out_;
};

double transform_y(double y, bool log_y)
{
    if (!log_y)
    {
        return y;
    }
    return y > 0.0 ? std::log10(y) : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double quantile(std::vector<double> values, double p)
{
    if (values.empty())
    {
        throw std::invalid_argument("quantile of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::string line_plot_svg(const std::vector<Series>& series, const PlotSpec& spec)
{
    double xlo = std::numeric_limits<double>::infinity();
    double xhi = -xlo;
    double ylo = xlo;
    double yhi = -xlo;
    std::size_t points = 0;
    for (const auto& s : series)
    {
        if (s.x.size() != s.y.size())
        {
            throw std::invalid_argument(fmt::format("series '{}': x and y lengths differ", s.label));
        }
        for (std::size_t i = 0; i < s.x.size(); ++i)
        {
            const double y = transform_y(s.y[i], spec.log_y);
            if (!std::isfinite(s.x[i]) || !std::isfinite(y))
            {
                continue;
            }
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
            ++points;
        }
    }
    if (points == 0)
    {
        throw std::invalid_argument("line plot: empty trace, nothing to draw");
    }
    for (double r : spec.reference_lines)
    {
        const double y = transform_y(r, spec.log_y);
        if (std::isfinite(y))
        {
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    Canvas canvas(spec, Axis::around(xlo, xhi), Axis::around(ylo, yhi));
    canvas.x_ticks();
    for (double r : spec.reference_lines)
    {
        const double y = transform_y(r, spec.log_y);
        if (!std::isfinite(y))
        {
            continue;
        }
        canvas.add(fmt::format(
            "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n",
            kLeft, canvas.py_of(y), kLeft + Canvas::plot_w(), canvas.py_of(y)));
    }
    for (std::size_t k = 0; k < series.size(); ++k)
    {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
        {
            const double y = transform_y(s.y[i], spec.log_y);
            if (!std::isfinite(s.x[i]) || !std::isfinite(y))
            {
                continue;
            }
            pts += fmt::format("{}{:.2f},{:.2f}", pts.empty() ? "" : " ", canvas.px_of(s.x[i]), canvas.py_of(y));
        }
        canvas.add(fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"{}\"/>\n",
                               color, pts));
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
        canvas.add(fmt::format(
            "<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" stroke=\"{}\" stroke-width=\"2\"/>"
            "<text x=\"{:.1f}\" y=\"{:.1f}\" font-size=\"11\">{}</text>\n",
            kWidth - kRight + 10.0, ly, kWidth - kRight + 30.0, ly, color, kWidth - kRight + 36.0, ly + 4.0,
            escape(s.label)));
    }
    return canvas.finish();
}

std::string box_plot_svg(const std::vector<BoxGroup>& groups, const PlotSpec& spec)
{
    double ylo = std::numeric_limits<double>::infinity();
    double yhi = -ylo;
    std::vector<std::vector<double>> clean(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        for (double v : groups[g].values)
        {
            const double y = transform_y(v, spec.log_y);
            if (std::isfinite(y))
            {
                clean[g].push_back(y);
                ylo = std::min(ylo, y);
                yhi = std::max(yhi, y);
            }
        }
    }
    if (!std::isfinite(ylo))
    {
        throw std::invalid_argument("box plot: no finite values to draw");
    }
    const auto m = static_cast<double>(groups.size());
    Canvas canvas(spec, Axis{0.0, m}, Axis::around(ylo, yhi));
    for (std::size_t g = 0; g < groups.size(); ++g)
    {
        const double cx = canvas.px_of(static_cast<double>(g) + 0.5);
        const double half = 0.25 * Canvas::plot_w() / m;
        canvas.add(fmt::format(
            "<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\" font-size=\"12\">{}</text>\n", cx,
            kTop + Canvas::plot_h() + 18.0, escape(groups[g].label)));
        if (clean[g].empty())
        {
            continue;
        }
        const char* color = kPalette[g % std::size(kPalette)];
        const double q0 = canvas.py_of(quantile(clean[g], 0.0));
        const double q1 = canvas.py_of(quantile(clean[g], 0.25));
        const double q2 = canvas.py_of(quantile(clean[g], 0.5));
        const double q3 = canvas.py_of(quantile(clean[g], 0.75));
        const double q4 = canvas.py_of(quantile(clean[g], 1.0));
        canvas.add(fmt::format(
            "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n"
            "<line x1=\"{0:.2f}\" y1=\"{3:.2f}\" x2=\"{0:.2f}\" y2=\"{4:.2f}\" stroke=\"black\"/>\n"
            "<rect x=\"{5:.2f}\" y=\"{6:.2f}\" width=\"{7:.2f}\" height=\"{8:.2f}\" fill=\"{9}\" fill-opacity=\"0.35\" stroke=\"black\"/>\n"
            "<line x1=\"{5:.2f}\" y1=\"{10:.2f}\" x2=\"{11:.2f}\" y2=\"{10:.2f}\" stroke=\"black\" stroke-width=\"2\"/>\n",
            cx, q4, q3, q1, q0, cx - half, q3, 2.0 * half, q1 - q3, color, q2, cx + half));
    }
    return canvas.finish();
}

void emit_plot(const CsvTable& table, const PlotRequest& request, const std::filesystem::path& out)
{
    if (table.rows.empty())
    {
        throw std::invalid_argument("plot: the CSV has no data rows");
    }
    std::string svg;
    if (request.kind == PlotRequest::Kind::line)
    {
        const auto x = table.numeric_column(request.x);
        std::vector<std::string> ys = request.y;
        if (ys.empty())
        {
            for (const auto& h : table.header)
            {
                if (h != request.x && h != "rep_id")
                {
                    ys.push_back(h);
                }
            }
        }
        std::vector<Series> series;
        for (const auto& name : ys)
        {
            series.push_back({name, x, table.numeric_column(name)});
        }
        svg = line_plot_svg(series, request.spec);
    }
    else
    {
        const auto gi = table.column(request.group);
        const auto values = table.numeric_column(request.value);
        std::vector<BoxGroup> groups;
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < table.rows.size(); ++i)
        {
            const auto& key = table.rows[i][gi];
            auto [it, inserted] = index.emplace(key, groups.size());
            if (inserted)
            {
                groups.push_back({key, {}});
            }
            groups[it->second].values.push_back(values[i]);
        }
        svg = box_plot_svg(groups, request.spec);
    }
    write_text(out, svg);
}

}  // namespace mixsa::exp
