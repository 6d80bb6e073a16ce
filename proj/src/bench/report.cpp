#include "simplel/bench/report.hpp"

#include "simplel/bench/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace simplel::bench
{

namespace
{

std::string fixed2(double v)
{
    if (std::isnan(v))
        return "n/a";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string general(double v)
{
    if (std::isnan(v))
        return "n/a";
    if (std::isinf(v))
        return "unbounded";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::string markdown(const ExperimentReport& report)
{
    const auto& c = report.config;
    std::ostringstream out;
    out << "# " << c.name << "\n\n";
    out << "Median efficiency ratio J = error(selected alpha) / min over the grid of error, metric "
        << metric_name(c.effective_metric()) << ", " << c.runs << " run" << (c.runs == 1 ? "" : "s")
        << " per noise level.\n\n";

    const auto medians = report.medians();
    out << "| noise |";
    for (const auto& r : c.rules)
        out << ' ' << r << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < c.rules.size(); ++i)
        out << "---:|";
    out << "\n";
    for (std::size_t i = 0; i < medians.size(); i += c.rules.size()) {
        out << "| " << noise_class_label(medians[i].cls) << " |";
        for (std::size_t j = 0; j < c.rules.size(); ++j)
            out << ' ' << fixed2(medians[i + j].median_J) << " |";
        out << "\n";
    }

    int failures = 0;
    int boundary = 0;
    for (const auto& m : medians) {
        failures += m.failures;
        boundary += m.boundary;
    }
    if (boundary > 0) {
        out << "\nSelections at a grid endpoint (no interior extremum):\n\n| noise |";
        for (const auto& r : c.rules)
            out << ' ' << r << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < c.rules.size(); ++i)
            out << "---:|";
        out << "\n";
        for (std::size_t i = 0; i < medians.size(); i += c.rules.size()) {
            out << "| " << noise_class_label(medians[i].cls) << " |";
            for (std::size_t j = 0; j < c.rules.size(); ++j)
                out << ' ' << medians[i + j].boundary << " |";
            out << "\n";
        }
    }

    out << "\nCondition constants, median per noise class (C1, C2 of the noise; D of the solution):\n\n";
    out << "| noise | C1 | C2 | D |" << (c.is_convex() ? " clamped Bregman distances |" : "") << "\n";
    out << "|---|---:|---:|---:|" << (c.is_convex() ? "---:|" : "") << "\n";
    for (NoiseClass cls : kNoiseClasses) {
        std::vector<double> c1, c2, d;
        int clamped = 0, evaluations = 0;
        for (const auto& cell : report.cells) {
            if (noise_class(cell.level) != cls)
                continue;
            c1.push_back(cell.C1);
            c2.push_back(cell.C2);
            d.push_back(cell.D);
            clamped += cell.clamped;
            evaluations += cell.bregman_evaluations;
        }
        if (c1.empty())
            continue;
        // lower_median drops non-finite entries; an unbounded constant must survive
        auto median = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            return v[(v.size() - 1) / 2];
        };
        out << "| " << noise_class_label(cls) << " | " << general(median(c1)) << " | " << general(median(c2))
            << " | " << general(median(d)) << " |";
        if (c.is_convex())
            out << ' ' << clamped << " / " << evaluations << " |";
        out << "\n";
    }

    out << "\nNotes:\n\n";
    out << "- Noise classes: small = levels up to 0.1%, medium up to 5%, large up to 20%. Levels above 20% form "
           "the separate 50% row. Each median is the lower median over all (level, seed) pairs of its class.\n";
    out << "- Alpha grid: " << report.grid.count << " geometric points on [" << general(report.grid.alpha_min)
        << ", " << general(report.grid.alpha_max) << "].";
    if (c.is_convex())
        out << " Convex runs default to a coarse grid of " << kConvexGridCount
            << " points since every point costs two FISTA solves.";
    out << "\n";
    if (c.problem.kind == ProblemKind::Radon)
        out << "- The tomography problem is a small ray-driven analogue of the toolbox operator, not the toolbox "
               "matrix itself.\n";
    if (boundary > 0)
        out << "- " << boundary << " selection" << (boundary == 1 ? "" : "s")
            << " fell back to a grid endpoint.\n";
    if (failures > 0)
        out << "- " << failures << " record" << (failures == 1 ? "" : "s")
            << " without a defined J (rule failure or zero minimum error); they are left out of the medians.\n";

    out << "\nConfiguration:\n\n```\n" << format_config(c) << "```\n";
    return out.str();
}

std::string xml_escape(const std::string& text)
{
    std::string out;
    for (char ch : text) {
        switch (ch) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
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

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

struct Panel
{
    double x0, y0, w, h;
    double xmin, xmax, ymin, ymax;

    double px(double x) const { return x0 + (xmax > xmin ? (x - xmin) / (xmax - xmin) : 0.5) * w; }
    double py(double y) const { return y0 + h - (ymax > ymin ? (y - ymin) / (ymax - ymin) : 0.5) * h; }
};

std::string coord(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void frame(std::ostringstream& out, const Panel& p, const std::string& title, const std::string& xlabel,
           const std::string& ylabel)
{
    out << "<rect x=\"" << coord(p.x0) << "\" y=\"" << coord(p.y0) << "\" width=\"" << coord(p.w) << "\" height=\""
        << coord(p.h) << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<text x=\"" << coord(p.x0 + p.w / 2) << "\" y=\"" << coord(p.y0 - 10)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    out << "<text x=\"" << coord(p.x0 + p.w / 2) << "\" y=\"" << coord(p.y0 + p.h + 32)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel << "</text>\n";
    out << "<text x=\"" << coord(p.x0 - 40) << "\" y=\"" << coord(p.y0 + p.h / 2)
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " << coord(p.x0 - 40) << ' '
        << coord(p.y0 + p.h / 2) << ")\">" << ylabel << "</text>\n";
    auto tick = [&](double v) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.1f", v);
        return std::string(buf);
    };
    out << "<text x=\"" << coord(p.x0) << "\" y=\"" << coord(p.y0 + p.h + 15) << "\" font-size=\"10\">"
        << tick(p.xmin) << "</text>\n";
    out << "<text x=\"" << coord(p.x0 + p.w) << "\" y=\"" << coord(p.y0 + p.h + 15)
        << "\" text-anchor=\"end\" font-size=\"10\">" << tick(p.xmax) << "</text>\n";
    out << "<text x=\"" << coord(p.x0 - 4) << "\" y=\"" << coord(p.y0 + p.h) << "\" text-anchor=\"end\" font-size=\"10\">"
        << tick(p.ymin) << "</text>\n";
    out << "<text x=\"" << coord(p.x0 - 4) << "\" y=\"" << coord(p.y0 + 10) << "\" text-anchor=\"end\" font-size=\"10\">"
        << tick(p.ymax) << "</text>\n";
}

void polyline(std::ostringstream& out, const Panel& p, const std::vector<double>& xs, const std::vector<double>& ys,
              const char* color)
{
    std::string points;
    auto flush = [&] {
        if (!points.empty())
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"" << points
                << "\"/>\n";
        points.clear();
    };
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
            flush();
            continue;
        }
        if (!points.empty())
            points += ' ';
        points += coord(p.px(xs[i])) + "," + coord(p.py(ys[i]));
    }
    flush();
}

void extent(const std::vector<double>& v, double& lo, double& hi)
{
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (double x : v) {
        if (std::isfinite(x)) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    if (!(lo <= hi))
        lo = hi = 0;
}

std::vector<double> log10_of(const std::vector<double>& v)
{
    std::vector<double> out;
    out.reserve(v.size());
    for (double x : v)
        out.push_back(x > 0 ? std::log10(x) : std::numeric_limits<double>::quiet_NaN());
    return out;
}

std::string svg(const ExperimentReport& report)
{
    if (!report.showcase)
        throw ParameterError("svg report needs the curves of an in-memory run");
    const Showcase& s = *report.showcase;
    const bool convex = report.config.is_convex();

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1040\" height=\"520\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"1040\" height=\"520\" fill=\"white\"/>\n";
    out << "<text x=\"520\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(report.config.name)
        << ": noise level " << format_number(s.level) << ", seed " << s.seed << "</text>\n";

    // L-curve
    const auto lx = log10_of(s.residual_norm);
    const auto ly = log10_of(s.solution_size);
    Panel left{80, 60, 380, 360, 0, 0, 0, 0};
    extent(lx, left.xmin, left.xmax);
    extent(ly, left.ymin, left.ymax);
    frame(out, left, "L-curve", "log10 residual norm", convex ? "log10 R(x)" : "log10 solution norm");
    polyline(out, left, lx, ly, "#333");

    // rule curves, each scaled to [0, 1]
    const auto ax = log10_of(s.alpha);
    Panel right{580, 60, 380, 360, 0, 0, -0.05, 1.05};
    extent(ax, right.xmin, right.xmax);
    frame(out, right, "rule functionals (scaled)", "log10 alpha", "scaled value");

    for (std::size_t r = 0; r < s.rules.size(); ++r) {
        const char* color = kPalette[r % std::size(kPalette)];
        double lo, hi;
        extent(s.rule_values[r], lo, hi);
        std::vector<double> scaled;
        for (double v : s.rule_values[r])
            scaled.push_back(hi > lo ? (v - lo) / (hi - lo) : 0.5);
        polyline(out, right, ax, scaled, color);

        const long k = s.selected_index[r];
        if (k >= 0) {
            const auto uk = static_cast<std::size_t>(k);
            out << "<circle cx=\"" << coord(right.px(ax[uk])) << "\" cy=\"" << coord(right.py(scaled[uk]))
                << "\" r=\"4\" fill=\"" << color << "\"/>\n";
            if (std::isfinite(lx[uk]) && std::isfinite(ly[uk]))
                out << "<circle cx=\"" << coord(left.px(lx[uk])) << "\" cy=\"" << coord(left.py(ly[uk]))
                    << "\" r=\"5\" fill=\"none\" stroke-width=\"2\" stroke=\"" << color << "\"/>\n";
        }
        const double ly0 = 80 + 16 * static_cast<double>(r);
        out << "<rect x=\"975\" y=\"" << coord(ly0 - 9) << "\" width=\"10\" height=\"10\" fill=\"" << color
            << "\"/>\n";
        out << "<text x=\"990\" y=\"" << coord(ly0) << "\" font-size=\"11\">" << xml_escape(s.rules[r]) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace

ReportFormat parse_report_format(const std::string& name)
{
    if (name == "markdown" || name == "md")
        return ReportFormat::Markdown;
    if (name == "csv")
        return ReportFormat::Csv;
    if (name == "svg")
        return ReportFormat::Svg;
    throw ParameterError("unknown report format '" + name + "' (expected markdown, csv or svg)");
}

std::string render_report(const ExperimentReport& report, ReportFormat format)
{
    if (report.config.rules.empty())
        throw ParameterError("report: empty rule list");
    if (report.records.empty())
        throw ParameterError("report: no records");
    switch (format) {
    case ReportFormat::Markdown:
        return markdown(report);
    case ReportFormat::Csv: {
        std::ostringstream out;
        write_raw_csv(out, report.records);
        return out.str();
    }
    case ReportFormat::Svg:
        return svg(report);
    }
    throw ParameterError("unknown report format");
}

ExperimentReport report_from_csv(const ExperimentConfig& config, std::istream& raw, std::istream& cells)
{
    config.validate();
    ExperimentReport report;
    report.config = config;
    report.grid = resolve_grid(config, *build_problem(config.problem));
    report.records = read_raw_csv(raw);
    report.cells = read_cell_csv(cells);
    return report;
}

} // namespace simplel::bench
