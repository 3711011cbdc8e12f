#ifndef HEUNRAD_CURVE_HPP
#define HEUNRAD_CURVE_HPP

// Sampled complex curves and their CSV / SVG renderings.

#include "error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace heunrad {

struct CurveRow {
    double coordinate = 0.0;
    double re = 0.0;
    double im = 0.0;
    double abs = 0.0;
};

struct SampledCurve {
    std::string coordinate_name = "x";
    std::string title;
    std::vector<CurveRow> rows;
    double max_err_estimate = 0.0;
};

enum class OutputFormat { CSV, SVG };

/// `coordinate,re,im,abs` header, one row per sample, 17 significant digits,
/// LF line endings.
[[nodiscard]] inline std::string to_csv(const SampledCurve& curve)
{
    if (curve.rows.empty()) {
        throw Error(ErrorCode::InvalidParameter, "refusing to write an empty curve");
    }
    std::string out = "coordinate,re,im,abs\n";
    for (const auto& row : curve.rows) {
        out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", row.coordinate, row.re, row.im,
                           row.abs);
    }
    return out;
}

[[nodiscard]] inline SampledCurve parse_csv(std::string_view text)
{
    SampledCurve curve;
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line != "coordinate,re,im,abs") {
        throw Error(ErrorCode::IoError, "missing or malformed CSV header");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        CurveRow row;
        double* fields[] = {&row.coordinate, &row.re, &row.im, &row.abs};
        std::size_t pos = 0;
        for (std::size_t f = 0; f < 4; ++f) {
            const std::size_t end = f == 3 ? line.size() : line.find(',', pos);
            if (end == std::string::npos) {
                throw Error(ErrorCode::IoError, "short CSV row: " + line);
            }
            try {
                *fields[f] = std::stod(line.substr(pos, end - pos));
            } catch (const std::exception&) {
                throw Error(ErrorCode::IoError, "bad number in CSV row: " + line);
            }
            pos = end + 1;
        }
        curve.rows.push_back(row);
    }
    return curve;
}

namespace detail {

inline std::string xml_escape(std::string_view s)
{
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

inline std::string tick_label(double v)
{
    return fmt::format("{:.4g}", std::abs(v) < 1e-12 ? 0.0 : v);
}

} // namespace detail

/// Self-contained SVG with axes, ticks, legend, and the re/im/abs polylines.
[[nodiscard]] inline std::string to_svg(const SampledCurve& curve)
{
    if (curve.rows.empty()) {
        throw Error(ErrorCode::InvalidParameter, "refusing to plot an empty curve");
    }
    constexpr double width = 960.0;
    constexpr double height = 600.0;
    constexpr double left = 80.0;
    constexpr double right = 170.0;
    constexpr double top = 60.0;
    constexpr double bottom = 60.0;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double xmin = curve.rows.front().coordinate;
    double xmax = curve.rows.back().coordinate;
    double ymin = 0.0;
    double ymax = 0.0;
    for (const auto& r : curve.rows) {
        ymin = std::min({ymin, r.re, r.im, r.abs});
        ymax = std::max({ymax, r.re, r.im, r.abs});
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

    const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * plot_w; };
    const auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * plot_h; };

    std::string svg;
    svg += fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
        "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
        width, height, width, height);
    svg += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += fmt::format("<text x=\"{:.1f}\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                       left + plot_w / 2.0, detail::xml_escape(curve.title));

    // frame, zero line, ticks
    svg += fmt::format("<rect x=\"{:.1f}\" y=\"{:.1f}\" width=\"{:.1f}\" height=\"{:.1f}\" "
                       "fill=\"none\" stroke=\"black\"/>\n",
                       left, top, plot_w, plot_h);
    if (ymin < 0.0 && ymax > 0.0) {
        svg += fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" "
                           "stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n",
                           left, py(0.0), left + plot_w, py(0.0));
    }
    constexpr int ticks = 5;
    for (int t = 0; t <= ticks; ++t) {
        const double xv = xmin + (xmax - xmin) * t / ticks;
        const double yv = ymin + (ymax - ymin) * t / ticks;
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                           "stroke=\"black\"/>\n",
                           px(xv), top + plot_h, top + plot_h + 5.0);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                           px(xv), top + plot_h + 20.0, detail::tick_label(xv));
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                           "stroke=\"black\"/>\n",
                           left - 5.0, py(yv), left);
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{}</text>\n",
                           left - 8.0, py(yv) + 4.0, detail::tick_label(yv));
    }
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n",
                       left + plot_w / 2.0, height - 15.0, detail::xml_escape(curve.coordinate_name));

    struct Series {
        const char* name;
        const char* color;
        double CurveRow::*field;
    };
    const Series series[] = {{"Re", "#1f77b4", &CurveRow::re},
                             {"Im", "#d62728", &CurveRow::im},
                             {"|.|", "#2ca02c", &CurveRow::abs}};
    int slot = 0;
    for (const auto& s : series) {
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.2\" points=\"",
                           s.color);
        bool first = true;
        for (const auto& r : curve.rows) {
            svg += fmt::format("{}{:.2f},{:.2f}", first ? "" : " ", px(r.coordinate), py(r.*s.field));
            first = false;
        }
        svg += "\"/>\n";
        const double ly = top + 20.0 + 22.0 * slot++;
        const double lx = left + plot_w + 20.0;
        svg += fmt::format("<line x1=\"{:.1f}\" y1=\"{:.1f}\" x2=\"{:.1f}\" y2=\"{:.1f}\" "
                           "stroke=\"{}\" stroke-width=\"2\"/>\n",
                           lx, ly, lx + 30.0, ly, s.color);
        svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\">{}</text>\n", lx + 38.0, ly + 4.0,
                           detail::xml_escape(s.name));
    }
    svg += "</svg>\n";
    return svg;
}

inline void write_file(const std::string& path, const std::string& contents)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw Error(ErrorCode::IoError, "write to " + path + " failed");
    }
}

/// Renders first, then writes, so an invalid curve never leaves a file behind.
inline void emit(const SampledCurve& curve, OutputFormat format, const std::string& path)
{
    const std::string body = format == OutputFormat::CSV ? to_csv(curve) : to_svg(curve);
    write_file(path, body);
}

} // namespace heunrad

#endif
