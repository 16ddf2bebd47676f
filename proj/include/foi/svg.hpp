#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "foi/cluster.hpp"
#include "foi/error.hpp"
#include "foi/rescale.hpp"

namespace foi {

namespace detail {

inline const char* kClusterPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#ad494a",
};
inline constexpr int kPaletteSize = 12;

enum class GlyphShape { Circle, Square, Triangle, Diamond };

inline std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c); break;
        }
    }
    return out;
}

inline void emit_glyph(std::string& svg, GlyphShape shape, double x, double y, const char* color) {
    switch (shape) {
        case GlyphShape::Circle:
            svg += "<circle cx=\"" + fmt2(x) + "\" cy=\"" + fmt2(y) + "\" r=\"4\" fill=\"" + color + "\"/>\n";
            break;
        case GlyphShape::Square:
            svg += "<rect x=\"" + fmt2(x - 3.5) + "\" y=\"" + fmt2(y - 3.5) +
                   "\" width=\"7\" height=\"7\" fill=\"" + color + "\"/>\n";
            break;
        case GlyphShape::Triangle:
            svg += "<polygon points=\"" + fmt2(x) + "," + fmt2(y - 4.5) + " " + fmt2(x - 4.0) + "," +
                   fmt2(y + 3.5) + " " + fmt2(x + 4.0) + "," + fmt2(y + 3.5) + "\" fill=\"" + color +
                   "\"/>\n";
            break;
        case GlyphShape::Diamond:
            svg += "<polygon points=\"" + fmt2(x) + "," + fmt2(y - 5.0) + " " + fmt2(x + 5.0) + "," +
                   fmt2(y) + " " + fmt2(x) + "," + fmt2(y + 5.0) + " " + fmt2(x - 5.0) + "," + fmt2(y) +
                   "\" fill=\"" + color + "\"/>\n";
            break;
    }
}

struct PanelGeometry {
    double origin_x, origin_y, size;

    double map_x(double v) const { return origin_x + (v - 1.0) / 6.0 * size; }
    double map_y(double v) const { return origin_y + size - (v - 1.0) / 6.0 * size; }
};

} // namespace detail

/// Renders the two cluster scatter panels (F against O, F against I) as a
/// self-contained SVG string. Axes always span the full 1-7 scale, each
/// cluster gets its own color/shape glyph, and output is byte-stable for
/// identical input.
inline std::string render_clusters_svg(const FoiIndices& indices, const ClusterAssignment& assignment) {
    if (indices.countries != assignment.labels)
        throw Error(ErrorCode::InvalidArgument, "indices and assignment must cover the same countries");
    std::size_t n = indices.countries.size();
    for (std::size_t i = 0; i < n; ++i)
        if (!indices.f[i] || !indices.o[i] || !indices.i[i])
            throw Error(ErrorCode::IncompleteIndices,
                        "country '" + indices.countries[i] + "' lacks a complete F/O/I triple");

    constexpr double panel = 480.0;
    detail::PanelGeometry left{70.0, 50.0, panel};
    detail::PanelGeometry right{660.0, 50.0, panel};
    const double width = 1220.0;
    const int legend_per_row = 4;
    const int legend_rows = (assignment.k + legend_per_row - 1) / legend_per_row;
    const double legend_top = 590.0;
    const double height = legend_top + 24.0 * legend_rows + 16.0;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::fmt2(width) + "\" height=\"" +
           detail::fmt2(height) + "\" viewBox=\"0 0 " + detail::fmt2(width) + " " + detail::fmt2(height) +
           "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    auto draw_panel = [&](const detail::PanelGeometry& g, const char* x_label, const char* y_label) {
        svg += "<rect x=\"" + detail::fmt2(g.origin_x) + "\" y=\"" + detail::fmt2(g.origin_y) +
               "\" width=\"" + detail::fmt2(g.size) + "\" height=\"" + detail::fmt2(g.size) +
               "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        for (int tick = 1; tick <= 7; ++tick) {
            double tx = g.map_x(tick);
            double ty = g.map_y(tick);
            if (tick > 1 && tick < 7) {
                svg += "<line x1=\"" + detail::fmt2(tx) + "\" y1=\"" + detail::fmt2(g.origin_y) +
                       "\" x2=\"" + detail::fmt2(tx) + "\" y2=\"" + detail::fmt2(g.origin_y + g.size) +
                       "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
                svg += "<line x1=\"" + detail::fmt2(g.origin_x) + "\" y1=\"" + detail::fmt2(ty) +
                       "\" x2=\"" + detail::fmt2(g.origin_x + g.size) + "\" y2=\"" + detail::fmt2(ty) +
                       "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
            }
            svg += "<text x=\"" + detail::fmt2(tx) + "\" y=\"" + detail::fmt2(g.origin_y + g.size + 16.0) +
                   "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
                   std::to_string(tick) + "</text>\n";
            svg += "<text x=\"" + detail::fmt2(g.origin_x - 10.0) + "\" y=\"" + detail::fmt2(ty + 3.0) +
                   "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">" +
                   std::to_string(tick) + "</text>\n";
        }
        svg += "<text x=\"" + detail::fmt2(g.origin_x + g.size / 2.0) + "\" y=\"" +
               detail::fmt2(g.origin_y + g.size + 34.0) +
               "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" + x_label +
               "</text>\n";
        svg += "<text x=\"" + detail::fmt2(g.origin_x - 40.0) + "\" y=\"" +
               detail::fmt2(g.origin_y + g.size / 2.0) +
               "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 " +
               detail::fmt2(g.origin_x - 40.0) + " " + detail::fmt2(g.origin_y + g.size / 2.0) + ")\">" +
               y_label + "</text>\n";
    };

    draw_panel(left, "F-index", "O-index");
    draw_panel(right, "F-index", "I-index");

    auto cluster_color = [&](int c) { return detail::kClusterPalette[c % detail::kPaletteSize]; };
    auto cluster_shape = [&](int c) { return static_cast<detail::GlyphShape>(c % 4); };

    for (std::size_t i = 0; i < n; ++i) {
        int c = assignment.membership[i];
        double f = *indices.f[i];
        double o = *indices.o[i];
        double ii = *indices.i[i];
        const std::string label = detail::xml_escape(indices.countries[i]);

        double lx = left.map_x(f), ly = left.map_y(o);
        detail::emit_glyph(svg, cluster_shape(c), lx, ly, cluster_color(c));
        svg += "<text x=\"" + detail::fmt2(lx + 6.0) + "\" y=\"" + detail::fmt2(ly - 4.0) +
               "\" font-size=\"8\" font-family=\"sans-serif\" fill=\"#444444\">" + label + "</text>\n";

        double rx = right.map_x(f), ry = right.map_y(ii);
        detail::emit_glyph(svg, cluster_shape(c), rx, ry, cluster_color(c));
        svg += "<text x=\"" + detail::fmt2(rx + 6.0) + "\" y=\"" + detail::fmt2(ry - 4.0) +
               "\" font-size=\"8\" font-family=\"sans-serif\" fill=\"#444444\">" + label + "</text>\n";
    }

    for (int c = 0; c < assignment.k; ++c) {
        double ex = 70.0 + 290.0 * (c % legend_per_row);
        double ey = legend_top + 24.0 * (c / legend_per_row);
        detail::emit_glyph(svg, cluster_shape(c), ex, ey, cluster_color(c));
        std::string name = c < static_cast<int>(assignment.names.size()) && !assignment.names[c].empty()
                               ? assignment.names[c]
                               : "Cluster " + std::to_string(c + 1);
        svg += "<text x=\"" + detail::fmt2(ex + 10.0) + "\" y=\"" + detail::fmt2(ey + 4.0) +
               "\" font-size=\"11\" font-family=\"sans-serif\">" + detail::xml_escape(name) + "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

inline void plot_clusters_svg(const FoiIndices& indices, const ClusterAssignment& assignment,
                              const std::filesystem::path& out) {
    std::string svg = render_clusters_svg(indices, assignment);
    std::ofstream file(out, std::ios::binary);
    if (!file) throw Error(ErrorCode::IoError, "cannot write " + out.string());
    file << svg;
}

} // namespace foi
