#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "augbias/bench/results.hpp"
#include "augbias/core/error.hpp"

namespace augbias::bench {

using Series = std::map<std::string, std::vector<std::pair<double, double>>>;

namespace detail {

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string label_text(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

}  // namespace detail

// Minimal line chart: axes, min/max tick labels, one polyline per series
// (points sorted by x) and a legend. Output depends only on the inputs.
inline std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const Series& series) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    constexpr double W = 640, H = 400, L = 70, R = 150, T = 40, B = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& [_, pts] : series)
        for (const auto& [x, y] : pts) {
            if (first) {
                x0 = x1 = x;
                y0 = y1 = y;
                first = false;
            }
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (x1 == x0) x0 -= 0.5, x1 += 0.5;
    if (y1 == y0) y0 -= 0.5, y1 += 0.5;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    using detail::fmt;

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
    s += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" + detail::escape(title) +
         "</text>\n";
    s += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(W - R) + "\" y2=\"" + fmt(H - B) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(T) + "\" x2=\"" + fmt(L) + "\" y2=\"" + fmt(H - B) +
         "\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fmt(L) + "\" y=\"" + fmt(H - B + 16) + "\" text-anchor=\"middle\" font-size=\"11\">" +
         detail::label_text(x0) + "</text>\n";
    s += "<text x=\"" + fmt(W - R) + "\" y=\"" + fmt(H - B + 16) + "\" text-anchor=\"middle\" font-size=\"11\">" +
         detail::label_text(x1) + "</text>\n";
    s += "<text x=\"" + fmt(L - 6) + "\" y=\"" + fmt(H - B) + "\" text-anchor=\"end\" font-size=\"11\">" +
         detail::label_text(y0) + "</text>\n";
    s += "<text x=\"" + fmt(L - 6) + "\" y=\"" + fmt(T + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
         detail::label_text(y1) + "</text>\n";
    s += "<text x=\"" + fmt((L + W - R) / 2) + "\" y=\"" + fmt(H - 12) + "\" text-anchor=\"middle\" font-size=\"12\">" +
         detail::escape(x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt((T + H - B) / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt((T + H - B) / 2) + ")\">" + detail::escape(y_label) + "</text>\n";

    std::size_t i = 0;
    for (const auto& [name, raw] : series) {
        auto pts = raw;
        std::sort(pts.begin(), pts.end());
        const std::string color = palette[i % (sizeof palette / sizeof *palette)];
        std::string points;
        for (const auto& [x, y] : pts) points += (points.empty() ? "" : " ") + fmt(px(x)) + "," + fmt(py(y));
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
        for (const auto& [x, y] : pts)
            s += "<circle cx=\"" + fmt(px(x)) + "\" cy=\"" + fmt(py(y)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
        const double ly = T + 10 + 18.0 * double(i);
        s += "<line x1=\"" + fmt(W - R + 10) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(W - R + 30) + "\" y2=\"" +
             fmt(ly) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + fmt(W - R + 36) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"11\">" + detail::escape(name) +
             "</text>\n";
        ++i;
    }
    s += "</svg>\n";
    return s;
}

// Column accessors for plotting. Accepts the results-CSV column names and
// the short sweep-axis names.
inline double numeric_column(const ResultRow& r, const std::string& col) {
    const auto& k = r.key;
    if (col == "iteration" || col == "step" || col == "iteration_or_step") return double(k.iteration_or_step);
    if (col == "per_class" || col == "per_class_size") return double(k.per_class_size);
    if (col == "features" || col == "n_features") return double(k.n_features);
    if (col == "classes" || col == "class_count") return double(k.class_count);
    if (col == "informative" || col == "n_informative") return double(k.n_informative);
    if (col == "seed") return double(k.seed);
    if (col == "bias") return r.bias;
    if (col == "acc_train") return r.acc_train;
    if (col == "acc_test") return r.acc_test;
    if (col == "wall_time_seconds") return r.wall_time_seconds;
    throw InvalidInput("plot: unknown numeric column '" + col + "'");
}

inline std::string series_column(const ResultRow& r, const std::string& col) {
    if (col == "none") return "all";
    if (col == "variant") return r.key.variant;
    if (col == "sampling_mode") return r.key.sampling_mode;
    return detail::label_text(numeric_column(r, col));
}

// Mean of y over the rows sharing (series, x), one chart per experiment id.
// Returns the written paths.
inline std::vector<std::filesystem::path> plot_results(const std::vector<ResultRow>& rows, const std::string& x,
                                                       const std::string& y, const std::string& series,
                                                       const std::filesystem::path& out_dir) {
    if (rows.empty()) throw InvalidInput("plot: no rows to plot");
    std::map<std::string, std::map<std::string, std::map<double, std::pair<double, std::size_t>>>> acc;
    for (const auto& r : rows) {
        auto& cell = acc[r.key.experiment_id][series_column(r, series)][numeric_column(r, x)];
        cell.first += numeric_column(r, y);
        ++cell.second;
    }
    std::filesystem::create_directories(out_dir);
    std::vector<std::filesystem::path> written;
    for (const auto& [id, by_series] : acc) {
        Series s;
        for (const auto& [name, by_x] : by_series)
            for (const auto& [xv, sum] : by_x) s[name].push_back({xv, sum.first / double(sum.second)});
        const auto path = out_dir / (id + "_" + y + "_vs_" + x + ".svg");
        std::ofstream(path, std::ios::binary | std::ios::trunc) << line_chart(id, x, y, s);
        written.push_back(path);
    }
    return written;
}

}  // namespace augbias::bench
