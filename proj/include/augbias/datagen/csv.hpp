#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/datagen/dataset.hpp"

namespace augbias {

namespace csv {

// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline std::vector<std::string> split_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        cells.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

inline std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

inline bool parse_index(std::string_view s, std::size_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace csv

// Reads a comma-separated file with a header row. The label column may hold
// any text; every other column must be numeric. Label categories become ids
// in first-appearance order, except when the categories are exactly the
// integers 0..C-1, which keep their value (so save_csv/load_csv round trips
// preserve ids). The category text per id is stored in meta.label_names.
inline Dataset load_csv(std::istream& in, const std::string& label_column = "label",
                        const std::string& source = "<stream>") {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!csv::trim(line).empty()) {
            header = csv::split_line(line);
            break;
        }
    }
    if (header.empty()) throw SchemaError(source + ": missing header row");
    for (auto& h : header) h = csv::unquote(h);

    std::size_t label_idx = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) label_idx = i;
    if (label_idx == header.size())
        throw SchemaError(source + ": label column '" + label_column + "' not found");

    std::vector<std::string> raw_labels;
    std::vector<double> values;
    const std::size_t d = header.size() - 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        auto cells = csv::split_line(line);
        if (cells.size() != header.size())
            throw ParseError(source + ": line " + std::to_string(line_no) + " has " +
                             std::to_string(cells.size()) + " cells, header has " +
                             std::to_string(header.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i == label_idx) {
                raw_labels.push_back(csv::unquote(cells[i]));
                continue;
            }
            double v = 0.0;
            if (!csv::parse_double(cells[i], v) || !std::isfinite(v))
                throw ParseError(source + ": line " + std::to_string(line_no) + ", column '" +
                                 header[i] + "': cannot parse '" + cells[i] + "' as a number");
            values.push_back(v);
        }
    }

    Dataset out;
    const std::size_t n = raw_labels.size();
    out.features = Matrix(n, d, std::move(values));
    for (std::size_t i = 0; i < header.size(); ++i)
        if (i != label_idx) out.meta.feature_names.push_back(header[i]);
    out.meta.name = source;

    std::map<std::string, std::size_t> ids;
    std::vector<std::string> order;
    for (const auto& l : raw_labels)
        if (ids.emplace(l, order.size()).second) order.push_back(l);

    bool dense_integers = !order.empty();
    std::vector<std::size_t> numeric(order.size());
    for (std::size_t k = 0; k < order.size() && dense_integers; ++k)
        dense_integers = csv::parse_index(order[k], numeric[k]) && numeric[k] < order.size() &&
                         std::to_string(numeric[k]) == order[k];
    if (dense_integers) {
        out.meta.label_names.resize(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            ids[order[k]] = numeric[k];
            out.meta.label_names[numeric[k]] = order[k];
        }
    } else {
        out.meta.label_names = order;
    }
    out.labels.reserve(n);
    for (const auto& l : raw_labels) out.labels.push_back(ids[l]);
    out.class_count = order.size();
    return out;
}

inline Dataset load_csv(const std::filesystem::path& path, const std::string& label_column = "label") {
    std::ifstream in(path);
    if (!in) throw InvalidInput("load_csv: cannot open " + path.string());
    return load_csv(in, label_column, path.string());
}

inline void save_csv(const Dataset& data, std::ostream& out, const std::string& label_column = "label") {
    const std::size_t d = data.dims();
    for (std::size_t j = 0; j < d; ++j) {
        if (j < data.meta.feature_names.size()) out << data.meta.feature_names[j];
        else out << 'f' << j;
        out << ',';
    }
    out << label_column << '\n';
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (std::size_t j = 0; j < d; ++j) out << csv::format_double(data.features(r, j)) << ',';
        const auto l = data.labels[r];
        if (l < data.meta.label_names.size()) out << data.meta.label_names[l];
        else out << l;
        out << '\n';
    }
}

inline void save_csv(const Dataset& data, const std::filesystem::path& path,
                     const std::string& label_column = "label") {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InvalidInput("save_csv: cannot write " + path.string());
    save_csv(data, out, label_column);
}

}  // namespace augbias
