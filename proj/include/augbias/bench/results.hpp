#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/datagen/csv.hpp"

namespace augbias::bench {

inline constexpr const char* kResultsHeader =
    "experiment_id,variant,class_count,n_features,n_informative,per_class_size,iteration_or_step,sampling_mode,seed,"
    "acc_train,acc_test,bias,wall_time_seconds";

// Grid coordinates of one measurement.
struct CellKey {
    std::string experiment_id;
    std::string variant;
    std::size_t class_count = 0;
    std::size_t n_features = 0;
    std::size_t n_informative = 0;
    std::size_t per_class_size = 0;
    std::size_t iteration_or_step = 0;
    std::string sampling_mode;
    std::uint64_t seed = 0;

    auto tie() const {
        return std::tie(experiment_id, variant, class_count, n_features, n_informative, per_class_size,
                        iteration_or_step, sampling_mode, seed);
    }
    friend bool operator<(const CellKey& a, const CellKey& b) { return a.tie() < b.tie(); }
    friend bool operator==(const CellKey& a, const CellKey& b) { return a.tie() == b.tie(); }

    std::string str() const {
        return experiment_id + "/" + variant + "/C" + std::to_string(class_count) + "/d" + std::to_string(n_features) +
               "/inf" + std::to_string(n_informative) + "/n" + std::to_string(per_class_size) + "/" + sampling_mode +
               "@" + std::to_string(iteration_or_step) + "/seed" + std::to_string(seed);
    }
};

struct ResultRow {
    CellKey key;
    double acc_train = 0.0;
    double acc_test = 0.0;
    double bias = 0.0;
    double wall_time_seconds = 0.0;
};

inline std::string format_row(const ResultRow& r) {
    const auto& k = r.key;
    return k.experiment_id + "," + k.variant + "," + std::to_string(k.class_count) + "," +
           std::to_string(k.n_features) + "," + std::to_string(k.n_informative) + "," +
           std::to_string(k.per_class_size) + "," + std::to_string(k.iteration_or_step) + "," + k.sampling_mode + "," +
           std::to_string(k.seed) + "," + csv::format_double(r.acc_train) + "," + csv::format_double(r.acc_test) +
           "," + csv::format_double(r.bias) + "," + csv::format_double(r.wall_time_seconds);
}

inline ResultRow parse_row(const std::string& line, std::size_t line_no) {
    const auto f = csv::split_line(line);
    auto fail = [&](const std::string& what) {
        return ParseError("results line " + std::to_string(line_no) + ": " + what);
    };
    if (f.size() != 13) throw fail("expected 13 fields, got " + std::to_string(f.size()));
    auto index = [&](std::size_t i) {
        std::size_t v = 0;
        if (!csv::parse_index(f[i], v)) throw fail("bad integer '" + f[i] + "'");
        return v;
    };
    auto real = [&](std::size_t i) {
        double v = 0.0;
        if (!csv::parse_double(f[i], v)) throw fail("bad number '" + f[i] + "'");
        return v;
    };
    ResultRow r;
    r.key = {f[0], f[1], index(2), index(3), index(4), index(5), index(6), f[7], index(8)};
    r.acc_train = real(9);
    r.acc_test = real(10);
    r.bias = real(11);
    r.wall_time_seconds = real(12);
    return r;
}

inline void sort_rows(std::vector<ResultRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) { return a.key < b.key; });
}

inline void write_results(const std::filesystem::path& path, std::vector<ResultRow> rows) {
    sort_rows(rows);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidInput("cannot write " + path.string());
    out << kResultsHeader << '\n';
    for (const auto& r : rows) out << format_row(r) << '\n';
}

inline std::vector<ResultRow> read_results(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) return {};
    if (csv::trim(line) != kResultsHeader) throw ParseError("results: unexpected header '" + line + "'");
    std::vector<ResultRow> rows;
    std::size_t n = 1;
    while (std::getline(in, line)) {
        ++n;
        if (csv::trim(line).empty()) continue;
        rows.push_back(parse_row(line, n));
    }
    return rows;
}

inline std::vector<ResultRow> read_results(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open " + path.string());
    return read_results(in);
}

struct CellError {
    CellKey key;
    std::string error_class;
    std::string message;
};

inline void write_errors(const std::filesystem::path& path, std::vector<CellError> errors) {
    std::sort(errors.begin(), errors.end(), [](const CellError& a, const CellError& b) { return a.key < b.key; });
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "cell,error_class,message\n";
    for (const auto& e : errors) {
        std::string msg = e.message;
        for (auto& ch : msg)
            if (ch == '\n' || ch == '\r') ch = ' ';
        std::string quoted = "\"";
        for (char ch : msg) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        quoted += '"';
        out << e.key.str() << ',' << e.error_class << ',' << quoted << '\n';
    }
}

}  // namespace augbias::bench
