#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "augbias/bench/config.hpp"
#include "augbias/bench/results.hpp"
#include "augbias/bias/measure.hpp"
#include "augbias/core/hash.hpp"
#include "augbias/datagen/csv.hpp"
#include "augbias/datagen/make_classification.hpp"
#include "augbias/datagen/split.hpp"
#include "augbias/pipeline/train_bank.hpp"
#include "augbias/sampling/sampler.hpp"

namespace augbias::bench {

// Cells that share a dataset, variant, training size and seed share one
// training run; the group is the unit of scheduling and of resumption.
struct Group {
    GanVariant variant{};
    std::size_t classes = 0, features = 0, informative = 0;
    std::size_t train_per_class = 0;  // 0: use the whole training half
    std::uint64_t seed = 0;
    std::vector<CellKey> cells;       // every cell of the group
    std::vector<CellKey> pending;     // cells still missing from the results
};

// Sidecar lines (coverage, diversity) with the key they sort and merge by.
struct SidecarLine {
    std::string group;  // CellKey::str() of the group's first cell minus the sweep position
    std::vector<std::size_t> order;
    std::string text;
};

struct GroupOutput {
    std::vector<ResultRow> rows;
    std::vector<CellError> errors;
    std::vector<std::pair<CellKey, double>> timings;
    std::vector<SidecarLine> coverage, diversity;
};

struct RunSummary {
    std::size_t cells_total = 0;
    std::size_t cells_run = 0;
    std::size_t cells_resumed = 0;
    std::vector<ResultRow> rows;
    std::vector<CellError> errors;
    bool ok() const { return errors.empty(); }
};

inline constexpr const char* kCoverageHeader =
    "experiment_id,variant,class_count,n_features,n_informative,train_per_class,iteration,seed,probe_size,"
    "missing_count,missing_classes";
inline constexpr const char* kDiversityHeader =
    "experiment_id,variant,class_count,n_features,n_informative,train_per_class,iteration,seed,class,ratio,diverse";

namespace detail {

inline std::string group_id(const ExperimentConfig& c, const Group& g) {
    return c.id + "," + to_string(g.variant) + "," + std::to_string(g.classes) + "," + std::to_string(g.features) +
           "," + std::to_string(g.informative) + "," + std::to_string(g.train_per_class);
}

inline std::vector<std::size_t> checkpoints_for(const SweepConfig& s) {
    std::set<std::size_t> out;
    if (s.mode == SamplingMode::one_shot) {
        out.insert(s.iterations.begin(), s.iterations.end());
    } else {
        for (auto step : s.steps)
            for (auto it : checkpoint_schedule(s.mixed_start, s.iterations.front(), step)) out.insert(it);
    }
    return {out.begin(), out.end()};
}

// Keeps `per_class` rows of every class, chosen at random.
inline Dataset take_per_class(const Dataset& data, std::size_t per_class, Rng& rng) {
    std::vector<std::vector<std::size_t>> by_class(data.class_count);
    for (std::size_t i = 0; i < data.size(); ++i) by_class[data.labels[i]].push_back(i);
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& rows = by_class[c];
        if (rows.size() < per_class)
            throw InsufficientSamples("class " + std::to_string(c) + ": have " + std::to_string(rows.size()) +
                                      " training rows, need " + std::to_string(per_class));
        rng.shuffle(rows);
        keep.insert(keep.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(per_class));
    }
    std::sort(keep.begin(), keep.end());
    return data.subset(keep);
}

}  // namespace detail

inline Dataset build_dataset(const ExperimentConfig& c, const Group& g, const Dataset* csv_data) {
    if (!c.dataset.synthetic()) return *csv_data;
    SynthSpec s;
    s.n_samples = c.dataset.samples_for(g.features);
    s.n_features = g.features;
    s.n_informative = g.informative;
    s.n_classes = g.classes;
    s.clusters_per_class = c.dataset.clusters_per_class;
    s.class_sep = c.dataset.class_sep;
    s.flip_y = c.dataset.flip_y;
    s.seed = c.dataset.seed;
    return make_classification(s);
}

// Enumerates the full grid. Synthetic axes come from the sweep; a CSV
// dataset contributes its own class count and width (informative 0 means
// not declared).
inline std::vector<Group> plan_groups(const ExperimentConfig& c, const Dataset* csv_data) {
    std::vector<std::size_t> classes = c.sweep.classes, features = c.sweep.features, informative = c.sweep.informative;
    if (!c.dataset.synthetic()) {
        classes = {csv_data->class_count};
        features = {csv_data->dims()};
        informative = {csv_data->meta.declared_informative.value_or(0)};
    }
    const bool training_axis = c.sweep.size_axis == SizeAxis::training;
    const auto positions = c.sweep.mode == SamplingMode::one_shot ? c.sweep.iterations : c.sweep.steps;
    const std::vector<std::size_t> train_sizes = training_axis ? c.sweep.per_class : std::vector<std::size_t>{0};
    const std::vector<std::size_t> aug_sizes =
        training_axis ? std::vector<std::size_t>{c.sweep.sample_per_class} : c.sweep.per_class;

    std::vector<Group> groups;
    for (auto v : c.variants)
        for (auto cls : classes)
            for (auto d : features)
                for (auto inf : informative)
                    for (auto tsize : train_sizes)
                        for (auto seed : c.seeds) {
                            Group g{v, cls, d, inf, tsize, seed, {}, {}};
                            for (auto n : aug_sizes)
                                for (auto pos : positions)
                                    g.cells.push_back({c.id, to_string(v), cls, d, inf, training_axis ? tsize : n, pos,
                                                       to_string(c.sweep.mode), seed});
                            groups.push_back(std::move(g));
                        }
    return groups;
}

inline GroupOutput run_group(const ExperimentConfig& c, const Group& g, const Dataset* csv_data) {
    using clock = std::chrono::steady_clock;
    GroupOutput out;
    const bool training_axis = c.sweep.size_axis == SizeAxis::training;
    const std::size_t aug_per_class = training_axis ? c.sweep.sample_per_class : 0;
    auto fail_all = [&](const std::string& kind, const std::string& msg) {
        for (const auto& k : g.pending) out.errors.push_back({k, kind, msg});
    };
    const auto t0 = clock::now();
    std::optional<Dataset> data;
    std::optional<SplitPair> halves;
    std::optional<Dataset> train;
    std::optional<TrainedBank> trained;
    const auto checkpoints = detail::checkpoints_for(c.sweep);
    const std::size_t end = checkpoints.back();
    try {
        data = build_dataset(c, g, csv_data);
        Rng rng(g.seed);
        halves = split(*data, c.dataset.train_ratio, true, rng);
        train = g.train_per_class ? detail::take_per_class(halves->train, g.train_per_class, rng) : halves->train;
        trained = train_generators(*train, g.variant, end, rng, c.gan, checkpoints);
    } catch (const Error& e) {
        fail_all(e.kind(), e.what());
        return out;
    } catch (const std::exception& e) {
        fail_all("internal", e.what());
        return out;
    }
    const double train_seconds = std::chrono::duration<double>(clock::now() - t0).count();

    for (const auto& key : g.pending) {
        try {
            const auto t1 = clock::now();
            Rng cell(Rng::derive_seed(g.seed, fnv1a(key.str())));
            const auto targets =
                SamplingPlan::uniform_targets(data->class_count, training_axis ? aug_per_class : key.per_class_size);
            const auto plan = c.sweep.mode == SamplingMode::one_shot
                                  ? SamplingPlan::one_shot(key.iteration_or_step, targets)
                                  : SamplingPlan::mixed(c.sweep.mixed_start, end, key.iteration_or_step, targets);
            const auto aug = sample_plan(trained->bank, plan, cell);
            const auto report = measure_bias(aug, halves->test, c.classifier, cell);
            const double secs = std::chrono::duration<double>(clock::now() - t1).count() +
                                train_seconds / double(g.pending.size());
            out.rows.push_back({key, report.acc_train, report.acc_test, report.bias, c.record_wall_time ? secs : 0.0});
            out.timings.emplace_back(key, secs);
        } catch (const Error& e) {
            out.errors.push_back({key, e.kind(), e.what()});
        } catch (const std::exception& e) {
            out.errors.push_back({key, "internal", e.what()});
        }
    }

    // Probe failures are logged against the group's first cell.
    const std::string gid = detail::group_id(c, g);
    const std::string tail = "," + std::to_string(g.seed);
    const auto probe_iterations =
        c.sweep.mode == SamplingMode::one_shot ? c.sweep.iterations : std::vector<std::size_t>{end};
    auto probe = [&](const char* what, auto&& body) {
        try {
            body();
        } catch (const Error& e) {
            out.errors.push_back({g.cells.front(), std::string(what) + ":" + e.kind(), e.what()});
        } catch (const std::exception& e) {
            out.errors.push_back({g.cells.front(), std::string(what) + ":internal", e.what()});
        }
    };
    if (c.coverage)
        probe("coverage", [&] {
            for (auto it : probe_iterations) {
                Rng cov(Rng::derive_seed(g.seed, fnv1a(gid + ",coverage," + std::to_string(it))));
                const auto r = coverage_probe(trained->bank, it, *train, c.classifier, cov);
                std::string missing;
                for (auto m : r.missing_classes) missing += (missing.empty() ? "" : ";") + std::to_string(m);
                out.coverage.push_back({gid + tail, {it},
                                        gid + "," + std::to_string(it) + tail + "," + std::to_string(r.probe_size) +
                                            "," + std::to_string(r.missing_classes.size()) + "," + missing});
            }
        });
    if (c.diversity)
        probe("diversity", [&] {
            const auto by_class = group_by_class(*train);
            for (auto it : probe_iterations)
                for (std::size_t cls = 0; cls < by_class.size(); ++cls) {
                    Rng div(Rng::derive_seed(
                        g.seed, fnv1a(gid + ",diversity," + std::to_string(it) + "," + std::to_string(cls))));
                    Dataset gen;
                    gen.features = trained->bank.sample(cls, it, c.diversity_probe, div);
                    gen.labels.assign(gen.features.rows(), cls);
                    gen.class_count = data->class_count;
                    const auto r = diversity_probe(gen, by_class[cls]);
                    out.diversity.push_back({gid + tail, {it, cls},
                                             gid + "," + std::to_string(it) + tail + "," + std::to_string(cls) + "," +
                                                 csv::format_double(r.ratio) + "," + (r.diverse ? "1" : "0")});
                }
        });
    return out;
}

namespace detail {

// Merges fresh sidecar lines into an existing file: groups that ran replace
// their old lines, groups that were skipped keep theirs.
inline void merge_sidecar(const std::filesystem::path& path, const char* header, std::vector<SidecarLine> fresh,
                          const std::set<std::string>& reran, std::size_t key_fields) {
    std::vector<SidecarLine> lines;
    if (std::ifstream in(path); in) {
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = csv::split_line(line);
            if (f.size() < key_fields) continue;
            std::string gid;
            for (std::size_t i = 0; i < 6; ++i) gid += (i ? "," : "") + f[i];
            gid += "," + f[7];
            if (reran.count(gid)) continue;
            SidecarLine s{gid, {}, line};
            std::size_t v = 0;
            csv::parse_index(f[6], v);
            s.order.push_back(v);
            if (key_fields > 8 && csv::parse_index(f[8], v)) s.order.push_back(v);
            lines.push_back(std::move(s));
        }
    }
    lines.insert(lines.end(), fresh.begin(), fresh.end());
    std::sort(lines.begin(), lines.end(), [](const SidecarLine& a, const SidecarLine& b) {
        return std::tie(a.group, a.order) < std::tie(b.group, b.order);
    });
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << header << '\n';
    for (const auto& l : lines) out << l.text << '\n';
}

}  // namespace detail

struct RunOptions {
    std::optional<std::size_t> workers;  // overrides the config
    bool quiet = false;
};

// Runs every pending cell of the grid and rewrites the results, errors and
// sidecar files under config.output. Rows already in results.csv are kept
// and their groups skipped.
inline RunSummary run_experiment(const ExperimentConfig& c, const RunOptions& opts = {}) {
    c.validate();
    namespace fs = std::filesystem;
    fs::create_directories(c.output);
    const fs::path results_path = c.output / "results.csv";

    std::optional<Dataset> csv_data;
    if (!c.dataset.synthetic()) csv_data = load_csv(c.dataset.path, c.dataset.label_column);
    auto groups = plan_groups(c, csv_data ? &*csv_data : nullptr);

    std::set<CellKey> grid;
    for (const auto& g : groups) grid.insert(g.cells.begin(), g.cells.end());

    RunSummary summary;
    summary.cells_total = grid.size();
    std::set<CellKey> done;
    if (fs::exists(results_path)) {
        for (auto& r : read_results(results_path)) {
            if (r.key.experiment_id != c.id)
                throw ConfigError("output directory " + c.output.string() + " already holds experiment '" +
                                  r.key.experiment_id + "'");
            if (grid.count(r.key) && done.insert(r.key).second) summary.rows.push_back(r);
        }
    }
    summary.cells_resumed = done.size();

    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (const auto& k : groups[i].cells)
            if (!done.count(k)) groups[i].pending.push_back(k);
        if (!groups[i].pending.empty()) todo.push_back(i);
    }

    std::ofstream(c.output / "run_header.txt", std::ios::binary | std::ios::trunc) << c.describe();
    if (!opts.quiet) std::cerr << c.describe() << "groups to run: " << todo.size() << " of " << groups.size() << '\n';

    std::vector<GroupOutput> outputs(todo.size());
    std::atomic<std::size_t> next{0}, finished{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < todo.size();) {
            outputs[i] = run_group(c, groups[todo[i]], csv_data ? &*csv_data : nullptr);
            const auto n = finished.fetch_add(1) + 1;
            if (!opts.quiet) {
                std::lock_guard lock(log_mutex);
                std::cerr << "[" << n << "/" << todo.size() << "] " << detail::group_id(c, groups[todo[i]]) << " seed "
                          << groups[todo[i]].seed << (outputs[i].errors.empty() ? "" : " (errors)") << '\n';
            }
        }
    };
    const std::size_t nworkers = std::max<std::size_t>(1, std::min(opts.workers.value_or(c.workers), todo.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < nworkers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<std::pair<CellKey, double>> timings;
    std::vector<SidecarLine> coverage, diversity;
    std::set<std::string> reran;
    for (std::size_t i = 0; i < todo.size(); ++i) {
        auto& o = outputs[i];
        summary.cells_run += o.rows.size();
        summary.rows.insert(summary.rows.end(), o.rows.begin(), o.rows.end());
        summary.errors.insert(summary.errors.end(), o.errors.begin(), o.errors.end());
        timings.insert(timings.end(), o.timings.begin(), o.timings.end());
        coverage.insert(coverage.end(), o.coverage.begin(), o.coverage.end());
        diversity.insert(diversity.end(), o.diversity.begin(), o.diversity.end());
        reran.insert(detail::group_id(c, groups[todo[i]]) + "," + std::to_string(groups[todo[i]].seed));
    }
    sort_rows(summary.rows);
    write_results(results_path, summary.rows);
    write_errors(c.output / "errors.csv", summary.errors);
    if (c.coverage) detail::merge_sidecar(c.output / "coverage.csv", kCoverageHeader, coverage, reran, 8);
    if (c.diversity) detail::merge_sidecar(c.output / "diversity.csv", kDiversityHeader, diversity, reran, 9);
    std::sort(timings.begin(), timings.end());
    std::ofstream tout(c.output / "timings.csv", std::ios::binary | std::ios::trunc);
    tout << "cell,seconds\n";
    for (const auto& [k, s] : timings) tout << k.str() << ',' << csv::format_double(s) << '\n';
    return summary;
}

}  // namespace augbias::bench
