// augbias: command-line front end for dataset generation, GAN training,
// sampling, bias measurement, augmentability checks and experiment grids.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "augbias/bench/config.hpp"
#include "augbias/bench/grid.hpp"
#include "augbias/bench/presets.hpp"
#include "augbias/bench/svg.hpp"
#include "augbias/bias/measure.hpp"
#include "augbias/datagen/csv.hpp"
#include "augbias/datagen/make_classification.hpp"
#include "augbias/gan/snapshot_io.hpp"
#include "augbias/gan/trainer.hpp"
#include "augbias/pipeline/augmentability.hpp"
#include "augbias/pipeline/screen.hpp"
#include "augbias/sampling/sampler.hpp"

namespace fs = std::filesystem;
using namespace augbias;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string out;
};

CLI::Option* add_common(CLI::App* cmd, Common& c, const std::string& out_help) {
    cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str();
    return cmd->add_option("--out", c.out, out_help);
}

std::vector<GeneratorSnapshot> load_snapshots(const std::vector<std::string>& paths) {
    std::vector<GeneratorSnapshot> out;
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.path().extension() == ".snap") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) out.push_back(load_snapshot(f));
        } else {
            out.push_back(load_snapshot(fs::path(p)));
        }
    }
    if (out.empty()) throw InvalidInput("no snapshots found");
    return out;
}

GeneratorBank bank_from(const std::vector<GeneratorSnapshot>& snaps) {
    GeneratorBank bank(snaps.front().dims(), snaps.front().class_count);
    bank.add(snaps);
    return bank;
}

void write_json(const nlohmann::json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        if (fs::path(out).has_parent_path()) fs::create_directories(fs::path(out).parent_path());
        std::ofstream(out) << j.dump(2) << '\n';
    }
}

std::size_t env_workers() {
    if (const char* w = std::getenv("AUGBIAS_WORKERS")) {
        try {
            const auto n = std::stoul(w);
            if (n > 0) return n;
        } catch (...) {
        }
        throw ConfigError(std::string("AUGBIAS_WORKERS must be a positive integer, got '") + w + "'");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"augbias: bias of GAN-based data augmentation"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // datagen
    Common dg_c;
    SynthSpec synth;
    auto* datagen = app.add_subcommand("datagen", "Generate a synthetic classification dataset (CSV)");
    add_common(datagen, dg_c, "Output CSV path")->required();
    datagen->add_option("--samples", synth.n_samples)->capture_default_str();
    datagen->add_option("--features", synth.n_features)->capture_default_str();
    datagen->add_option("--informative", synth.n_informative)->capture_default_str();
    datagen->add_option("--redundant", synth.n_redundant)->capture_default_str();
    datagen->add_option("--classes", synth.n_classes)->capture_default_str();
    datagen->add_option("--clusters", synth.clusters_per_class, "Clusters per class")->capture_default_str();
    datagen->add_option("--sep", synth.class_sep, "Class separation")->capture_default_str();
    datagen->add_option("--flip-y", synth.flip_y, "Label noise fraction")->capture_default_str();

    // train
    Common tr_c;
    std::string tr_input, tr_variant = "softmax", tr_label = "label";
    std::size_t tr_iterations = 10000;
    std::vector<std::size_t> tr_checkpoints;
    std::optional<std::size_t> tr_class, tr_batch;
    auto* train = app.add_subcommand("train", "Train GAN generators and write snapshots");
    add_common(train, tr_c, "Snapshot directory")->required();
    train->add_option("--input", tr_input, "Training CSV")->required();
    train->add_option("--label-column", tr_label)->capture_default_str();
    train->add_option("--variant", tr_variant, "vanilla|softmax|conditional|boundary_seeking")->capture_default_str();
    train->add_option("--iterations", tr_iterations)->capture_default_str();
    train->add_option("--checkpoints", tr_checkpoints, "Snapshot iterations (default: final)")->delimiter(',');
    train->add_option("--class", tr_class, "Train only this class id (per-class variants)");
    train->add_option("--batch-size", tr_batch);

    // sample
    Common sa_c;
    std::vector<std::string> sa_snaps;
    std::string sa_mode = "one_shot";
    std::size_t sa_iteration = 0, sa_start = 0, sa_end = 0, sa_step = 0, sa_per_class = 50;
    auto* sample = app.add_subcommand("sample", "Draw an augmentation set from snapshots");
    add_common(sample, sa_c, "Output CSV (a .provenance.csv sidecar is written next to it)")->required();
    sample->add_option("--snapshots", sa_snaps, "Snapshot files or directories")->required();
    sample->add_option("--mode", sa_mode, "one_shot|mixed")->capture_default_str();
    sample->add_option("--iteration", sa_iteration, "One-shot iteration end");
    sample->add_option("--start", sa_start, "Mixed start iteration");
    sample->add_option("--end", sa_end, "Mixed end iteration");
    sample->add_option("--step", sa_step, "Mixed step");
    sample->add_option("--per-class", sa_per_class)->capture_default_str();

    // bias
    Common bi_c;
    std::string bi_train, bi_test, bi_label = "label";
    auto* bias = app.add_subcommand("bias", "Measure the bias of an augmentation set against real test data");
    add_common(bias, bi_c, "Report JSON path (default: stdout)");
    bias->add_option("--train", bi_train, "Augmentation CSV")->required();
    bias->add_option("--test", bi_test, "Real held-out CSV")->required();
    bias->add_option("--label-column", bi_label)->capture_default_str();

    // coverage
    Common co_c;
    std::vector<std::string> co_snaps;
    std::string co_real, co_label = "label";
    std::size_t co_iteration = 0, co_probe = kCoverageProbeSize;
    auto* coverage = app.add_subcommand("coverage", "Class coverage of generated samples");
    add_common(coverage, co_c, "Report JSON path (default: stdout)");
    coverage->add_option("--snapshots", co_snaps)->required();
    coverage->add_option("--real", co_real, "Real training CSV")->required();
    coverage->add_option("--label-column", co_label)->capture_default_str();
    coverage->add_option("--iteration", co_iteration)->required();
    coverage->add_option("--probe-size", co_probe)->capture_default_str();

    // pipeline
    Common pi_c;
    std::string pi_input, pi_label = "label";
    PipelineThresholds pi_t;
    auto* pipeline = app.add_subcommand("pipeline", "Augmentability check (report.txt and report.json)");
    add_common(pipeline, pi_c, "Report directory")->required();
    pipeline->add_option("--input", pi_input)->required();
    pipeline->add_option("--label-column", pi_label)->capture_default_str();
    pipeline->add_flag("--probe", pi_t.empirical_probe, "Run the empirical GAN probe");
    pipeline->add_option("--min-per-class", pi_t.min_per_class)->capture_default_str();
    pipeline->add_option("--rif-min", pi_t.rif_min)->capture_default_str();
    pipeline->add_option("--rsf-low", pi_t.rsf_low)->capture_default_str();
    pipeline->add_option("--rsf-high", pi_t.rsf_high)->capture_default_str();
    pipeline->add_option("--probe-bias-max", pi_t.probe_bias_max)->capture_default_str();
    pipeline->add_option("--probe-iterations", pi_t.probe.iterations)->capture_default_str();

    // screen
    Common sc_c;
    std::string sc_input, sc_label = "label";
    std::vector<std::string> sc_variants = {"vanilla", "softmax", "conditional", "boundary_seeking"};
    std::vector<std::uint64_t> sc_seeds;
    ScreenOptions sc_o;
    auto* screen = app.add_subcommand("screen", "Rank GAN variants by measured bias");
    add_common(screen, sc_c, "Output CSV (default: stdout)");
    screen->add_option("--input", sc_input)->required();
    screen->add_option("--label-column", sc_label)->capture_default_str();
    screen->add_option("--variants", sc_variants)->delimiter(',')->capture_default_str();
    screen->add_option("--seeds", sc_seeds, "Seed list (default: --seed)")->delimiter(',');
    screen->add_option("--iterations", sc_o.iteration_end)->capture_default_str();
    screen->add_option("--per-class", sc_o.per_class)->capture_default_str();

    // plot
    Common pl_c;
    std::string pl_input, pl_x = "iteration", pl_y = "bias", pl_series = "variant";
    auto* plot = app.add_subcommand("plot", "SVG line charts from a results CSV");
    add_common(plot, pl_c, "Output directory")->required();
    plot->add_option("--input", pl_input)->required();
    plot->add_option("--x", pl_x)->capture_default_str();
    plot->add_option("--y", pl_y)->capture_default_str();
    plot->add_option("--series", pl_series, "Column or 'none'")->capture_default_str();

    // run
    Common ru_c;
    std::string ru_config, ru_preset;
    std::optional<std::size_t> ru_workers;
    bool ru_full = false, ru_seed_set = false;
    auto* run = app.add_subcommand("run", "Run an experiment grid from a config file or preset");
    add_common(run, ru_c, "Output directory (overrides the config)");
    auto* cfg_opt = run->add_option("--config", ru_config, "Experiment config file");
    run->add_option("--preset", ru_preset, "fig5..fig12")->excludes(cfg_opt);
    run->add_flag("--full", ru_full, "Use the complete preset sweeps");
    run->add_option("--workers", ru_workers, "Worker threads (default: config, then AUGBIAS_WORKERS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    ru_seed_set = run->count("--seed") > 0;

    try {
        if (*datagen) {
            synth.seed = dg_c.seed;
            save_csv(make_classification(synth), fs::path(dg_c.out));
            std::cerr << "wrote " << synth.n_samples << " rows to " << dg_c.out << '\n';
        } else if (*train) {
            const Dataset data = load_csv(fs::path(tr_input), tr_label);
            const auto variant = parse_variant(tr_variant);
            if (tr_checkpoints.empty()) tr_checkpoints = {tr_iterations};
            GanOverrides o;
            o.batch_size = tr_batch;
            Rng rng(tr_c.seed);
            fs::create_directories(tr_c.out);
            std::vector<GeneratorSnapshot> snaps;
            if (tr_class) {
                if (variant == GanVariant::conditional) throw InvalidInput("--class applies to per-class variants only");
                const auto groups = group_by_class(data);
                if (*tr_class >= groups.size() || groups[*tr_class].size() == 0)
                    throw InvalidInput("class " + std::to_string(*tr_class) + " has no rows");
                auto spec = o.build(variant, data.dims(), data.class_count, tr_iterations, tr_checkpoints);
                spec.seed = tr_c.seed;
                snaps = train_gan(spec, groups[*tr_class], rng).snapshots;
            } else {
                snaps = train_generators(data, variant, tr_iterations, rng, o, tr_checkpoints).snapshots;
            }
            for (const auto& s : snaps) {
                const std::string cls = s.class_label ? "c" + std::to_string(*s.class_label) : "call";
                const auto path = fs::path(tr_c.out) / (std::string(to_string(s.variant)) + "_" + cls + "_it" +
                                                        std::to_string(s.iteration) + ".snap");
                save_snapshot(s, path);
                std::cerr << "wrote " << path.string() << '\n';
            }
        } else if (*sample) {
            const auto snaps = load_snapshots(sa_snaps);
            const auto bank = bank_from(snaps);
            std::map<std::size_t, std::size_t> targets;
            for (std::size_t c = 0; c < bank.class_count(); ++c)
                if (!bank.iterations(c).empty()) targets[c] = sa_per_class;
            SamplingPlan plan;
            if (sa_mode == "one_shot")
                plan = SamplingPlan::one_shot(sa_iteration, targets, sa_c.seed);
            else if (sa_mode == "mixed")
                plan = SamplingPlan::mixed(sa_start, sa_end, sa_step, targets, sa_c.seed);
            else
                throw InvalidInput("--mode must be one_shot or mixed");
            Rng rng(sa_c.seed);
            const auto aug = sample_plan(bank, plan, rng);
            fs::path out(sa_c.out);
            auto side = out;
            side.replace_extension(".provenance.csv");
            save_augmented(aug, out, side);
            std::cerr << "wrote " << aug.data.size() << " rows to " << out.string() << '\n';
        } else if (*bias) {
            const Dataset aug = load_csv(fs::path(bi_train), bi_label);
            const Dataset test = load_csv(fs::path(bi_test), bi_label);
            Rng rng(bi_c.seed);
            write_json(to_json(measure_bias(aug, test, ClassifierSpec{}, rng)), bi_c.out);
        } else if (*coverage) {
            const auto bank = bank_from(load_snapshots(co_snaps));
            const Dataset real = load_csv(fs::path(co_real), co_label);
            Rng rng(co_c.seed);
            const auto r = coverage_probe(bank, co_iteration, real, ClassifierSpec{}, rng, co_probe);
            write_json({{"counts", r.counts}, {"missing_classes", r.missing_classes}, {"probe_size", r.probe_size}},
                       co_c.out);
        } else if (*pipeline) {
            const Dataset data = load_csv(fs::path(pi_input), pi_label);
            Rng rng(pi_c.seed);
            const auto r = check_augmentable(data, pi_t, rng);
            fs::create_directories(pi_c.out);
            std::ofstream txt(fs::path(pi_c.out) / "report.txt");
            write_text(r, txt);
            std::ofstream(fs::path(pi_c.out) / "report.json") << to_json(r).dump(2) << '\n';
            write_text(r, std::cout);
        } else if (*screen) {
            const Dataset data = load_csv(fs::path(sc_input), sc_label);
            std::vector<ScreenVariant> variants;
            for (const auto& v : sc_variants) variants.push_back(gan_screen_variant(parse_variant(v)));
            sc_o.seeds = sc_seeds.empty() ? std::vector<std::uint64_t>{sc_c.seed} : sc_seeds;
            const auto rows = variant_screen(data, variants, sc_o);
            std::ofstream file;
            if (!sc_c.out.empty()) file.open(sc_c.out);
            std::ostream& out = sc_c.out.empty() ? std::cout : file;
            out << "variant,mean_bias,stddev,seeds_ok,seeds_failed\n";
            for (const auto& r : rows)
                out << r.name << ',' << csv::format_double(r.summary.mean) << ','
                    << csv::format_double(r.summary.stddev) << ',' << r.summary.count << ',' << r.errors.size() << '\n';
            for (const auto& r : rows)
                for (const auto& e : r.errors) std::cerr << r.name << ": " << e << '\n';
        } else if (*plot) {
            const auto rows = bench::read_results(fs::path(pl_input));
            for (const auto& p : bench::plot_results(rows, pl_x, pl_y, pl_series, pl_c.out))
                std::cerr << "wrote " << p.string() << '\n';
        } else if (*run) {
            if (ru_config.empty() == ru_preset.empty()) throw ConfigError("run: give exactly one of --config, --preset");
            auto cfg = ru_preset.empty() ? bench::load_config(ru_config) : bench::preset(ru_preset, ru_full);
            if (!ru_c.out.empty()) cfg.output = ru_c.out;
            if (ru_seed_set) cfg.seeds = {ru_c.seed};
            bench::RunOptions opts;
            if (ru_workers)
                opts.workers = *ru_workers;
            else if (const auto w = env_workers())
                opts.workers = w;
            if (opts.workers && *opts.workers == 0) throw ConfigError("--workers must be >= 1");
            const auto summary = bench::run_experiment(cfg, opts);
            std::cerr << "cells: " << summary.cells_total << " total, " << summary.cells_resumed << " resumed, "
                      << summary.cells_run << " run, " << summary.errors.size() << " failed\n";
            std::cerr << "results: " << (cfg.output / "results.csv").string() << '\n';
            return summary.ok() ? 0 : 1;
        }
    } catch (const Error& e) {
        std::cerr << "error (" << e.kind() << "): " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
