#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "augbias/bench/config.hpp"
#include "augbias/bench/grid.hpp"
#include "augbias/bench/presets.hpp"
#include "augbias/bench/results.hpp"
#include "augbias/bench/svg.hpp"

using namespace augbias;
using namespace augbias::bench;
namespace fs = std::filesystem;

namespace {

const char* kSmallConfig = R"(
[experiment]
id = tiny

[dataset]
n_samples = 200
class_sep = 2

[gan]
variants = softmax, conditional

[sweep]
iterations = 50, 100
per_class = 10
features = 4
classes = 2
informative = 2

[seeds]
list = 0, 1

[classifier]
epochs = 20

[run]
coverage = true
diversity = true
)";

ExperimentConfig small_config(const fs::path& out) {
    std::istringstream in(kSmallConfig);
    auto c = parse_config(in);
    c.output = out;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("augbias_bench_" + name)) {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Config, ParsesSections) {
    std::istringstream in(kSmallConfig);
    const auto c = parse_config(in);
    EXPECT_EQ(c.id, "tiny");
    EXPECT_EQ(c.variants, (std::vector<GanVariant>{GanVariant::softmax, GanVariant::conditional}));
    EXPECT_EQ(c.sweep.iterations, (std::vector<std::size_t>{50, 100}));
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1}));
    EXPECT_EQ(c.classifier.epochs, 20u);
    EXPECT_TRUE(c.coverage);
    EXPECT_DOUBLE_EQ(c.dataset.class_sep, 2.0);
    EXPECT_EQ(c.output, fs::path("results") / "tiny");
}

TEST(Config, UnknownKeyRejected) {
    std::istringstream in("[sweep]\niteratons = 10\n");
    EXPECT_THROW(parse_config(in), ConfigError);
}

TEST(Config, BadVariantIsConfigError) {
    std::istringstream in("[experiment]\nid = x\n[gan]\nvariants = wgan\n");
    EXPECT_THROW(parse_config(in), ConfigError);
}

TEST(Config, EmptyAxisRejectedBeforeTraining) {
    TempDir dir("empty_axis");
    auto c = small_config(dir.path);
    c.sweep.iterations.clear();
    try {
        run_experiment(c, {std::nullopt, true});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("iterations"), std::string::npos);
    }
    EXPECT_FALSE(fs::exists(dir.path / "results.csv"));

    std::istringstream in("[experiment]\nid = x\n[sweep]\nper_class =\n");
    EXPECT_THROW(parse_config(in), ConfigError);
}

TEST(Config, MixedNeedsOneEndAndSteps) {
    auto c = small_config("unused");
    c.sweep.mode = SamplingMode::mixed;
    c.sweep.mixed_start = 50;
    EXPECT_THROW(c.validate(), ConfigError);  // no steps
    c.sweep.steps = {25};
    EXPECT_THROW(c.validate(), ConfigError);  // two ends
    c.sweep.iterations = {100};
    EXPECT_NO_THROW(c.validate());
}

TEST(Results, RoundTrip) {
    ResultRow r;
    r.key = {"e", "softmax", 10, 20, 5, 50, 1000, "one_shot", 3};
    r.acc_train = 0.1 + 0.2;
    r.acc_test = 1.0 / 3.0;
    r.bias = r.acc_train - r.acc_test;
    const auto back = parse_row(format_row(r), 2);
    EXPECT_EQ(back.key, r.key);
    EXPECT_EQ(back.acc_train, r.acc_train);
    EXPECT_EQ(back.acc_test, r.acc_test);
    EXPECT_EQ(back.bias, r.bias);
    EXPECT_THROW(parse_row("e,softmax,1", 2), ParseError);
}

TEST(Grid, CellsAndResults) {
    TempDir dir("cells");
    const auto c = small_config(dir.path);
    const auto s = run_experiment(c, {std::nullopt, true});
    EXPECT_TRUE(s.ok());
    // variants x iterations x seeds
    EXPECT_EQ(s.cells_total, 8u);
    EXPECT_EQ(s.cells_run, 8u);
    const auto rows = read_results(dir.path / "results.csv");
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        EXPECT_DOUBLE_EQ(r.bias, r.acc_train - r.acc_test);
        EXPECT_EQ(r.wall_time_seconds, 0.0);
        EXPECT_EQ(r.key.per_class_size, 10u);
    }
    EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(),
                               [](const ResultRow& a, const ResultRow& b) { return a.key < b.key; }));
    EXPECT_EQ(slurp(dir.path / "errors.csv"), "cell,error_class,message\n");
    EXPECT_TRUE(fs::exists(dir.path / "coverage.csv"));
    EXPECT_TRUE(fs::exists(dir.path / "diversity.csv"));
    EXPECT_TRUE(fs::exists(dir.path / "timings.csv"));
}

TEST(Grid, DeterministicAcrossWorkerCounts) {
    TempDir a("w1"), b("w4");
    run_experiment(small_config(a.path), {1, true});
    run_experiment(small_config(b.path), {4, true});
    for (const char* f : {"results.csv", "errors.csv", "coverage.csv", "diversity.csv"})
        EXPECT_EQ(slurp(a.path / f), slurp(b.path / f)) << f;
}

TEST(Grid, RerunIsNoOpAndResumeFillsGaps) {
    TempDir dir("resume");
    const auto c = small_config(dir.path);
    run_experiment(c, {std::nullopt, true});
    const auto first = slurp(dir.path / "results.csv");
    const auto cov = slurp(dir.path / "coverage.csv");

    const auto again = run_experiment(c, {std::nullopt, true});
    EXPECT_EQ(again.cells_run, 0u);
    EXPECT_EQ(again.cells_resumed, 8u);
    EXPECT_EQ(slurp(dir.path / "results.csv"), first);
    EXPECT_EQ(slurp(dir.path / "coverage.csv"), cov);

    // Drop the last row: only its group reruns and the output is unchanged.
    auto trimmed = first.substr(0, first.find_last_of('\n', first.size() - 2) + 1);
    std::ofstream(dir.path / "results.csv", std::ios::binary | std::ios::trunc) << trimmed;
    const auto resumed = run_experiment(c, {std::nullopt, true});
    EXPECT_EQ(resumed.cells_resumed, 7u);
    EXPECT_EQ(resumed.cells_run, 1u);
    EXPECT_EQ(slurp(dir.path / "results.csv"), first);
    EXPECT_EQ(slurp(dir.path / "coverage.csv"), cov);
}

TEST(Grid, ForeignExperimentRefused) {
    TempDir dir("foreign");
    auto c = small_config(dir.path);
    c.variants = {GanVariant::softmax};
    c.sweep.iterations = {50};
    c.seeds = {0};
    run_experiment(c, {std::nullopt, true});
    c.id = "other";
    EXPECT_THROW(run_experiment(c, {std::nullopt, true}), ConfigError);
}

TEST(Grid, FailingCellsRecordedOthersKept) {
    TempDir dir("failing");
    auto c = small_config(dir.path);
    c.variants = {GanVariant::softmax};
    c.sweep.iterations = {50};
    c.seeds = {0};
    c.coverage = c.diversity = false;
    // 200 samples, 2 classes, half for training: about 50 per class, so 500 fails.
    c.sweep.size_axis = SizeAxis::training;
    c.sweep.per_class = {10, 500};
    c.sweep.sample_per_class = 10;
    const auto s = run_experiment(c, {std::nullopt, true});
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(s.rows.size(), 1u);
    ASSERT_EQ(s.errors.size(), 1u);
    EXPECT_EQ(s.errors[0].key.per_class_size, 500u);
    EXPECT_EQ(s.errors[0].error_class, "insufficient_samples");
    const auto errors = slurp(dir.path / "errors.csv");
    EXPECT_NE(errors.find("insufficient_samples"), std::string::npos);
    EXPECT_EQ(read_results(dir.path / "results.csv").size(), 1u);
}

TEST(Presets, AllValidate) {
    for (const auto& n : preset_names()) {
        EXPECT_NO_THROW(preset(n, false)) << n;
        EXPECT_NO_THROW(preset(n, true)) << n;
    }
    EXPECT_THROW(preset("fig4"), ConfigError);
}

TEST(Presets, Axes) {
    EXPECT_EQ(preset("fig7", true).sweep.iterations.back(), 200000u);
    EXPECT_EQ(preset("fig9").sweep.per_class, (std::vector<std::size_t>{50, 100, 200, 500}));
    const auto f8 = preset("fig8");
    EXPECT_EQ(f8.sweep.mode, SamplingMode::mixed);
    EXPECT_EQ(f8.sweep.steps, (std::vector<std::size_t>{200, 500, 1000, 2000}));
    EXPECT_EQ(preset("fig6").sweep.size_axis, SizeAxis::training);
    EXPECT_EQ(preset("fig12").variants.size(), 4u);
    const auto f11 = preset("fig11");
    EXPECT_EQ(f11.dataset.samples_for(784), 500u);
}

TEST(Plot, MatchesGolden) {
    TempDir dir("plot");
    const fs::path fixtures(AUGBIAS_FIXTURE_DIR);
    const auto rows = read_results(fixtures / "plot_rows.csv");
    const auto written = plot_results(rows, "iteration", "bias", "variant", dir.path);
    ASSERT_EQ(written.size(), 1u);
    EXPECT_EQ(written[0].filename(), "demo_bias_vs_iteration.svg");
    EXPECT_EQ(slurp(written[0]), slurp(fixtures / "plot_golden.svg"));
}

TEST(Plot, AveragesRepeatedPoints) {
    std::vector<ResultRow> rows(2);
    for (auto& r : rows) r.key = {"e", "softmax", 2, 4, 2, 10, 100, "one_shot", 0};
    rows[0].bias = 0.1;
    rows[1].bias = 0.3;
    rows[1].key.seed = 1;
    TempDir dir("avg");
    const auto p = plot_results(rows, "iteration", "bias", "none", dir.path);
    // Single point: the y range is padded around 0.2.
    EXPECT_NE(slurp(p[0]).find(">0.7<"), std::string::npos);
    EXPECT_THROW(plot_results(rows, "nope", "bias", "none", dir.path), InvalidInput);
}
