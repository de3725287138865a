#include <gtest/gtest.h>

#include <cmath>

#include "augbias/bias/classifier.hpp"
#include "augbias/bias/measure.hpp"
#include "augbias/datagen/make_classification.hpp"
#include "augbias/datagen/split.hpp"
#include "augbias/sampling/mock_generators.hpp"
#include "support/bias_checks.hpp"

using namespace augbias;
using augbias::oracle::eq4_holds;

namespace {

Dataset blobs(std::size_t per_class, std::size_t classes, std::size_t d, double sep, std::uint64_t seed) {
    Rng rng(seed);
    Dataset data;
    data.features = Matrix(per_class * classes, d);
    data.class_count = classes;
    for (std::size_t c = 0; c < classes; ++c)
        for (std::size_t i = 0; i < per_class; ++i) {
            const std::size_t r = c * per_class + i;
            for (std::size_t j = 0; j < d; ++j) data.features(r, j) = rng.normal() + (j == c % d ? sep : 0.0);
            data.labels.push_back(c);
        }
    return data;
}

Dataset with_labels(std::size_t rows, std::vector<std::size_t> labels, std::size_t classes) {
    Dataset d;
    d.features = Matrix(rows, 1, 0.5);
    d.labels = std::move(labels);
    d.class_count = classes;
    return d;
}

ClassifierSpec zero_epochs() {
    ClassifierSpec s;
    s.epochs = 0;
    return s;
}

}  // namespace

// ---------------------------------------------------------------- classifier

TEST(Classifier, SeparableTrainingAccuracy) {
    auto data = blobs(100, 2, 2, 6.0, 1);
    Rng rng(2);
    auto clf = train_classifier({}, data, rng);
    EXPECT_GT(accuracy(clf, data), 0.95);
}

TEST(Classifier, PerfectFitScoresOne) {
    auto data = blobs(50, 3, 3, 30.0, 4);
    Rng rng(2);
    EXPECT_EQ(accuracy(train_classifier({}, data, rng), data), 1.0);
}

TEST(Classifier, ShuffledLabelsAreChanceLevel) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng rng(seed);
        auto make = [&](std::size_t n) {
            Dataset d;
            d.features = standard_normal(n, 10, rng);
            d.class_count = 2;
            for (std::size_t i = 0; i < n; ++i) d.labels.push_back(i % 2);
            rng.shuffle(d.labels);
            return d;
        };
        auto train = make(200), test = make(200);
        const double acc = accuracy(train_classifier({}, train, rng), test);
        EXPECT_GE(acc, 0.35) << seed;
        EXPECT_LE(acc, 0.65) << seed;
    }
}

TEST(Classifier, ZeroEpochsPredictsUniformly) {
    for (std::size_t C : {2, 4, 10}) {
        auto data = blobs(20, C, 3, 5.0, C);
        Rng rng(1);
        auto clf = train_classifier(zero_epochs(), data, rng);
        auto s = clf.scores(data.features);
        for (double v : s.data()) EXPECT_EQ(v, 0.0);
        EXPECT_DOUBLE_EQ(accuracy(clf, data), 1.0 / double(C));
    }
}

TEST(Classifier, HandBuiltThreeSampleFixture) {
    // 1-D logistic model: score(class 0) = -x, score(class 1) = x.
    std::vector<DenseLayer> layers = {{Matrix{{-1.0}, {1.0}}, {0.0, 0.0}}};
    Classifier clf({0.0}, {1.0}, layers, {Activation::linear()}, 2);
    Dataset d;
    d.features = Matrix{{-1.0}, {2.0}, {3.0}};
    d.labels = {0, 1, 0};
    d.class_count = 2;
    EXPECT_DOUBLE_EQ(accuracy(clf, d), 2.0 / 3.0);
    // Tied scores resolve to the lowest class id.
    EXPECT_EQ(clf.predict(Matrix{{0.0}}), (std::vector<std::size_t>{0}));
}

TEST(Classifier, Errors) {
    Rng rng(1);
    Dataset single = blobs(10, 1, 2, 0.0, 1);
    single.class_count = 2;
    EXPECT_THROW(train_classifier({}, single, rng), InvalidInput);
    Dataset empty;
    empty.features = Matrix(0, 2);
    empty.class_count = 2;
    EXPECT_THROW(train_classifier({}, empty, rng), InvalidInput);
    auto clf = train_classifier({}, blobs(10, 2, 2, 3.0, 1), rng);
    EXPECT_THROW(accuracy(clf, empty), InvalidInput);
    EXPECT_THROW(clf.predict(Matrix(1, 3)), InvalidInput);
}

TEST(Classifier, DeterministicGivenSeed) {
    auto data = blobs(30, 3, 4, 2.0, 9);
    for (auto model : {ClassifierModel::logistic, ClassifierModel::mlp}) {
        ClassifierSpec spec;
        spec.model = model;
        spec.epochs = 20;
        Rng a(5), b(5);
        auto x = train_classifier(spec, data, a), y = train_classifier(spec, data, b);
        EXPECT_EQ(x.layers(), y.layers());
    }
}

TEST(Classifier, MlpLearnsXor) {
    Rng rng(3);
    Dataset d;
    d.features = Matrix(400, 2);
    d.class_count = 2;
    for (std::size_t r = 0; r < 400; ++r) {
        const double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
        d.features(r, 0) = a;
        d.features(r, 1) = b;
        d.labels.push_back((a > 0) != (b > 0));
    }
    ClassifierSpec spec;
    spec.model = ClassifierModel::mlp;
    spec.hidden_sizes = {16};
    EXPECT_GT(accuracy(train_classifier(spec, d, rng), d), 0.9);
    EXPECT_LT(accuracy(train_classifier({}, d, rng), d), 0.75);
}

TEST(Classifier, SpecHashTracksSettings) {
    ClassifierSpec a, b;
    EXPECT_EQ(a.hash(), b.hash());
    b.epochs = 100;
    EXPECT_NE(a.hash(), b.hash());
}

// ---------------------------------------------------------------- measure_bias

TEST(MeasureBias, SubtractionOfAccuracies) {
    // An untrained model predicts class 0 everywhere, so accuracy is the
    // class-0 share: 9/10 on the augmentation set, 81/100 on the test set.
    std::vector<std::size_t> aug_labels(10, 0), test_labels(100, 0);
    aug_labels[9] = 1;
    std::fill(test_labels.begin() + 81, test_labels.end(), 1);
    Rng rng(1);
    auto r = measure_bias(with_labels(10, aug_labels, 2), with_labels(100, test_labels, 2), zero_epochs(), rng);
    EXPECT_DOUBLE_EQ(r.acc_train, 0.90);
    EXPECT_DOUBLE_EQ(r.acc_test, 0.81);
    EXPECT_NEAR(r.bias, 0.09, 1e-12);
    EXPECT_TRUE(eq4_holds(r));
    EXPECT_EQ(r.train_size, 10u);
    EXPECT_EQ(r.test_size, 100u);
    EXPECT_DOUBLE_EQ(r.per_class_test_accuracy.at(0), 1.0);
    EXPECT_DOUBLE_EQ(r.per_class_test_accuracy.at(1), 0.0);
}

TEST(MeasureBias, IdenticalSetsGiveExactlyZero) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto data = blobs(40, 4, 5, 1.0, seed);
        Rng rng(seed);
        auto r = measure_bias(data, data, {}, rng);
        EXPECT_EQ(r.bias, 0.0);
        EXPECT_TRUE(eq4_holds(r));
    }
}

TEST(MeasureBias, NoisyAugmentationGivesNegativeBias) {
    // Label noise in the augmentation set caps its own accuracy while the
    // clean real set is separated by the same boundary.
    auto clean = blobs(200, 2, 2, 8.0, 3);
    auto noisy = blobs(200, 2, 2, 8.0, 4);
    Rng flip(5);
    for (auto& l : noisy.labels)
        if (flip.uniform() < 0.25) l = 1 - l;
    Rng rng(6);
    auto r = measure_bias(noisy, clean, {}, rng);
    EXPECT_LT(r.bias, 0.0);
    EXPECT_GT(r.acc_test, r.acc_train);
    EXPECT_TRUE(eq4_holds(r));
}

TEST(MeasureBias, Deterministic) {
    auto aug = blobs(30, 3, 4, 1.5, 1), test = blobs(30, 3, 4, 1.5, 2);
    Rng a(9), b(9);
    auto x = measure_bias(aug, test, {}, a), y = measure_bias(aug, test, {}, b);
    EXPECT_EQ(x.bias, y.bias);
    EXPECT_EQ(x.per_class_test_accuracy, y.per_class_test_accuracy);
    EXPECT_EQ(x.seed, 9u);
    EXPECT_EQ(x.classifier_hash, ClassifierSpec{}.hash());
    EXPECT_TRUE(eq4_holds(x));
}

TEST(MeasureBias, RejectsMismatchedUniverseOrWidth) {
    auto aug = blobs(10, 2, 3, 1.0, 1);
    auto other_c = blobs(10, 3, 3, 1.0, 1);
    auto other_d = blobs(10, 2, 4, 1.0, 1);
    Rng rng(1);
    EXPECT_THROW(measure_bias(aug, other_c, {}, rng), InvalidInput);
    EXPECT_THROW(measure_bias(aug, other_d, {}, rng), InvalidInput);
}

TEST(MeasureBias, AugmentedSetOverload) {
    auto pool = blobs(50, 3, 2, 4.0, 1);
    GeneratorBank bank(2, 3);
    add_resample_generators(bank, pool, 100);
    Rng rng(2);
    auto aug = one_shot_sample(bank, SamplingPlan::one_shot(100, SamplingPlan::uniform_targets(3, 20)), rng);
    auto r = measure_bias(aug, blobs(50, 3, 2, 4.0, 2), {}, rng);
    EXPECT_EQ(r.train_size, 60u);
    EXPECT_TRUE(eq4_holds(r));
}

TEST(Summary, MeanAndSampleStddev) {
    auto s = summarize(std::vector<double>{0.1, 0.2, 0.3});
    EXPECT_NEAR(s.mean, 0.2, 1e-15);
    EXPECT_NEAR(s.stddev, 0.1, 1e-15);
    EXPECT_EQ(summarize(std::vector<double>{0.5}).stddev, 0.0);
}

// ---------------------------------------------------------------- coverage

TEST(Coverage, PerfectGeneratorMissesNothing) {
    auto real = blobs(50, 10, 10, 6.0, 1);
    GeneratorBank bank(10, 10);
    add_resample_generators(bank, real, 1);
    Rng rng(3);
    auto r = coverage_probe(bank, 1, real, {}, rng);
    EXPECT_EQ(r.probe_size, kCoverageProbeSize);
    EXPECT_EQ(r.probe_size, 160u);
    EXPECT_TRUE(r.missing_classes.empty());
    std::size_t sum = 0;
    for (auto c : r.counts) sum += c;
    EXPECT_EQ(sum, 160u);
}

TEST(Coverage, CollapsedOntoOneCentroidMissesTheRest) {
    auto real = blobs(50, 10, 10, 6.0, 1);
    GeneratorBank bank(10, 10);
    const auto center = class_centroid(real, 3);
    for (std::size_t c = 0; c < 10; ++c) bank.add(c, 1, collapsed_generator(center, 0.05));
    Rng rng(3);
    auto r = coverage_probe(bank, 1, real, {}, rng);
    EXPECT_EQ(r.missing_classes.size(), 9u);
    EXPECT_EQ(r.counts[3], 160u);
}

TEST(Coverage, RequiresFullRealCoverage) {
    auto real = blobs(10, 3, 2, 6.0, 1);
    real.class_count = 4;
    Rng rng(1);
    EXPECT_THROW(class_coverage(blobs(10, 3, 2, 6.0, 2), real, {}, rng), InvalidInput);
}

// ---------------------------------------------------------------- diversity

TEST(Diversity, IdenticalSetsRatioOne) {
    auto d = blobs(30, 1, 4, 0.0, 1);
    auto r = diversity_probe(d, d);
    EXPECT_DOUBLE_EQ(r.ratio, 1.0);
    EXPECT_TRUE(r.diverse);
}

TEST(Diversity, CollapsedRatioZero) {
    auto real = blobs(30, 1, 4, 0.0, 1);
    Dataset gen = real;
    gen.features = Matrix(10, 4, 2.5);
    gen.labels.assign(10, 0);
    auto r = diversity_probe(gen, real);
    EXPECT_EQ(r.ratio, 0.0);
    EXPECT_FALSE(r.diverse);
}

TEST(Diversity, StandardNormalPairsNearOne) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto a = blobs(100, 1, 10, 0.0, 2 * seed), b = blobs(100, 1, 10, 0.0, 2 * seed + 1);
        const double ratio = diversity_probe(a, b).ratio;
        EXPECT_GE(ratio, 0.8) << seed;
        EXPECT_LE(ratio, 1.2) << seed;
    }
}

TEST(Diversity, InvariantUnderCommonOrthogonalMap) {
    auto a = blobs(40, 1, 5, 0.0, 1), b = blobs(60, 1, 5, 0.0, 2);
    for (double& v : a.features.data()) v *= 0.4;
    // Householder reflection I - 2 v v^T / |v|^2.
    Rng rng(7);
    std::vector<double> v(5);
    double vv = 0.0;
    for (double& x : v) {
        x = rng.normal();
        vv += x * x;
    }
    auto reflect = [&](Dataset d) {
        for (std::size_t r = 0; r < d.size(); ++r) {
            auto row = d.features.row(r);
            double dot = 0.0;
            for (std::size_t j = 0; j < 5; ++j) dot += row[j] * v[j];
            for (std::size_t j = 0; j < 5; ++j) row[j] -= 2.0 * dot / vv * v[j];
        }
        return d;
    };
    EXPECT_NEAR(diversity_probe(a, b).ratio, diversity_probe(reflect(a), reflect(b)).ratio, 1e-12);
}

TEST(Diversity, Errors) {
    auto one = blobs(1, 1, 3, 0.0, 1), many = blobs(10, 1, 3, 0.0, 1);
    EXPECT_THROW(diversity_probe(one, many), UndefinedRatio);
    EXPECT_THROW(diversity_probe(many, one), UndefinedRatio);
    Dataset flat = many;
    flat.features.fill(1.0);
    EXPECT_THROW(diversity_probe(many, flat), UndefinedRatio);
    EXPECT_THROW(diversity_probe(blobs(5, 2, 3, 0.0, 1), many), InvalidInput);
}
