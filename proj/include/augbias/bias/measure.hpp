#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "augbias/bias/classifier.hpp"
#include "augbias/core/error.hpp"
#include "augbias/core/rng.hpp"
#include "augbias/datagen/dataset.hpp"
#include "augbias/sampling/bank.hpp"
#include "augbias/sampling/plan.hpp"
#include "augbias/sampling/sampler.hpp"

namespace augbias {

inline constexpr const char* kBiasProtocol =
    "classifier trained on augmentation data only; acc_train on augmentation data, acc_test on held-out real data";

struct BiasReport {
    double acc_train = 0.0;
    double acc_test = 0.0;
    double bias = 0.0;  // acc_train - acc_test
    std::map<std::size_t, double> per_class_test_accuracy;  // classes present in the test set
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::uint64_t classifier_hash = 0;
    std::uint64_t seed = 0;
    std::string protocol = kBiasProtocol;
};

// Overfitting gap of a classifier fit to `aug` and scored on `real_test`.
// Negative values are legitimate (the fake data generalizes better than it
// fits itself).
inline BiasReport measure_bias(const Dataset& aug, const Dataset& real_test, const ClassifierSpec& spec, Rng& rng) {
    if (aug.class_count != real_test.class_count)
        throw InvalidInput("measure_bias: class universe mismatch (" + std::to_string(aug.class_count) + " vs " +
                           std::to_string(real_test.class_count) + ")");
    if (aug.dims() != real_test.dims())
        throw InvalidInput("measure_bias: feature width mismatch (" + std::to_string(aug.dims()) + " vs " +
                           std::to_string(real_test.dims()) + ")");
    real_test.validate(true);

    BiasReport r;
    r.seed = rng.seed();
    r.classifier_hash = spec.hash();
    const Classifier clf = train_classifier(spec, aug, rng);
    r.acc_train = accuracy(clf, aug);
    r.acc_test = accuracy(clf, real_test);
    r.bias = r.acc_train - r.acc_test;
    r.train_size = aug.size();
    r.test_size = real_test.size();

    const auto pred = clf.predict(real_test.features);
    std::map<std::size_t, std::pair<std::size_t, std::size_t>> hits;  // class -> (correct, total)
    for (std::size_t i = 0; i < pred.size(); ++i) {
        auto& h = hits[real_test.labels[i]];
        h.first += pred[i] == real_test.labels[i];
        ++h.second;
    }
    for (const auto& [c, h] : hits) r.per_class_test_accuracy[c] = double(h.first) / double(h.second);
    return r;
}

inline BiasReport measure_bias(const AugmentedSet& aug, const Dataset& real_test, const ClassifierSpec& spec,
                               Rng& rng) {
    return measure_bias(aug.data, real_test, spec, rng);
}

struct BiasSummary {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation, 0 for a single value
    std::size_t count = 0;
};

inline BiasSummary summarize(const std::vector<double>& values) {
    BiasSummary s;
    s.count = values.size();
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= double(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / double(values.size() - 1));
    }
    return s;
}

inline BiasSummary summarize(const std::vector<BiasReport>& reports) {
    std::vector<double> b;
    for (const auto& r : reports) b.push_back(r.bias);
    return summarize(b);
}

// ---------------------------------------------------------------- coverage

inline constexpr std::size_t kCoverageProbeSize = 160;

struct CoverageReport {
    std::vector<std::size_t> counts;  // generated samples per predicted class
    std::vector<std::size_t> missing_classes;
    std::size_t probe_size = 0;
};

// Labels every generated row with a classifier fit to real data and reports
// which classes never appear.
inline CoverageReport class_coverage(const Dataset& generated, const Dataset& real_train, const ClassifierSpec& spec,
                                     Rng& rng) {
    real_train.validate(false);
    if (generated.dims() != real_train.dims()) throw InvalidInput("class_coverage: feature width mismatch");
    if (generated.size() == 0) throw InvalidInput("class_coverage: empty probe");
    const Classifier clf = train_classifier(spec, real_train, rng);
    CoverageReport r;
    r.probe_size = generated.size();
    r.counts.assign(real_train.class_count, 0);
    for (auto p : clf.predict(generated.features)) ++r.counts[p];
    for (std::size_t c = 0; c < r.counts.size(); ++c)
        if (r.counts[c] == 0) r.missing_classes.push_back(c);
    return r;
}

inline CoverageReport class_coverage(const AugmentedSet& aug, const Dataset& real_train, const ClassifierSpec& spec,
                                     Rng& rng) {
    return class_coverage(aug.data, real_train, spec, rng);
}

// Draws a probe of `probe_size` samples spread evenly over the classes at
// one checkpoint, then runs class_coverage on it.
inline CoverageReport coverage_probe(const GeneratorBank& bank, std::size_t iteration, const Dataset& real_train,
                                     const ClassifierSpec& spec, Rng& rng,
                                     std::size_t probe_size = kCoverageProbeSize) {
    const auto split = allocate_batches(probe_size, bank.class_count());
    std::map<std::size_t, std::size_t> targets;
    for (std::size_t c = 0; c < split.size(); ++c)
        if (split[c] > 0) targets[c] = split[c];
    auto probe = one_shot_sample(bank, SamplingPlan::one_shot(iteration, targets), rng);
    return class_coverage(probe, real_train, spec, rng);
}

// ---------------------------------------------------------------- diversity

inline constexpr double kDiversityThreshold = 0.3;

struct DiversityResult {
    double ratio = 0.0;
    bool diverse = false;
    double generated_spread = 0.0;  // mean pairwise Euclidean distance
    double real_spread = 0.0;
};

inline double mean_pairwise_distance(const Matrix& x) {
    const std::size_t n = x.rows();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto a = x.row(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            const auto b = x.row(k);
            double d2 = 0.0;
            for (std::size_t j = 0; j < a.size(); ++j) d2 += (a[j] - b[j]) * (a[j] - b[j]);
            sum += std::sqrt(d2);
        }
    }
    return sum / (double(n) * double(n - 1) / 2.0);
}

// Spread of generated samples relative to the real class: mean pairwise
// distance ratio, "diverse" iff ratio >= threshold.
inline DiversityResult diversity_probe(const Dataset& generated, const Dataset& real_class,
                                       double threshold = kDiversityThreshold) {
    auto single_class = [](const Dataset& d, const char* what) {
        for (auto l : d.labels)
            if (l != d.labels.front())
                throw InvalidInput(std::string("diversity_probe: ") + what + " set has more than one class");
    };
    if (generated.size() < 2 || real_class.size() < 2)
        throw UndefinedRatio("diversity_probe: need at least 2 samples in each set");
    if (generated.dims() != real_class.dims()) throw InvalidInput("diversity_probe: feature width mismatch");
    single_class(generated, "generated");
    single_class(real_class, "real");
    DiversityResult r;
    r.generated_spread = mean_pairwise_distance(generated.features);
    r.real_spread = mean_pairwise_distance(real_class.features);
    if (r.real_spread == 0.0) throw UndefinedRatio("diversity_probe: real samples are all identical");
    r.ratio = r.generated_spread / r.real_spread;
    r.diverse = r.ratio >= threshold;
    return r;
}

}  // namespace augbias
