#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "augbias/bias/measure.hpp"
#include "augbias/datagen/split.hpp"
#include "augbias/pipeline/train_bank.hpp"
#include "augbias/sampling/sampler.hpp"

namespace augbias {

struct ScreenOptions {
    std::size_t iteration_end = 20000;
    std::size_t per_class = 50;
    double train_ratio = 0.5;
    std::vector<std::uint64_t> seeds = {0};
    ClassifierSpec classifier;
    GanOverrides overrides;
};

// Builds the generators of one variant from the real training half. The bank
// must hold a checkpoint at options.iteration_end for every class.
using BankFactory = std::function<GeneratorBank(const Dataset& train, const ScreenOptions&, Rng&)>;

struct ScreenVariant {
    std::string name;
    BankFactory factory;
};

inline ScreenVariant gan_screen_variant(GanVariant v) {
    return {to_string(v), [v](const Dataset& train, const ScreenOptions& o, Rng& rng) {
                return train_generators(train, v, o.iteration_end, rng, o.overrides).bank;
            }};
}

struct ScreenRow {
    std::string name;
    BiasSummary summary;
    std::vector<BiasReport> reports;  // successful seeds, in seed order
    std::vector<std::string> errors;  // "seed N: message"
};

// One cell per (variant, seed): a fresh stream from the seed drives the
// stratified split, generator construction, one-shot sampling and the bias
// measurement, so every variant of a seed sees the same split.
inline BiasReport screen_cell(const Dataset& data, const ScreenVariant& v, const ScreenOptions& o,
                              std::uint64_t seed) {
    Rng rng(seed);
    auto halves = split(data, o.train_ratio, true, rng);
    const GeneratorBank bank = v.factory(halves.train, o, rng);
    const auto plan = SamplingPlan::one_shot(o.iteration_end, SamplingPlan::uniform_targets(data.class_count, o.per_class));
    const auto aug = one_shot_sample(bank, plan, rng);
    return measure_bias(aug, halves.test, o.classifier, rng);
}

inline std::vector<ScreenRow> variant_screen(const Dataset& data, const std::vector<ScreenVariant>& variants,
                                             const ScreenOptions& o) {
    if (variants.empty()) throw InvalidInput("variant_screen: no variants");
    if (o.seeds.empty()) throw InvalidInput("variant_screen: no seeds");
    std::vector<ScreenRow> rows;
    for (const auto& v : variants) {
        ScreenRow row{v.name, {}, {}, {}};
        for (auto seed : o.seeds) {
            try {
                row.reports.push_back(screen_cell(data, v, o, seed));
            } catch (const std::exception& e) {
                row.errors.push_back("seed " + std::to_string(seed) + ": " + e.what());
            }
        }
        row.summary = summarize(row.reports);
        rows.push_back(std::move(row));
    }
    // Rows without a single successful seed sort last.
    std::stable_sort(rows.begin(), rows.end(), [](const ScreenRow& a, const ScreenRow& b) {
        const bool ea = a.summary.count == 0, eb = b.summary.count == 0;
        if (ea != eb) return eb;
        if (!ea && a.summary.mean != b.summary.mean) return a.summary.mean < b.summary.mean;
        return a.name < b.name;
    });
    return rows;
}

}  // namespace augbias
