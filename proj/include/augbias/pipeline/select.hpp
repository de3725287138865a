#pragma once

#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "augbias/bias/measure.hpp"
#include "augbias/core/error.hpp"
#include "augbias/sampling/plan.hpp"
#include "augbias/sampling/sampler.hpp"

namespace augbias {

struct IterationChoice {
    std::size_t chosen = 0;
    bool exhausted = false;  // no candidate reached the baseline; chosen is the argmin
    BiasReport baseline;     // mixed sampling over [min, max] of the candidates
    std::vector<std::pair<std::size_t, BiasReport>> evaluated;  // in walk order
};

// Walks `candidates` in order, evaluating each lazily, and stops at the first
// whose bias is at or below the baseline.
inline IterationChoice choose_iteration_end(const std::vector<std::size_t>& candidates, const BiasReport& baseline,
                                            const std::function<BiasReport(std::size_t)>& one_shot_bias) {
    if (candidates.empty()) throw InvalidInput("select_iteration_end: no candidates");
    IterationChoice out;
    out.baseline = baseline;
    std::size_t best = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        out.evaluated.emplace_back(candidates[i], one_shot_bias(candidates[i]));
        if (out.evaluated.back().second.bias <= baseline.bias) {
            out.chosen = candidates[i];
            return out;
        }
        if (out.evaluated.back().second.bias < out.evaluated[best].second.bias) best = i;
    }
    out.chosen = out.evaluated[best].first;
    out.exhausted = true;
    return out;
}

// Step of the baseline schedule: the gcd of the candidate offsets from the
// smallest candidate, so every candidate is one of its checkpoints.
inline std::size_t candidate_step(const std::vector<std::size_t>& candidates) {
    const std::size_t lo = *std::min_element(candidates.begin(), candidates.end());
    std::size_t g = 0;
    for (auto c : candidates) g = std::gcd(g, c - lo);
    return g == 0 ? 1 : g;
}

inline IterationChoice select_iteration_end(const GeneratorBank& bank, const Dataset& real_test,
                                            const std::vector<std::size_t>& candidates,
                                            const std::map<std::size_t, std::size_t>& targets,
                                            const ClassifierSpec& spec, Rng& rng, std::size_t step = 0) {
    if (candidates.empty()) throw InvalidInput("select_iteration_end: no candidates");
    const auto [lo, hi] = std::minmax_element(candidates.begin(), candidates.end());
    if (step == 0) step = candidate_step(candidates);
    const auto mixed = mixed_sample(bank, SamplingPlan::mixed(*lo, *hi, step, targets), rng);
    const BiasReport baseline = measure_bias(mixed, real_test, spec, rng);
    return choose_iteration_end(candidates, baseline, [&](std::size_t it) {
        const auto aug = one_shot_sample(bank, SamplingPlan::one_shot(it, targets), rng);
        return measure_bias(aug, real_test, spec, rng);
    });
}

}  // namespace augbias
