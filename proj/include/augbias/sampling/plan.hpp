#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"

namespace augbias {

// {start + k*step : k >= 0, start + k*step <= end}
inline std::vector<std::size_t> checkpoint_schedule(std::size_t start, std::size_t end, std::size_t step) {
    if (step == 0) throw InvalidInput("checkpoint_schedule: step must be >= 1");
    if (start > end) throw InvalidInput("checkpoint_schedule: start must not exceed end");
    std::vector<std::size_t> out;
    for (std::size_t it = start; it <= end; it += step) {
        out.push_back(it);
        if (end - it < step) break;
    }
    return out;
}

// Splits T samples over K checkpoints: ceil(T/K) for the first T mod K,
// floor(T/K) for the rest.
inline std::vector<std::size_t> allocate_batches(std::size_t total, std::size_t k) {
    if (k == 0) throw InvalidInput("allocate_batches: no checkpoints");
    std::vector<std::size_t> out(k, total / k);
    for (std::size_t i = 0; i < total % k; ++i) ++out[i];
    return out;
}

enum class SamplingMode { one_shot, mixed };

inline const char* to_string(SamplingMode m) { return m == SamplingMode::one_shot ? "one_shot" : "mixed"; }

struct SamplingPlan {
    SamplingMode mode = SamplingMode::one_shot;
    std::size_t iteration_end = 0;  // one_shot
    std::size_t start_iteration = 0;  // mixed
    std::size_t end_iteration = 0;
    std::size_t step = 1;
    std::map<std::size_t, std::size_t> per_class_target;  // class id -> count
    std::uint64_t seed = 0;

    static SamplingPlan one_shot(std::size_t iteration_end, std::map<std::size_t, std::size_t> targets,
                                 std::uint64_t seed = 0) {
        SamplingPlan p;
        p.mode = SamplingMode::one_shot;
        p.iteration_end = iteration_end;
        p.per_class_target = std::move(targets);
        p.seed = seed;
        return p;
    }

    static SamplingPlan mixed(std::size_t start, std::size_t end, std::size_t step,
                              std::map<std::size_t, std::size_t> targets, std::uint64_t seed = 0) {
        SamplingPlan p;
        p.mode = SamplingMode::mixed;
        p.start_iteration = start;
        p.end_iteration = end;
        p.step = step;
        p.per_class_target = std::move(targets);
        p.seed = seed;
        return p;
    }

    // Same count for classes 0..C-1.
    static std::map<std::size_t, std::size_t> uniform_targets(std::size_t classes, std::size_t per_class) {
        std::map<std::size_t, std::size_t> t;
        for (std::size_t c = 0; c < classes; ++c) t[c] = per_class;
        return t;
    }

    void validate() const {
        if (per_class_target.empty()) throw InvalidInput("SamplingPlan: no target classes");
        for (const auto& [c, n] : per_class_target)
            if (n == 0) throw InvalidInput("SamplingPlan: target for class " + std::to_string(c) + " is 0");
        if (mode == SamplingMode::mixed) {
            if (start_iteration > end_iteration)
                throw InvalidInput("SamplingPlan: mixed start exceeds end");
            if (step == 0) throw InvalidInput("SamplingPlan: mixed step must be >= 1");
        }
    }

    std::vector<std::size_t> iterations() const {
        if (mode == SamplingMode::one_shot) return {iteration_end};
        return checkpoint_schedule(start_iteration, end_iteration, step);
    }

    std::size_t total() const {
        std::size_t t = 0;
        for (const auto& kv : per_class_target) t += kv.second;
        return t;
    }

    std::string describe() const {
        if (mode == SamplingMode::one_shot) return "one_shot@" + std::to_string(iteration_end);
        return "mixed[" + std::to_string(start_iteration) + "," + std::to_string(end_iteration) +
               "]/" + std::to_string(step);
    }

    friend bool operator==(const SamplingPlan&, const SamplingPlan&) = default;
};

}  // namespace augbias
