#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/rng.hpp"
#include "augbias/datagen/csv.hpp"
#include "augbias/datagen/dataset.hpp"
#include "augbias/sampling/bank.hpp"
#include "augbias/sampling/plan.hpp"

namespace augbias {

struct Provenance {
    std::size_t cls = 0;
    std::size_t iteration = 0;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct AugmentedSet {
    Dataset data;
    std::vector<Provenance> provenance;  // one per row of data
    SamplingPlan plan;
};

// Shared path for both plan modes. Classes are emitted in id order, each
// class's checkpoints in ascending order. Every (class, iteration) batch
// draws from its own stream derived from one word of `rng`, so a mixed plan
// with a single checkpoint reproduces the one-shot plan at that iteration.
inline AugmentedSet sample_plan(const GeneratorBank& bank, const SamplingPlan& plan, Rng& rng) {
    plan.validate();
    const auto iters = plan.iterations();
    std::vector<std::string> missing;
    for (const auto& [cls, n] : plan.per_class_target)
        for (auto it : iters)
            if (!bank.has(cls, it))
                missing.push_back("(" + std::to_string(cls) + ", " + std::to_string(it) + ")");
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? " " : "") + missing[i];
        if (missing.size() > 20) list += " ... (" + std::to_string(missing.size()) + " total)";
        throw PlanInfeasible("sampling plan " + plan.describe() + " needs missing snapshots (class, iteration): " + list);
    }

    const std::uint64_t base = rng.next_u64();
    AugmentedSet out;
    out.plan = plan;
    out.data.features = Matrix(0, bank.dims());
    out.data.class_count = bank.class_count();
    for (const auto& [cls, target] : plan.per_class_target) {
        const auto batches = allocate_batches(target, iters.size());
        for (std::size_t k = 0; k < iters.size(); ++k) {
            if (batches[k] == 0) continue;
            Rng child(Rng::derive_seed(Rng::derive_seed(base, cls), iters[k]));
            out.data.features.append_rows(bank.sample(cls, iters[k], batches[k], child));
            out.data.labels.insert(out.data.labels.end(), batches[k], cls);
            out.provenance.insert(out.provenance.end(), batches[k], Provenance{cls, iters[k]});
        }
    }
    return out;
}

inline AugmentedSet one_shot_sample(const GeneratorBank& bank, const SamplingPlan& plan, Rng& rng) {
    if (plan.mode != SamplingMode::one_shot) throw InvalidInput("one_shot_sample: plan is not one-shot");
    return sample_plan(bank, plan, rng);
}

inline AugmentedSet mixed_sample(const GeneratorBank& bank, const SamplingPlan& plan, Rng& rng) {
    if (plan.mode != SamplingMode::mixed) throw InvalidInput("mixed_sample: plan is not mixed");
    return sample_plan(bank, plan, rng);
}

// Merges per-class augmentation sets so class proportions follow
// `reference`. Without `total`, every class is scaled by the same factor
// s = min_c(available_c / reference_c) and rounded, which keeps the most
// data the inputs allow. With `total`, counts are the largest-remainder
// apportionment of total. Surplus rows are dropped at random; the merged
// order is shuffled.
inline AugmentedSet recombine(const std::vector<AugmentedSet>& sets, const Dataset& reference, Rng& rng,
                              std::optional<std::size_t> total = std::nullopt) {
    if (sets.empty()) throw InvalidInput("recombine: no input sets");
    if (reference.size() == 0) throw InvalidInput("recombine: empty reference");
    const std::size_t C = reference.class_count, d = sets.front().data.dims();

    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pool(C);  // (set, row)
    for (std::size_t s = 0; s < sets.size(); ++s) {
        const auto& data = sets[s].data;
        if (data.class_count != C) throw InvalidInput("recombine: class universe mismatch with reference");
        if (data.dims() != d || data.dims() != reference.dims())
            throw InvalidInput("recombine: feature width mismatch");
        for (std::size_t r = 0; r < data.size(); ++r) pool[data.labels[r]].push_back({s, r});
    }
    const auto ref = reference.class_counts();
    const double n_ref = static_cast<double>(reference.size());

    std::vector<std::size_t> want(C, 0);
    if (total) {
        std::vector<std::pair<double, std::size_t>> rem;
        std::size_t assigned = 0;
        for (std::size_t c = 0; c < C; ++c) {
            const double exact = static_cast<double>(*total) * static_cast<double>(ref[c]) / n_ref;
            want[c] = static_cast<std::size_t>(std::floor(exact));
            assigned += want[c];
            rem.push_back({exact - std::floor(exact), c});
        }
        std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
        for (std::size_t i = 0; assigned < *total; ++i, ++assigned) ++want[rem[i % C].second];
    } else {
        double s = INFINITY;
        for (std::size_t c = 0; c < C; ++c)
            if (ref[c] > 0) s = std::min(s, static_cast<double>(pool[c].size()) / static_cast<double>(ref[c]));
        for (std::size_t c = 0; c < C; ++c)
            want[c] = std::min(pool[c].size(),
                               static_cast<std::size_t>(std::llround(s * static_cast<double>(ref[c]))));
    }

    std::string deficit;
    for (std::size_t c = 0; c < C; ++c)
        if (pool[c].size() < want[c] || (ref[c] > 0 && want[c] == 0 && !total))
            deficit += " class " + std::to_string(c) + ": have " + std::to_string(pool[c].size()) +
                       ", need " + std::to_string(std::max<std::size_t>(want[c], 1));
    if (!deficit.empty()) throw InsufficientSamples("recombine: insufficient samples;" + deficit);

    std::vector<std::pair<std::size_t, std::size_t>> chosen;
    AugmentedSet out;
    out.plan = sets.front().plan;
    out.plan.per_class_target.clear();
    for (std::size_t c = 0; c < C; ++c) {
        rng.shuffle(pool[c]);
        chosen.insert(chosen.end(), pool[c].begin(), pool[c].begin() + static_cast<long>(want[c]));
        if (want[c] > 0) out.plan.per_class_target[c] = want[c];
    }
    rng.shuffle(chosen);

    out.data.features = Matrix(chosen.size(), d);
    out.data.class_count = C;
    out.data.meta = reference.meta;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        const auto [s, r] = chosen[i];
        const auto src = sets[s].data.features.row(r);
        std::copy(src.begin(), src.end(), out.data.features.row(i).begin());
        out.data.labels.push_back(sets[s].data.labels[r]);
        out.provenance.push_back(r < sets[s].provenance.size() ? sets[s].provenance[r]
                                                               : Provenance{sets[s].data.labels[r], 0});
    }
    return out;
}

// Feature CSV (datagen format) plus a provenance sidecar with columns
// sample_index,class,snapshot_iteration.
inline void save_augmented(const AugmentedSet& set, const std::filesystem::path& csv_path,
                           const std::filesystem::path& provenance_path) {
    save_csv(set.data, csv_path);
    if (provenance_path.has_parent_path()) std::filesystem::create_directories(provenance_path.parent_path());
    std::ofstream out(provenance_path);
    if (!out) throw InvalidInput("save_augmented: cannot write " + provenance_path.string());
    out << "sample_index,class,snapshot_iteration\n";
    for (std::size_t i = 0; i < set.provenance.size(); ++i)
        out << i << ',' << set.provenance[i].cls << ',' << set.provenance[i].iteration << '\n';
}

}  // namespace augbias
