#pragma once

#include <optional>
#include <vector>

#include "augbias/core/rng.hpp"
#include "augbias/datagen/dataset.hpp"
#include "augbias/datagen/split.hpp"
#include "augbias/gan/spec.hpp"
#include "augbias/gan/trainer.hpp"
#include "augbias/sampling/bank.hpp"

namespace augbias {

// Budget and optimizer knobs layered over the default architecture.
struct GanOverrides {
    std::optional<std::size_t> latent_dim;
    std::optional<std::size_t> batch_size;
    std::optional<double> gen_lr;
    std::optional<double> disc_lr;
    std::optional<std::size_t> d_steps;
    std::optional<std::size_t> g_steps;
    std::optional<std::size_t> log_every;

    GanSpec build(GanVariant variant, std::size_t dims, std::size_t classes, std::size_t iterations,
                  std::vector<std::size_t> checkpoints) const {
        GanSpec spec = default_gan_spec(variant, dims, classes, iterations);
        if (latent_dim) {
            spec.latent_dim = *latent_dim;
            spec.gen.layer_sizes.front() = *latent_dim + (spec.conditional() ? classes : 0);
        }
        if (batch_size) spec.batch_size = *batch_size;
        if (gen_lr) spec.gen_opt.lr = *gen_lr;
        if (disc_lr) spec.disc_opt.lr = *disc_lr;
        if (d_steps) spec.d_steps = *d_steps;
        if (g_steps) spec.g_steps = *g_steps;
        if (log_every) spec.log_every = *log_every;
        spec.checkpoint_iterations = std::move(checkpoints);
        return spec;
    }
};

struct TrainedBank {
    GeneratorBank bank;
    std::vector<GeneratorSnapshot> snapshots;
    std::vector<TrainingTrace> traces;  // one per training run
};

// Trains the generators one variant needs on `train`: one GAN per class for
// per-class variants, a single GAN for the conditional variant. Each run
// gets its own stream derived from one word of `rng`. Checkpoints default to
// the final iteration.
inline TrainedBank train_generators(const Dataset& train, GanVariant variant, std::size_t iterations, Rng& rng,
                                    const GanOverrides& overrides = {},
                                    std::vector<std::size_t> checkpoints = {}) {
    if (checkpoints.empty()) checkpoints = {iterations};
    const GanSpec spec = overrides.build(variant, train.dims(), train.class_count, iterations, checkpoints);
    const std::uint64_t base = rng.next_u64();
    TrainedBank out{GeneratorBank(train.dims(), train.class_count), {}, {}};
    auto run = [&](const Dataset& data, std::uint64_t stream) {
        Rng child(Rng::derive_seed(base, stream));
        auto res = train_gan(spec, data, child);
        out.bank.add(res.snapshots);
        out.snapshots.insert(out.snapshots.end(), res.snapshots.begin(), res.snapshots.end());
        out.traces.push_back(std::move(res.trace));
    };
    if (spec.conditional()) {
        run(train, 0);
    } else {
        const auto groups = group_by_class(train);
        for (std::size_t c = 0; c < groups.size(); ++c)
            if (groups[c].size() > 0) run(groups[c], c);
    }
    return out;
}

}  // namespace augbias
