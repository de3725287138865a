#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/matrix.hpp"
#include "augbias/core/mlp.hpp"
#include "augbias/core/optimizer.hpp"
#include "augbias/core/rng.hpp"
#include "augbias/datagen/dataset.hpp"
#include "augbias/gan/losses.hpp"
#include "augbias/gan/spec.hpp"

namespace augbias {

struct TraceEntry {
    std::size_t iteration = 0;
    double d_loss = 0.0;
    double g_loss = 0.0;
};

struct TrainingTrace {
    std::vector<TraceEntry> entries;

    bool all_finite() const {
        return std::all_of(entries.begin(), entries.end(), [](const TraceEntry& e) {
            return std::isfinite(e.d_loss) && std::isfinite(e.g_loss);
        });
    }
};

struct GanDiverged : TrainingDiverged {
    GanDiverged(const std::string& what, TrainingTrace t) : TrainingDiverged(what), trace(std::move(t)) {}
    TrainingTrace trace;
};

// Per-feature affine map used to standardize training data: z = (x - shift) / scale.
struct Normalization {
    std::vector<double> shift;
    std::vector<double> scale;

    static Normalization identity(std::size_t dims) {
        return {std::vector<double>(dims, 0.0), std::vector<double>(dims, 1.0)};
    }

    static Normalization fit(const Matrix& x) {
        const std::size_t n = x.rows(), d = x.cols();
        Normalization out{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r) s += x(r, j);
            out.shift[j] = s / static_cast<double>(n);
            double v = 0.0;
            for (std::size_t r = 0; r < n; ++r) v += (x(r, j) - out.shift[j]) * (x(r, j) - out.shift[j]);
            const double sd = std::sqrt(v / static_cast<double>(n));
            out.scale[j] = sd > 1e-12 ? sd : 1.0;
        }
        return out;
    }

    Matrix apply(const Matrix& x) const {
        Matrix out(x.rows(), x.cols());
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t j = 0; j < x.cols(); ++j) out(r, j) = (x(r, j) - shift[j]) / scale[j];
        return out;
    }

    Matrix invert(const Matrix& z) const {
        Matrix out(z.rows(), z.cols());
        for (std::size_t r = 0; r < z.rows(); ++r)
            for (std::size_t j = 0; j < z.cols(); ++j) out(r, j) = z(r, j) * scale[j] + shift[j];
        return out;
    }

    friend bool operator==(const Normalization&, const Normalization&) = default;
};

// Frozen generator weights at one checkpoint. class_label is empty for a
// conditional generator, which covers every class.
struct GeneratorSnapshot {
    GanVariant variant = GanVariant::vanilla;
    std::optional<std::size_t> class_label;
    std::size_t class_count = 0;
    std::size_t latent_dim = 0;
    MlpSpec gen_spec;
    MlpParams gen_params;
    Normalization normalization;
    std::size_t iteration = 0;
    std::uint64_t seed = 0;
    std::uint64_t spec_hash = 0;

    std::size_t dims() const { return gen_spec.output_size(); }

    friend bool operator==(const GeneratorSnapshot&, const GeneratorSnapshot&) = default;
};

struct GanTrainResult {
    std::vector<GeneratorSnapshot> snapshots;  // one per checkpoint, in order
    TrainingTrace trace;
    MlpParams discriminator;  // final weights, for diagnostics
    Normalization normalization;
};

namespace gan_detail {

struct Pass {
    double loss = 0.0;
    MlpParams grads;
};

inline Matrix disc_input(const GanSpec& spec, const Matrix& x, const Matrix& onehot) {
    return spec.conditional() ? hconcat(x, onehot) : x;
}

inline Matrix gen_input(const GanSpec& spec, const Matrix& z, const Matrix& onehot) {
    return spec.conditional() ? hconcat(z, onehot) : z;
}

// Logit of the single discriminator output, before its head activation.
inline Matrix logits(const ForwardResult& f) { return f.cache.preactivations.back(); }

}  // namespace gan_detail

// Discriminator loss and its gradient w.r.t. the discriminator parameters
// for standardized real rows, latent draws z, and (conditional only) the
// one-hot labels of the real rows and of the fake rows.
inline gan_detail::Pass disc_pass(const GanSpec& spec, const MlpParams& gen, const MlpParams& disc,
                                  const Matrix& real, const Matrix& z, const Matrix& real_onehot = {},
                                  const Matrix& fake_onehot = {}) {
    using namespace gan_detail;
    const Matrix fake = forward(spec.gen, gen, gen_input(spec, z, fake_onehot)).output;
    const auto fr = forward(spec.disc, disc, disc_input(spec, real, real_onehot));
    const auto ff = forward(spec.disc, disc, disc_input(spec, fake, fake_onehot));
    auto loss = d_loss(spec.variant, logits(fr), logits(ff));
    auto br = backward(spec.disc, disc, fr.cache, loss.real_grad, true);
    auto bf = backward(spec.disc, disc, ff.cache, loss.fake_grad, true);
    MlpParams g = std::move(br.grads);
    for (std::size_t l = 0; l < g.layers.size(); ++l) {
        auto& gw = g.layers[l].weight.data();
        const auto& fw = bf.grads.layers[l].weight.data();
        for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += fw[i];
        for (std::size_t i = 0; i < g.layers[l].bias.size(); ++i) g.layers[l].bias[i] += bf.grads.layers[l].bias[i];
    }
    return {loss.value, std::move(g)};
}

// Generator loss and its gradient w.r.t. the generator parameters, chained
// through the (fixed) discriminator. `real` is only read by the softmax
// variant, whose generator target spans the whole batch.
inline gan_detail::Pass gen_pass(const GanSpec& spec, const MlpParams& gen, const MlpParams& disc,
                                 const Matrix& z, const Matrix& real, const Matrix& fake_onehot = {},
                                 const Matrix& real_onehot = {}) {
    using namespace gan_detail;
    const auto fg = forward(spec.gen, gen, gen_input(spec, z, fake_onehot));
    const auto ff = forward(spec.disc, disc, disc_input(spec, fg.output, fake_onehot));
    Matrix real_logits;
    if (spec.variant == GanVariant::softmax)
        real_logits = logits(forward(spec.disc, disc, disc_input(spec, real, real_onehot)));
    auto loss = g_loss(spec.variant, logits(ff), real_logits);
    auto bd = backward(spec.disc, disc, ff.cache, loss.fake_grad, true);
    auto bg = backward(spec.gen, gen, fg.cache, left_cols(bd.input_grad, fg.output.cols()));
    return {loss.value, std::move(bg.grads)};
}

// Trains one GAN. Non-conditional variants expect a single-class dataset (the
// per-class protocol); the conditional variant trains on every class at once.
// Real batches are drawn with replacement from the standardized data; each
// iteration runs d_steps discriminator updates then g_steps generator
// updates. Losses of the last update are logged every log_every iterations
// and at every checkpoint.
inline GanTrainResult train_gan(const GanSpec& spec, const Dataset& real, Rng& rng) {
    real.validate(true);
    if (real.size() < 2) throw InvalidInput("train_gan: need at least 2 real samples");
    const auto counts = real.class_counts();
    std::size_t present = 0, only = 0;
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] > 0) ++present, only = c;
    if (!spec.conditional() && present != 1)
        throw InvalidInput("train_gan: " + std::string(to_string(spec.variant)) +
                           " trains on one class at a time, got " + std::to_string(present));
    const std::size_t C = real.class_count;
    spec.validate(real.dims(), C);

    const Normalization norm = Normalization::fit(real.features);
    const Matrix x = norm.apply(real.features);
    MlpParams gen = init_params(spec.gen, rng);
    MlpParams disc = init_params(spec.disc, rng);
    OptimizerState gen_opt(spec.gen_opt, gen);
    OptimizerState disc_opt(spec.disc_opt, disc);

    GanTrainResult out;
    const std::size_t B = spec.batch_size;
    std::vector<std::size_t> idx(B), fake_labels(B);
    auto draw_real = [&](Matrix& batch, Matrix& onehot) {
        for (auto& i : idx) i = rng.uniform_int(real.size());
        batch = x.select_rows(idx);
        if (spec.conditional()) {
            std::vector<std::size_t> lab(B);
            for (std::size_t i = 0; i < B; ++i) lab[i] = real.labels[idx[i]];
            onehot = one_hot(lab, C);
        }
    };
    // Fake labels follow the empirical class distribution.
    auto draw_fake_labels = [&]() {
        if (!spec.conditional()) return Matrix();
        for (auto& l : fake_labels) l = real.labels[rng.uniform_int(real.size())];
        return one_hot(fake_labels, C);
    };
    auto fail = [&](std::size_t it, const std::string& why) {
        throw GanDiverged("train_gan: " + why + " at iteration " + std::to_string(it), out.trace);
    };

    std::size_t next_ckpt = 0;
    Matrix real_batch, real_onehot;
    for (std::size_t it = 1; it <= spec.iterations; ++it) {
        double dl = 0.0, gl = 0.0;
        try {
            for (std::size_t s = 0; s < spec.d_steps; ++s) {
                draw_real(real_batch, real_onehot);
                const Matrix fake_onehot = draw_fake_labels();
                const Matrix z = standard_normal(B, spec.latent_dim, rng);
                auto pass = disc_pass(spec, gen, disc, real_batch, z, real_onehot, fake_onehot);
                dl = pass.loss;
                if (!std::isfinite(dl)) fail(it, "non-finite discriminator loss");
                disc_opt.step(disc, pass.grads);
            }
            for (std::size_t s = 0; s < spec.g_steps; ++s) {
                if (spec.variant == GanVariant::softmax) draw_real(real_batch, real_onehot);
                const Matrix fake_onehot = draw_fake_labels();
                const Matrix z = standard_normal(B, spec.latent_dim, rng);
                auto pass = gen_pass(spec, gen, disc, z, real_batch, fake_onehot, real_onehot);
                gl = pass.loss;
                if (!std::isfinite(gl)) fail(it, "non-finite generator loss");
                gen_opt.step(gen, pass.grads);
            }
        } catch (const GanDiverged&) {
            throw;
        } catch (const TrainingDiverged& e) {
            fail(it, e.what());
        }

        const bool ckpt = next_ckpt < spec.checkpoint_iterations.size() &&
                          spec.checkpoint_iterations[next_ckpt] == it;
        if (ckpt || (spec.log_every > 0 && it % spec.log_every == 0))
            out.trace.entries.push_back({it, dl, gl});
        if (ckpt) {
            GeneratorSnapshot snap;
            snap.variant = spec.variant;
            if (!spec.conditional()) snap.class_label = only;
            snap.class_count = C;
            snap.latent_dim = spec.latent_dim;
            snap.gen_spec = spec.gen;
            snap.gen_params = gen;
            snap.normalization = norm;
            snap.iteration = it;
            snap.seed = rng.seed();
            snap.spec_hash = spec.hash();
            out.snapshots.push_back(std::move(snap));
            ++next_ckpt;
        }
    }
    out.discriminator = std::move(disc);
    out.normalization = norm;
    return out;
}

inline GanTrainResult train_gan(const GanSpec& spec, const Dataset& real) {
    Rng rng(spec.seed);
    return train_gan(spec, real, rng);
}

// Draws n standard-normal latent vectors, runs the generator and undoes the
// training normalization. A conditional snapshot needs `label`; a per-class
// snapshot accepts only its own class (or none).
inline Dataset generate(const GeneratorSnapshot& snap, std::size_t n, Rng& rng,
                        std::optional<std::size_t> label = std::nullopt) {
    if (n == 0) throw InvalidInput("generate: n must be >= 1");
    std::size_t cls = 0;
    if (snap.variant == GanVariant::conditional) {
        if (!label) throw InvalidInput("generate: conditional snapshot requires a label");
        if (*label >= snap.class_count)
            throw InvalidInput("generate: label " + std::to_string(*label) + " outside 0.." +
                               std::to_string(snap.class_count - 1));
        cls = *label;
    } else {
        if (!snap.class_label) throw InvalidInput("generate: snapshot has no class label");
        if (label && *label != *snap.class_label)
            throw InvalidInput("generate: snapshot was trained on class " +
                               std::to_string(*snap.class_label) + ", not " + std::to_string(*label));
        cls = *snap.class_label;
    }
    Matrix z = standard_normal(n, snap.latent_dim, rng);
    if (snap.variant == GanVariant::conditional)
        z = hconcat(z, one_hot(std::vector<std::size_t>(n, cls), snap.class_count));
    Dataset out;
    out.features = snap.normalization.invert(forward(snap.gen_spec, snap.gen_params, z).output);
    out.labels.assign(n, cls);
    out.class_count = snap.class_count;
    return out;
}

}  // namespace augbias
