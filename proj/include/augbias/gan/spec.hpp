#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/hash.hpp"
#include "augbias/core/mlp.hpp"
#include "augbias/core/optimizer.hpp"

namespace augbias {

enum class GanVariant { vanilla, softmax, conditional, boundary_seeking };

inline const char* to_string(GanVariant v) {
    switch (v) {
        case GanVariant::vanilla: return "vanilla";
        case GanVariant::softmax: return "softmax";
        case GanVariant::conditional: return "conditional";
        case GanVariant::boundary_seeking: return "boundary_seeking";
    }
    return "?";
}

inline GanVariant parse_variant(const std::string& text) {
    if (text == "vanilla") return GanVariant::vanilla;
    if (text == "softmax") return GanVariant::softmax;
    if (text == "conditional") return GanVariant::conditional;
    if (text == "boundary_seeking" || text == "bgan") return GanVariant::boundary_seeking;
    throw ParseError("unknown GAN variant '" + text + "'");
}

inline const std::vector<GanVariant>& all_variants() {
    static const std::vector<GanVariant> v = {GanVariant::vanilla, GanVariant::softmax,
                                              GanVariant::conditional,
                                              GanVariant::boundary_seeking};
    return v;
}

struct GanSpec {
    GanVariant variant = GanVariant::vanilla;
    std::size_t latent_dim = 16;
    MlpSpec gen;
    MlpSpec disc;
    OptimizerConfig gen_opt = OptimizerConfig::adam();
    OptimizerConfig disc_opt = OptimizerConfig::adam();
    std::size_t batch_size = 32;
    std::size_t iterations = 10000;
    std::vector<std::size_t> checkpoint_iterations = {10000};
    std::uint64_t seed = 0;
    std::size_t d_steps = 1;  // discriminator updates per iteration
    std::size_t g_steps = 1;  // generator updates per iteration
    std::size_t log_every = 100;

    bool conditional() const noexcept { return variant == GanVariant::conditional; }

    // Checks the spec against data with `dims` features and `classes` ids.
    void validate(std::size_t dims, std::size_t classes) const {
        gen.validate();
        disc.validate();
        const std::size_t extra = conditional() ? classes : 0;
        if (latent_dim == 0) throw InvalidSpec("GanSpec: latent_dim must be >= 1");
        if (gen.input_size() != latent_dim + extra)
            throw InvalidSpec("GanSpec: generator input must be " + std::to_string(latent_dim + extra));
        if (gen.output_size() != dims)
            throw InvalidSpec("GanSpec: generator output must equal feature count " + std::to_string(dims));
        if (disc.input_size() != dims + extra)
            throw InvalidSpec("GanSpec: discriminator input must be " + std::to_string(dims + extra));
        if (disc.output_size() != 1) throw InvalidSpec("GanSpec: discriminator must have one output");
        if (disc.activations.back().kind == ActivationKind::softmax)
            throw InvalidSpec("GanSpec: discriminator head cannot be softmax");
        if (batch_size == 0) throw InvalidSpec("GanSpec: batch_size must be >= 1");
        if (d_steps == 0 || g_steps == 0) throw InvalidSpec("GanSpec: d_steps and g_steps must be >= 1");
        if (checkpoint_iterations.empty()) throw InvalidSpec("GanSpec: no checkpoint iterations");
        for (std::size_t i = 0; i < checkpoint_iterations.size(); ++i) {
            const auto it = checkpoint_iterations[i];
            if (it < 1 || it > iterations)
                throw InvalidSpec("GanSpec: checkpoint " + std::to_string(it) + " outside [1, " +
                                  std::to_string(iterations) + "]");
            if (i > 0 && it <= checkpoint_iterations[i - 1])
                throw InvalidSpec("GanSpec: checkpoint iterations must be strictly increasing");
        }
    }

    std::string describe() const {
        auto mlp = [](const MlpSpec& m) {
            std::string s;
            for (std::size_t i = 0; i < m.layer_sizes.size(); ++i)
                s += (i ? "-" : "") + std::to_string(m.layer_sizes[i]);
            for (const auto& a : m.activations) s += "/" + to_string(a);
            return s;
        };
        auto opt = [](const OptimizerConfig& o) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "%s(%.17g,%.17g,%.17g,%.17g)",
                          o.kind == OptimizerKind::adam ? "adam" : "sgd", o.lr, o.beta1, o.beta2,
                          o.epsilon);
            return std::string(buf);
        };
        std::string s = std::string(to_string(variant)) + ";z=" + std::to_string(latent_dim) +
                        ";G=" + mlp(gen) + ";D=" + mlp(disc) + ";gopt=" + opt(gen_opt) +
                        ";dopt=" + opt(disc_opt) + ";batch=" + std::to_string(batch_size) +
                        ";iters=" + std::to_string(iterations) + ";steps=" + std::to_string(d_steps) +
                        ":" + std::to_string(g_steps);
        return s;
    }

    std::uint64_t hash() const { return fnv1a(describe()); }
};

// Default tabular architectures: generator latent -> 64 -> 64 -> d (linear),
// discriminator d -> 64 -> 32 -> 1 (sigmoid), leaky_relu(0.2) hidden units,
// Adam(2e-4, 0.5, 0.999) for both nets. Conditional variants widen both
// inputs by the one-hot label.
inline GanSpec default_gan_spec(GanVariant variant, std::size_t dims, std::size_t classes,
                                std::size_t iterations = 10000) {
    GanSpec spec;
    spec.variant = variant;
    const std::size_t extra = variant == GanVariant::conditional ? classes : 0;
    const auto lrelu = Activation::leaky_relu(0.2);
    spec.gen = {{spec.latent_dim + extra, 64, 64, dims}, {lrelu, lrelu, Activation::linear()}};
    spec.disc = {{dims + extra, 64, 32, 1}, {lrelu, lrelu, Activation::sigmoid()}};
    spec.iterations = iterations;
    spec.checkpoint_iterations = {iterations};
    return spec;
}

}  // namespace augbias
