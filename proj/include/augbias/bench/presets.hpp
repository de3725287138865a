#pragma once

#include <string>
#include <vector>

#include "augbias/bench/config.hpp"

namespace augbias::bench {

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12"};
    return names;
}

// Built-in experiment protocols on synthetic stand-in datasets. Desk
// budgets cap iteration sweeps at 20,000 and use fewer variants and seeds;
// `full` restores the complete sweeps.
inline ExperimentConfig preset(const std::string& name, bool full = false) {
    using V = GanVariant;
    ExperimentConfig c;
    c.id = name;
    c.output = "results/" + name;
    // Ten-class, twenty-feature stand-in used by the per-class protocols.
    c.dataset.n_samples = 2000;
    c.dataset.clusters_per_class = 2;
    c.dataset.class_sep = 1.5;
    c.sweep.features = {20};
    c.sweep.classes = {10};
    c.sweep.informative = {8};
    const std::vector<V> desk_variants = {V::softmax, V::conditional};
    const std::vector<V> all = {V::vanilla, V::softmax, V::conditional, V::boundary_seeking};
    c.variants = full ? all : desk_variants;
    c.seeds = full ? std::vector<std::uint64_t>{0, 1, 2} : std::vector<std::uint64_t>{0};

    if (name == "fig5") {
        // Class coverage of a 160-sample probe after training.
        c.variants = full ? all : std::vector<V>{V::softmax, V::conditional, V::boundary_seeking};
        c.sweep.iterations = full ? std::vector<std::size_t>{10000, 20000, 50000} : std::vector<std::size_t>{2000, 5000};
        c.sweep.per_class = {16};
        c.coverage = true;
    } else if (name == "fig6") {
        // Training-set size per class against iterations, with a diversity probe.
        c.variants = full ? all : std::vector<V>{V::softmax, V::boundary_seeking};
        c.dataset.n_samples = 400;
        c.sweep.classes = {2};
        c.sweep.features = {10};
        c.sweep.informative = {4};
        c.sweep.size_axis = SizeAxis::training;
        c.sweep.per_class = {5, 10, 30, 50};
        c.sweep.iterations = full ? std::vector<std::size_t>{2000, 5000, 10000, 20000}
                                  : std::vector<std::size_t>{2000, 5000};
        c.diversity = true;
    } else if (name == "fig7") {
        c.sweep.iterations = full ? std::vector<std::size_t>{5000, 10000, 20000, 50000, 100000, 200000}
                                  : std::vector<std::size_t>{5000, 10000, 20000};
        c.sweep.per_class = {50};
    } else if (name == "fig8") {
        c.sweep.mode = SamplingMode::mixed;
        c.sweep.iterations = {10000};
        c.sweep.mixed_start = 5000;
        c.sweep.steps = {200, 500, 1000, 2000};
        c.sweep.per_class = {50};
    } else if (name == "fig9") {
        c.sweep.iterations = {10000};
        c.sweep.per_class = {50, 100, 200, 500};
    } else if (name == "fig10" || name == "fig11") {
        // Setting F: a constant 500 samples. Setting V: features * 500/784.
        c.variants = {V::softmax};
        c.dataset.clusters_per_class = 1;
        c.dataset.class_sep = 1.0;
        if (name == "fig10") {
            c.dataset.n_samples = 500;
            c.sweep.features = full ? std::vector<std::size_t>{50, 100, 200, 400, 784}
                                    : std::vector<std::size_t>{20, 50, 100};
        } else {
            c.dataset.samples_per_feature = 500.0 / 784.0;
            c.sweep.features = full ? std::vector<std::size_t>{400, 784, 1568, 3136}
                                    : std::vector<std::size_t>{200, 400, 784};
        }
        c.sweep.classes = full ? std::vector<std::size_t>{2, 5, 10, 20, 50} : std::vector<std::size_t>{2, 5, 10};
        c.sweep.informative = {6};
        c.sweep.iterations = {full ? 10000u : 2000u};
        c.sweep.per_class = {50};
    } else if (name == "fig12") {
        // Variant screen on a small, wide dataset.
        c.variants = all;
        c.dataset.n_samples = 140;
        c.dataset.clusters_per_class = 1;
        c.sweep.classes = {7};
        c.sweep.features = {60};
        c.sweep.informative = {6};
        c.sweep.iterations = {full ? 20000u : 5000u};
        c.sweep.per_class = {50};
        c.seeds = {0, 1, 2};
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected fig5..fig12)");
    }
    c.validate();
    return c;
}

}  // namespace augbias::bench
