#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "augbias/bias/measure.hpp"
#include "augbias/core/error.hpp"
#include "augbias/datagen/informative.hpp"
#include "augbias/datagen/split.hpp"
#include "augbias/pipeline/train_bank.hpp"
#include "augbias/sampling/sampler.hpp"

namespace augbias {

enum class Decision { augmentable, risky, not_recommended };

inline const char* to_string(Decision d) {
    switch (d) {
        case Decision::augmentable: return "augmentable";
        case Decision::risky: return "risky";
        case Decision::not_recommended: return "not_recommended";
    }
    return "?";
}

// Settings of the optional empirical probe: a softmax GAN per class on half
// of the data, one-shot sampled at the final iteration, bias measured on the
// other half.
struct ProbeBudget {
    std::size_t iterations = 2000;
    std::size_t per_class = 50;
    double train_ratio = 0.5;
    GanVariant variant = GanVariant::softmax;
    GanOverrides overrides;
    ClassifierSpec classifier;
};

struct PipelineThresholds {
    std::size_t min_per_class = 50;
    double rif_min = 0.5;
    double rsf_low = 0.05;
    double rsf_high = 10.0;
    double alpha = 0.01;  // informative-feature test level
    bool empirical_probe = false;
    double probe_bias_max = 0.1;
    ProbeBudget probe;

    void validate() const {
        if (!(rsf_low < rsf_high)) throw InvalidInput("PipelineThresholds: rsf bounds need low < high");
        if (rif_min < 0.0 || rif_min > 1.0) throw InvalidInput("PipelineThresholds: rif_min must be in [0, 1]");
        if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("PipelineThresholds: alpha must be in (0, 1)");
    }
};

struct RuleFiring {
    std::string id;  // R1, R2, R3, R4, R4+
    std::string explanation;
};

inline constexpr const char* kRuleOrderNote =
    "rule order R1 (class size) -> R2 (RIF) -> R3 (RSF) -> R4 (empirical probe) is fixed; "
    "R1 skips the probe, R2 and R3 do not; thresholds are configurable defaults";

struct AugmentabilityReport {
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    double rsf = 0.0;
    std::size_t informative_count = 0;
    double rif = 0.0;
    std::vector<std::size_t> per_class_counts;
    std::vector<RuleFiring> fired_rules;
    Decision decision = Decision::augmentable;
    std::optional<BiasReport> probe_bias;
    std::string note = kRuleOrderNote;
};

// R1 dominates; an R4+ (probe bias <= 0) overrides the risk rules; any other
// firing means risky; nothing fired means augmentable.
inline Decision decide(const std::vector<RuleFiring>& fired) {
    auto has = [&](const char* id) {
        return std::any_of(fired.begin(), fired.end(), [&](const RuleFiring& r) { return r.id == id; });
    };
    if (has("R1")) return Decision::not_recommended;
    if (has("R4+")) return Decision::augmentable;
    if (fired.empty()) return Decision::augmentable;
    return Decision::risky;
}

inline BiasReport run_probe(const Dataset& data, const ProbeBudget& budget, Rng& rng) {
    auto halves = split(data, budget.train_ratio, true, rng);
    auto trained = train_generators(halves.train, budget.variant, budget.iterations, rng, budget.overrides);
    const auto targets = SamplingPlan::uniform_targets(data.class_count, budget.per_class);
    auto aug = one_shot_sample(trained.bank, SamplingPlan::one_shot(budget.iterations, targets), rng);
    return measure_bias(aug, halves.test, budget.classifier, rng);
}

inline AugmentabilityReport check_augmentable(const Dataset& data, const PipelineThresholds& t, Rng& rng) {
    t.validate();
    data.validate(false);
    AugmentabilityReport r;
    r.n_samples = data.size();
    r.n_features = data.dims();
    r.per_class_counts = data.class_counts();
    r.rsf = double(r.n_samples) / double(r.n_features);
    const auto est = estimate_informative(data, t.alpha);
    r.informative_count = est.count;
    r.rif = double(est.count) / double(r.n_features);

    auto fmt = [](double v) {
        std::ostringstream ss;
        ss << v;
        return ss.str();
    };
    std::string small;
    for (std::size_t c = 0; c < r.per_class_counts.size(); ++c)
        if (r.per_class_counts[c] < t.min_per_class)
            small += (small.empty() ? "" : ", ") + std::to_string(c) + " (" + std::to_string(r.per_class_counts[c]) + ")";
    if (!small.empty())
        r.fired_rules.push_back({"R1", "classes below the least input size of " + std::to_string(t.min_per_class) +
                                           " per class: " + small});
    if (r.rif < t.rif_min)
        r.fired_rules.push_back({"R2", "RIF " + fmt(r.rif) + " (" + std::to_string(est.count) + "/" +
                                           std::to_string(r.n_features) + " informative) below " + fmt(t.rif_min)});
    if (r.rsf < t.rsf_low || r.rsf > t.rsf_high)
        r.fired_rules.push_back({"R3", "RSF " + fmt(r.rsf) + " outside [" + fmt(t.rsf_low) + ", " + fmt(t.rsf_high) + "]"});
    if (t.empirical_probe && small.empty()) {
        r.probe_bias = run_probe(data, t.probe, rng);
        const double b = r.probe_bias->bias;
        if (b > t.probe_bias_max)
            r.fired_rules.push_back({"R4", "probe bias " + fmt(b) + " above " + fmt(t.probe_bias_max)});
        else if (b <= 0.0)
            r.fired_rules.push_back({"R4+", "probe bias " + fmt(b) + " <= 0: generated data shows no positive bias"});
    }
    r.decision = decide(r.fired_rules);
    return r;
}

inline void write_text(const AugmentabilityReport& r, std::ostream& out) {
    out << "decision: " << to_string(r.decision) << '\n';
    out << "samples: " << r.n_samples << "\nfeatures: " << r.n_features << '\n';
    out << "rsf: " << r.rsf << '\n';
    out << "informative: " << r.informative_count << "\nrif: " << r.rif << '\n';
    out << "per_class_counts:";
    for (auto c : r.per_class_counts) out << ' ' << c;
    out << '\n';
    if (r.fired_rules.empty()) out << "fired rules: none\n";
    for (const auto& f : r.fired_rules) out << "fired " << f.id << ": " << f.explanation << '\n';
    if (r.probe_bias)
        out << "probe: acc_train " << r.probe_bias->acc_train << ", acc_test " << r.probe_bias->acc_test << ", bias "
            << r.probe_bias->bias << '\n';
    out << "note: " << r.note << '\n';
}

inline nlohmann::json to_json(const BiasReport& b) {
    nlohmann::json per_class = nlohmann::json::object();
    for (const auto& [c, a] : b.per_class_test_accuracy) per_class[std::to_string(c)] = a;
    return {{"acc_train", b.acc_train},       {"acc_test", b.acc_test},   {"bias", b.bias},
            {"per_class_test_accuracy", per_class}, {"train_size", b.train_size}, {"test_size", b.test_size},
            {"classifier_hash", b.classifier_hash}, {"seed", b.seed},      {"protocol", b.protocol}};
}

inline nlohmann::json to_json(const AugmentabilityReport& r) {
    nlohmann::json rules = nlohmann::json::array();
    for (const auto& f : r.fired_rules) rules.push_back({{"id", f.id}, {"explanation", f.explanation}});
    nlohmann::json j = {{"decision", to_string(r.decision)},
                        {"n_samples", r.n_samples},
                        {"n_features", r.n_features},
                        {"rsf", r.rsf},
                        {"informative_count", r.informative_count},
                        {"rif", r.rif},
                        {"per_class_counts", r.per_class_counts},
                        {"fired_rules", rules},
                        {"probe_bias", nullptr},
                        {"note", r.note}};
    if (r.probe_bias) j["probe_bias"] = to_json(*r.probe_bias);
    return j;
}

}  // namespace augbias
