#pragma once

#include <cctype>
#include <cmath>
#include <fstream>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "augbias/bias/classifier.hpp"
#include "augbias/core/error.hpp"
#include "augbias/gan/spec.hpp"
#include "augbias/pipeline/train_bank.hpp"
#include "augbias/sampling/plan.hpp"

namespace augbias::bench {

// What the per_class_size axis controls: the augmentation set per class, or
// the real training rows per class fed to the GANs.
enum class SizeAxis { augmentation, training };

struct DatasetConfig {
    std::string source = "synthetic";  // synthetic | csv
    std::filesystem::path path;
    std::string label_column = "label";
    std::size_t n_samples = 1000;       // fixed size
    double samples_per_feature = 0.0;   // > 0: n = round(features * ratio)
    std::size_t clusters_per_class = 1;
    double class_sep = 1.0;
    double flip_y = 0.0;
    std::uint64_t seed = 0;
    double train_ratio = 0.5;

    bool synthetic() const { return source == "synthetic"; }
    std::size_t samples_for(std::size_t features) const {
        if (samples_per_feature > 0.0)
            return static_cast<std::size_t>(std::llround(double(features) * samples_per_feature));
        return n_samples;
    }
};

struct SweepConfig {
    SamplingMode mode = SamplingMode::one_shot;
    std::vector<std::size_t> iterations = {10000};  // one-shot ends; the single end for mixed
    std::vector<std::size_t> steps;                 // mixed only
    std::size_t mixed_start = 5000;
    std::vector<std::size_t> per_class = {50};
    std::vector<std::size_t> features = {20};
    std::vector<std::size_t> classes = {10};
    std::vector<std::size_t> informative = {5};
    SizeAxis size_axis = SizeAxis::augmentation;
    std::size_t sample_per_class = 50;  // augmentation size when size_axis = training
};

struct ExperimentConfig {
    std::string id;
    DatasetConfig dataset;
    std::vector<GanVariant> variants = {GanVariant::softmax};
    GanOverrides gan;
    SweepConfig sweep;
    std::vector<std::uint64_t> seeds = {0};
    ClassifierSpec classifier;
    std::filesystem::path output = "results";
    std::size_t workers = 1;
    bool coverage = false;
    bool diversity = false;
    std::size_t diversity_probe = 16;
    bool record_wall_time = false;

    void validate() const;
    std::string describe() const;
};

namespace detail {

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    T v{};
    in >> v;
    if (in.fail() || !in.eof()) throw ConfigError("config: " + key + ": cannot parse '" + text + "'");
    if constexpr (std::is_unsigned_v<T>)
        if (text.find('-') != std::string::npos) throw ConfigError("config: " + key + ": must be non-negative");
    return v;
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    for (const auto& s : split_list(text)) out.push_back(parse_number<T>(key, s));
    return out;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    const auto t = lower(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("config: " + key + ": expected a boolean, got '" + text + "'");
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
    return out.str();
}

}  // namespace detail

inline void ExperimentConfig::validate() const {
    if (id.empty()) throw ConfigError("config: experiment.id is required");
    if (id.find_first_of(",\"\n") != std::string::npos)
        throw ConfigError("config: experiment.id must not contain commas, quotes or newlines");
    if (variants.empty()) throw ConfigError("config: gan.variants is empty");
    if (seeds.empty()) throw ConfigError("config: seeds.list is empty");
    if (workers == 0) throw ConfigError("config: run.workers must be >= 1");
    auto axis = [](const char* name, const auto& v) {
        if (v.empty()) throw ConfigError(std::string("config: sweep axis '") + name + "' is empty");
        for (auto x : v)
            if (x == 0) throw ConfigError(std::string("config: sweep axis '") + name + "' contains 0");
    };
    axis("iterations", sweep.iterations);
    axis("per_class", sweep.per_class);
    if (dataset.synthetic()) {
        axis("features", sweep.features);
        axis("classes", sweep.classes);
        axis("informative", sweep.informative);
    } else if (dataset.path.empty()) {
        throw ConfigError("config: dataset.path is required for csv datasets");
    }
    if (dataset.source != "synthetic" && dataset.source != "csv")
        throw ConfigError("config: dataset.source must be synthetic or csv");
    if (!(dataset.train_ratio > 0.0 && dataset.train_ratio < 1.0))
        throw ConfigError("config: dataset.train_ratio must be in (0, 1)");
    if (sweep.mode == SamplingMode::mixed) {
        axis("steps", sweep.steps);
        if (sweep.iterations.size() != 1)
            throw ConfigError("config: mixed sweeps take exactly one iteration end");
        if (sweep.mixed_start > sweep.iterations.front())
            throw ConfigError("config: sweep.mixed_start exceeds the iteration end");
    }
    if (sweep.size_axis == SizeAxis::training && sweep.sample_per_class == 0)
        throw ConfigError("config: sweep.sample_per_class must be >= 1");
}

inline std::string ExperimentConfig::describe() const {
    std::ostringstream out;
    out << "experiment " << id << '\n';
    out << "dataset " << dataset.source;
    if (dataset.synthetic()) {
        out << " n=";
        if (dataset.samples_per_feature > 0.0)
            out << "features*" << dataset.samples_per_feature;
        else
            out << dataset.n_samples;
        out << " clusters=" << dataset.clusters_per_class << " sep=" << dataset.class_sep << " seed=" << dataset.seed;
    } else {
        out << ' ' << dataset.path.string();
    }
    out << " train_ratio=" << dataset.train_ratio << '\n';
    std::vector<std::string> names;
    for (auto v : variants) names.push_back(to_string(v));
    out << "variants " << detail::join(names) << '\n';
    out << "mode " << to_string(sweep.mode) << " iterations " << detail::join(sweep.iterations);
    if (sweep.mode == SamplingMode::mixed)
        out << " start " << sweep.mixed_start << " steps " << detail::join(sweep.steps);
    out << '\n';
    out << "per_class " << detail::join(sweep.per_class)
        << (sweep.size_axis == SizeAxis::training ? " (training rows)" : " (augmentation)") << '\n';
    if (dataset.synthetic())
        out << "features " << detail::join(sweep.features) << " classes " << detail::join(sweep.classes)
            << " informative " << detail::join(sweep.informative) << '\n';
    out << "seeds " << detail::join(seeds) << '\n';
    out << "classifier " << classifier.describe() << '\n';
    return out.str();
}

// Parses the sectioned key-value format documented in the README. Unknown
// sections or keys are errors so typos cannot silently change a run.
inline ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>") {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    ExperimentConfig c;
    for (const auto& [section, body] : tree) {
        for (const auto& [key, node] : body) {
            const std::string k = section + "." + key;
            const std::string v = node.get_value<std::string>();
            using detail::parse_bool, detail::parse_list, detail::parse_number;
            if (k == "experiment.id") c.id = v;
            else if (k == "experiment.output") c.output = v;
            else if (k == "dataset.source") c.dataset.source = detail::lower(v);
            else if (k == "dataset.path") c.dataset.path = v;
            else if (k == "dataset.label_column") c.dataset.label_column = v;
            else if (k == "dataset.n_samples") c.dataset.n_samples = parse_number<std::size_t>(k, v);
            else if (k == "dataset.samples_per_feature") c.dataset.samples_per_feature = parse_number<double>(k, v);
            else if (k == "dataset.clusters_per_class") c.dataset.clusters_per_class = parse_number<std::size_t>(k, v);
            else if (k == "dataset.class_sep") c.dataset.class_sep = parse_number<double>(k, v);
            else if (k == "dataset.flip_y") c.dataset.flip_y = parse_number<double>(k, v);
            else if (k == "dataset.seed") c.dataset.seed = parse_number<std::uint64_t>(k, v);
            else if (k == "dataset.train_ratio") c.dataset.train_ratio = parse_number<double>(k, v);
            else if (k == "gan.variants") {
                c.variants.clear();
                for (const auto& s : detail::split_list(v)) {
                    try {
                        c.variants.push_back(parse_variant(detail::lower(s)));
                    } catch (const ParseError& e) {
                        throw ConfigError("config: gan.variants: " + std::string(e.what()));
                    }
                }
            }
            else if (k == "gan.latent_dim") c.gan.latent_dim = parse_number<std::size_t>(k, v);
            else if (k == "gan.batch_size") c.gan.batch_size = parse_number<std::size_t>(k, v);
            else if (k == "gan.gen_lr") c.gan.gen_lr = parse_number<double>(k, v);
            else if (k == "gan.disc_lr") c.gan.disc_lr = parse_number<double>(k, v);
            else if (k == "gan.d_steps") c.gan.d_steps = parse_number<std::size_t>(k, v);
            else if (k == "gan.g_steps") c.gan.g_steps = parse_number<std::size_t>(k, v);
            else if (k == "sweep.mode") {
                const auto m = detail::lower(v);
                if (m == "one_shot") c.sweep.mode = SamplingMode::one_shot;
                else if (m == "mixed") c.sweep.mode = SamplingMode::mixed;
                else throw ConfigError("config: sweep.mode must be one_shot or mixed");
            }
            else if (k == "sweep.iterations") c.sweep.iterations = parse_list<std::size_t>(k, v);
            else if (k == "sweep.steps") c.sweep.steps = parse_list<std::size_t>(k, v);
            else if (k == "sweep.mixed_start") c.sweep.mixed_start = parse_number<std::size_t>(k, v);
            else if (k == "sweep.per_class") c.sweep.per_class = parse_list<std::size_t>(k, v);
            else if (k == "sweep.features") c.sweep.features = parse_list<std::size_t>(k, v);
            else if (k == "sweep.classes") c.sweep.classes = parse_list<std::size_t>(k, v);
            else if (k == "sweep.informative") c.sweep.informative = parse_list<std::size_t>(k, v);
            else if (k == "sweep.size_axis") {
                const auto m = detail::lower(v);
                if (m == "augmentation") c.sweep.size_axis = SizeAxis::augmentation;
                else if (m == "training") c.sweep.size_axis = SizeAxis::training;
                else throw ConfigError("config: sweep.size_axis must be augmentation or training");
            }
            else if (k == "sweep.sample_per_class") c.sweep.sample_per_class = parse_number<std::size_t>(k, v);
            else if (k == "seeds.list") c.seeds = parse_list<std::uint64_t>(k, v);
            else if (k == "classifier.model") {
                const auto m = detail::lower(v);
                if (m == "logistic") c.classifier.model = ClassifierModel::logistic;
                else if (m == "mlp") c.classifier.model = ClassifierModel::mlp;
                else throw ConfigError("config: classifier.model must be logistic or mlp");
            }
            else if (k == "classifier.hidden") c.classifier.hidden_sizes = parse_list<std::size_t>(k, v);
            else if (k == "classifier.epochs") c.classifier.epochs = parse_number<std::size_t>(k, v);
            else if (k == "classifier.batch_size") c.classifier.batch_size = parse_number<std::size_t>(k, v);
            else if (k == "classifier.lr") c.classifier.optimizer.lr = parse_number<double>(k, v);
            else if (k == "run.workers") c.workers = parse_number<std::size_t>(k, v);
            else if (k == "run.coverage") c.coverage = parse_bool(k, v);
            else if (k == "run.diversity") c.diversity = parse_bool(k, v);
            else if (k == "run.diversity_probe") c.diversity_probe = parse_number<std::size_t>(k, v);
            else if (k == "run.record_wall_time") c.record_wall_time = parse_bool(k, v);
            else throw ConfigError(source + ": unknown key '" + k + "'");
        }
    }
    if (!tree.get_child_optional("experiment.output")) c.output = std::filesystem::path("results") / c.id;
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    return parse_config(in, path.string());
}

}  // namespace augbias::bench
