#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/hash.hpp"
#include "augbias/core/loss.hpp"
#include "augbias/core/mlp.hpp"
#include "augbias/core/optimizer.hpp"
#include "augbias/core/rng.hpp"
#include "augbias/datagen/dataset.hpp"

namespace augbias {

enum class ClassifierModel { logistic, mlp };

// The measuring instrument for augmentation bias. Default: multinomial
// logistic regression, 200 epochs, Adam(1e-2).
struct ClassifierSpec {
    ClassifierModel model = ClassifierModel::logistic;
    std::vector<std::size_t> hidden_sizes = {32};  // mlp only
    Activation hidden_activation = Activation::relu();
    OptimizerConfig optimizer = OptimizerConfig::adam(1e-2, 0.9, 0.999, 1e-8);
    std::size_t epochs = 200;
    std::size_t batch_size = 32;

    std::string describe() const {
        std::string s = model == ClassifierModel::logistic ? "logistic" : "mlp";
        if (model == ClassifierModel::mlp) {
            s += "[";
            for (std::size_t i = 0; i < hidden_sizes.size(); ++i)
                s += (i ? "," : "") + std::to_string(hidden_sizes[i]);
            s += "]/" + to_string(hidden_activation);
        }
        char buf[160];
        std::snprintf(buf, sizeof buf, ";opt=%s,lr=%.17g,b1=%.17g,b2=%.17g,eps=%.17g;epochs=%zu;batch=%zu",
                      optimizer.kind == OptimizerKind::adam ? "adam" : "sgd", optimizer.lr,
                      optimizer.beta1, optimizer.beta2, optimizer.epsilon, epochs, batch_size);
        return s + buf;
    }

    std::uint64_t hash() const { return fnv1a(describe()); }
};

class Classifier {
public:
    Classifier() = default;
    Classifier(std::vector<double> shift, std::vector<double> scale, std::vector<DenseLayer> layers,
               std::vector<Activation> acts, std::size_t classes)
        : shift_(std::move(shift)), scale_(std::move(scale)), layers_(std::move(layers)),
          acts_(std::move(acts)), classes_(classes) {}

    std::size_t class_count() const noexcept { return classes_; }
    std::size_t dims() const noexcept { return shift_.size(); }

    Matrix standardize(const Matrix& x) const {
        if (x.cols() != dims())
            throw InvalidInput("classifier: expected " + std::to_string(dims()) + " features, got " +
                               std::to_string(x.cols()));
        Matrix out(x.rows(), x.cols());
        for (std::size_t r = 0; r < x.rows(); ++r)
            for (std::size_t j = 0; j < x.cols(); ++j) out(r, j) = (x(r, j) - shift_[j]) / scale_[j];
        return out;
    }

    // Class logits for raw (unstandardized) features.
    Matrix scores(const Matrix& x) const {
        return detail::forward_layers(layers_, acts_, standardize(x)).output;
    }

    // Argmax of the logits; ties go to the lowest class id.
    std::vector<std::size_t> predict(const Matrix& x) const {
        const Matrix s = scores(x);
        std::vector<std::size_t> out(s.rows());
        for (std::size_t r = 0; r < s.rows(); ++r) {
            const auto row = s.row(r);
            std::size_t best = 0;
            for (std::size_t c = 1; c < row.size(); ++c)
                if (row[c] > row[best]) best = c;
            out[r] = best;
        }
        return out;
    }

    const std::vector<DenseLayer>& layers() const noexcept { return layers_; }
    const std::vector<Activation>& activations() const noexcept { return acts_; }
    std::vector<DenseLayer>& mutable_layers() noexcept { return layers_; }

private:
    std::vector<double> shift_, scale_;
    std::vector<DenseLayer> layers_;
    std::vector<Activation> acts_;
    std::size_t classes_ = 0;
};

// Features are standardized with the training set's mean and standard
// deviation (a zero deviation becomes 1). Logistic weights start at zero,
// so zero epochs gives identical logits for every class. Mini-batches are
// reshuffled every epoch from `rng`.
inline Classifier train_classifier(const ClassifierSpec& spec, const Dataset& train, Rng& rng) {
    train.validate(true);
    if (train.size() == 0) throw InvalidInput("train_classifier: empty training set");
    std::size_t represented = 0;
    for (auto c : train.class_counts()) represented += c > 0;
    if (represented < 2)
        throw InvalidInput("train_classifier: training set must contain at least 2 classes");
    if (spec.batch_size == 0) throw InvalidInput("train_classifier: batch_size must be >= 1");

    const std::size_t n = train.size(), d = train.dims(), C = train.class_count;
    std::vector<double> shift(d, 0.0), scale(d, 1.0);
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += train.features(r, j);
        shift[j] = s / static_cast<double>(n);
        double v = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dev = train.features(r, j) - shift[j];
            v += dev * dev;
        }
        const double sd = std::sqrt(v / static_cast<double>(n));
        scale[j] = sd > 1e-12 ? sd : 1.0;
    }

    std::vector<DenseLayer> layers;
    std::vector<Activation> acts;
    if (spec.model == ClassifierModel::logistic) {
        layers.push_back({Matrix(C, d), std::vector<double>(C, 0.0)});
        acts.push_back(Activation::linear());
    } else {
        MlpSpec mlp;
        mlp.layer_sizes.push_back(d);
        for (auto h : spec.hidden_sizes) {
            mlp.layer_sizes.push_back(h);
            mlp.activations.push_back(spec.hidden_activation);
        }
        mlp.layer_sizes.push_back(C);
        mlp.activations.push_back(Activation::linear());
        auto params = init_params(mlp, rng, 5.0);
        layers = std::move(params.layers);
        acts = mlp.activations;
    }

    Classifier model(shift, scale, std::move(layers), std::move(acts), C);
    const Matrix x = model.standardize(train.features);
    const Matrix targets = one_hot(train.labels, C);

    MlpParams params{model.layers()};
    OptimizerState opt(spec.optimizer, params);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += spec.batch_size) {
            const std::size_t stop = std::min(n, start + spec.batch_size);
            std::span<const std::size_t> idx(order.data() + start, stop - start);
            const Matrix xb = x.select_rows(idx);
            const Matrix tb = targets.select_rows(idx);
            auto fw = detail::forward_layers(params.layers, model.activations(), xb);
            auto loss = softmax_ce_loss(fw.output, tb);
            auto bw = detail::backward_layers(params.layers, model.activations(), fw.cache, loss.grad, false);
            opt.step(params, bw.grads);
        }
    }
    model.mutable_layers() = std::move(params.layers);
    return model;
}

// Fraction of rows whose predicted class equals the label.
inline double accuracy(const Classifier& clf, const Dataset& data) {
    if (data.size() == 0) throw InvalidInput("accuracy: empty dataset");
    const auto pred = clf.predict(data.features);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) correct += pred[i] == data.labels[i];
    return static_cast<double>(correct) / static_cast<double>(pred.size());
}

}  // namespace augbias
