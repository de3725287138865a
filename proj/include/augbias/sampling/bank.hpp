#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/core/matrix.hpp"
#include "augbias/core/rng.hpp"
#include "augbias/gan/trainer.hpp"

namespace augbias {

// Draws n feature rows for one (class, checkpoint).
using SampleFn = std::function<Matrix(std::size_t n, Rng& rng)>;

// Sample sources keyed by (class, iteration). Trained snapshots and mock
// generators are registered the same way, so sampling and bias code never
// needs to know which one it is reading.
class GeneratorBank {
public:
    GeneratorBank(std::size_t dims, std::size_t class_count) : dims_(dims), classes_(class_count) {}

    std::size_t dims() const noexcept { return dims_; }
    std::size_t class_count() const noexcept { return classes_; }

    void add(std::size_t cls, std::size_t iteration, SampleFn fn) {
        if (cls >= classes_)
            throw InvalidInput("GeneratorBank: class " + std::to_string(cls) + " outside universe of " +
                               std::to_string(classes_));
        sources_[{cls, iteration}] = std::move(fn);
    }

    // A conditional snapshot serves every class.
    void add(const GeneratorSnapshot& snap) {
        if (snap.dims() != dims_) throw InvalidInput("GeneratorBank: snapshot feature width mismatch");
        if (snap.class_count != classes_) throw InvalidInput("GeneratorBank: snapshot class universe mismatch");
        auto bind = [snap](std::size_t cls) {
            return [snap, cls](std::size_t n, Rng& rng) { return generate(snap, n, rng, cls).features; };
        };
        if (snap.class_label) {
            add(*snap.class_label, snap.iteration, bind(*snap.class_label));
        } else {
            for (std::size_t c = 0; c < classes_; ++c) add(c, snap.iteration, bind(c));
        }
    }

    void add(const std::vector<GeneratorSnapshot>& snaps) {
        for (const auto& s : snaps) add(s);
    }

    bool has(std::size_t cls, std::size_t iteration) const { return sources_.count({cls, iteration}) > 0; }

    std::vector<std::size_t> iterations(std::size_t cls) const {
        std::vector<std::size_t> out;
        for (const auto& [key, fn] : sources_)
            if (key.first == cls) out.push_back(key.second);
        return out;
    }

    Matrix sample(std::size_t cls, std::size_t iteration, std::size_t n, Rng& rng) const {
        auto it = sources_.find({cls, iteration});
        if (it == sources_.end())
            throw PlanInfeasible("no generator for class " + std::to_string(cls) + " at iteration " +
                                 std::to_string(iteration));
        Matrix m = it->second(n, rng);
        if (m.rows() != n || m.cols() != dims_)
            throw InvalidInput("GeneratorBank: source for class " + std::to_string(cls) +
                               " returned a wrongly shaped batch");
        return m;
    }

private:
    std::size_t dims_;
    std::size_t classes_;
    std::map<std::pair<std::size_t, std::size_t>, SampleFn> sources_;
};

}  // namespace augbias
