#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "augbias/core/error.hpp"
#include "augbias/datagen/csv.hpp"
#include "augbias/gan/trainer.hpp"

namespace augbias {

// Text container, one record per line, values separated by single spaces,
// reals in shortest round-trip form:
//
//   augbias-snapshot 1
//   variant <name>
//   class_label <id|all>
//   class_count <C>
//   latent_dim <k>
//   iteration <t>
//   seed <u64>
//   spec_hash <u64>
//   layer_sizes <n0> <n1> ...
//   activations <a1> <a2> ...
//   shift <d reals>
//   scale <d reals>
//   weight <layer> <row> <in reals>      (every row of every layer, in order)
//   bias <layer> <out reals>
//   end
inline constexpr const char* kSnapshotMagic = "augbias-snapshot";
inline constexpr int kSnapshotVersion = 1;

inline void save_snapshot(const GeneratorSnapshot& s, std::ostream& out) {
    auto reals = [&](const auto& values) {
        for (double v : values) out << ' ' << csv::format_double(v);
        out << '\n';
    };
    out << kSnapshotMagic << ' ' << kSnapshotVersion << '\n';
    out << "variant " << to_string(s.variant) << '\n';
    out << "class_label " << (s.class_label ? std::to_string(*s.class_label) : "all") << '\n';
    out << "class_count " << s.class_count << '\n';
    out << "latent_dim " << s.latent_dim << '\n';
    out << "iteration " << s.iteration << '\n';
    out << "seed " << s.seed << '\n';
    out << "spec_hash " << s.spec_hash << '\n';
    out << "layer_sizes";
    for (auto n : s.gen_spec.layer_sizes) out << ' ' << n;
    out << "\nactivations";
    for (const auto& a : s.gen_spec.activations) out << ' ' << to_string(a);
    out << "\nshift";
    reals(s.normalization.shift);
    out << "scale";
    reals(s.normalization.scale);
    for (std::size_t l = 0; l < s.gen_params.layers.size(); ++l) {
        const auto& layer = s.gen_params.layers[l];
        for (std::size_t r = 0; r < layer.weight.rows(); ++r) {
            out << "weight " << l << ' ' << r;
            reals(layer.weight.row(r));
        }
        out << "bias " << l;
        reals(layer.bias);
    }
    out << "end\n";
}

inline void save_snapshot(const GeneratorSnapshot& s, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw InvalidInput("save_snapshot: cannot write " + path.string());
    save_snapshot(s, out);
}

inline GeneratorSnapshot load_snapshot(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) -> void {
        throw ParseError(source + ": line " + std::to_string(line_no) + ": " + why);
    };
    auto next = [&](const std::string& key) {
        if (!std::getline(in, line)) fail("unexpected end of file, wanted '" + key + "'");
        ++line_no;
        std::istringstream ss(line);
        std::string k;
        ss >> k;
        if (k != key) fail("expected '" + key + "', found '" + k + "'");
        std::vector<std::string> tokens;
        for (std::string t; ss >> t;) tokens.push_back(t);
        return tokens;
    };
    auto index = [&](const std::string& t) {
        std::size_t v = 0;
        if (!csv::parse_index(t, v)) fail("bad integer '" + t + "'");
        return v;
    };
    auto real = [&](const std::string& t) {
        double v = 0.0;
        if (!csv::parse_double(t, v)) fail("bad number '" + t + "'");
        return v;
    };
    auto single = [&](const std::string& key) {
        auto t = next(key);
        if (t.size() != 1) fail("'" + key + "' takes one value");
        return t[0];
    };
    auto reals = [&](const std::vector<std::string>& t, std::size_t from, std::size_t count) {
        if (t.size() != from + count)
            fail("expected " + std::to_string(count) + " values, found " + std::to_string(t.size() - from));
        std::vector<double> v;
        for (std::size_t i = from; i < t.size(); ++i) v.push_back(real(t[i]));
        return v;
    };

    auto head = next(kSnapshotMagic);
    if (head.size() != 1 || head[0] != std::to_string(kSnapshotVersion))
        fail("unsupported snapshot version");

    GeneratorSnapshot s;
    try {
        s.variant = parse_variant(single("variant"));
    } catch (const ParseError& e) {
        fail(e.what());
    }
    const auto label = single("class_label");
    if (label != "all") s.class_label = index(label);
    s.class_count = index(single("class_count"));
    s.latent_dim = index(single("latent_dim"));
    s.iteration = index(single("iteration"));
    s.seed = index(single("seed"));
    s.spec_hash = index(single("spec_hash"));
    for (const auto& t : next("layer_sizes")) s.gen_spec.layer_sizes.push_back(index(t));
    for (const auto& t : next("activations")) {
        try {
            s.gen_spec.activations.push_back(parse_activation(t));
        } catch (const ParseError& e) {
            fail(e.what());
        }
    }
    try {
        s.gen_spec.validate();
    } catch (const InvalidSpec& e) {
        fail(e.what());
    }
    const std::size_t d = s.gen_spec.output_size();
    s.normalization.shift = reals(next("shift"), 0, d);
    s.normalization.scale = reals(next("scale"), 0, d);
    for (double v : s.normalization.scale)
        if (!(v > 0.0)) fail("normalization scale must be positive");

    for (std::size_t l = 0; l < s.gen_spec.layer_count(); ++l) {
        const std::size_t in_n = s.gen_spec.layer_sizes[l], out_n = s.gen_spec.layer_sizes[l + 1];
        DenseLayer layer{Matrix(out_n, in_n), {}};
        for (std::size_t r = 0; r < out_n; ++r) {
            auto t = next("weight");
            if (t.size() < 2 || index(t[0]) != l || index(t[1]) != r) fail("weight rows out of order");
            auto row = reals(t, 2, in_n);
            std::copy(row.begin(), row.end(), layer.weight.row(r).begin());
        }
        auto t = next("bias");
        if (t.empty() || index(t[0]) != l) fail("bias rows out of order");
        layer.bias = reals(t, 1, out_n);
        s.gen_params.layers.push_back(std::move(layer));
    }
    next("end");
    return s;
}

inline GeneratorSnapshot load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("load_snapshot: cannot open " + path.string());
    return load_snapshot(in, path.string());
}

}  // namespace augbias
