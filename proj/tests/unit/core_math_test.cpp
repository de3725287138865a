#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "augbias/core/loss.hpp"
#include "augbias/core/mlp.hpp"
#include "augbias/core/optimizer.hpp"
#include "augbias/core/rng.hpp"
#include "support/finite_diff.hpp"

using namespace augbias;
using augbias::oracle::max_rel_err;
using augbias::oracle::kFdRelTol;

namespace {

MlpSpec random_spec(Rng& rng, Activation hidden, Activation out) {
    MlpSpec s;
    s.layer_sizes = {1 + rng.uniform_int(4), 1 + rng.uniform_int(5), 1 + rng.uniform_int(5),
                     1 + rng.uniform_int(3)};
    s.activations = {hidden, hidden, out};
    return s;
}

}  // namespace

// ---------------------------------------------------------------- Rng

TEST(Rng, SameSeedSameStream) {
    Rng a(42), b(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
    Rng c(42), d(42);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(c.normal(), d.normal());
}

TEST(Rng, SplitMix64ReferenceValues) {
    // First outputs of SplitMix64 seeded with 0 (public reference sequence).
    Rng r(0);
    EXPECT_EQ(r.next_u64(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(r.next_u64(), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(r.next_u64(), 0x06C45D188009454FULL);
}

TEST(Rng, UniformRangeAndMoments) {
    Rng r(7);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.005);
    sum = 0;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.02);
}

TEST(Rng, UniformIntCoversRange) {
    Rng r(3);
    std::vector<int> counts(7, 0);
    for (int i = 0; i < 70000; ++i) ++counts[r.uniform_int(7)];
    for (int c : counts) EXPECT_NEAR(c, 10000, 500);
    EXPECT_THROW(r.uniform_int(0), InvalidInput);
}

TEST(Rng, ShuffleIsPermutation) {
    Rng r(11);
    std::vector<int> v(100);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    r.shuffle(w);
    EXPECT_NE(v, w);
    std::sort(w.begin(), w.end());
    EXPECT_EQ(v, w);
}

TEST(Rng, ForkedStreamsDiffer) {
    Rng base(5);
    auto a = base.fork(1), b = base.fork(2), a2 = base.fork(1);
    EXPECT_NE(a.seed(), b.seed());
    EXPECT_EQ(a.next_u64(), a2.next_u64());
}

// ---------------------------------------------------------------- forward

TEST(Forward, IdentityLinearNet) {
    MlpSpec spec{{2, 2, 2}, {Activation::linear(), Activation::linear()}};
    MlpParams p;
    for (int l = 0; l < 2; ++l) p.layers.push_back({Matrix{{1, 0}, {0, 1}}, {0, 0}});
    auto res = forward(spec, p, Matrix{{1, 2}});
    EXPECT_EQ(res.output, (Matrix{{1, 2}}));
}

TEST(Forward, ZeroSigmoidUnitIsHalf) {
    MlpSpec spec{{3, 1, 1}, {Activation::linear(), Activation::sigmoid()}};
    MlpParams p;
    p.layers.push_back({Matrix(1, 3), {0}});
    p.layers.push_back({Matrix(1, 1), {0}});
    auto res = forward(spec, p, Matrix{{5, -2, 9}, {0.1, 0.2, 0.3}});
    EXPECT_DOUBLE_EQ(res.output(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(res.output(1, 0), 0.5);
}

TEST(Forward, HandComputed231ReluSigmoid) {
    // h = relu(W1 x + b1), y = sigmoid(w2 . h + b2), computed scalar by scalar.
    MlpSpec spec{{2, 3, 1}, {Activation::relu(), Activation::sigmoid()}};
    MlpParams p;
    p.layers.push_back({Matrix{{0.5, -1.0}, {1.5, 0.25}, {-0.75, 2.0}}, {0.1, -0.2, 0.3}});
    p.layers.push_back({Matrix{{1.0, -0.5, 0.25}}, {-0.1}});
    const double x0 = 0.8, x1 = -0.4;
    const double h0 = std::max(0.0, 0.5 * x0 - 1.0 * x1 + 0.1);     // 0.9
    const double h1 = std::max(0.0, 1.5 * x0 + 0.25 * x1 - 0.2);    // 0.9
    const double h2 = std::max(0.0, -0.75 * x0 + 2.0 * x1 + 0.3);   // 0 (negative)
    const double z = 1.0 * h0 - 0.5 * h1 + 0.25 * h2 - 0.1;         // 0.35
    const double expected = 1.0 / (1.0 + std::exp(-z));
    EXPECT_DOUBLE_EQ(z, 0.35);
    auto res = forward(spec, p, Matrix{{x0, x1}});
    EXPECT_NEAR(res.output(0, 0), expected, 1e-15);
    EXPECT_NEAR(expected, 0.5866175789173301, 1e-15);
}

TEST(Forward, SoftmaxRowsSumToOne) {
    Rng rng(9);
    MlpSpec spec{{4, 6, 5}, {Activation::tanh(), Activation::softmax()}};
    auto p = init_params(spec, rng, 50.0);
    auto res = forward(spec, p, standard_normal(20, 4, rng));
    for (std::size_t r = 0; r < 20; ++r) {
        double s = 0;
        for (double v : res.output.row(r)) s += v;
        EXPECT_NEAR(s, 1.0, 1e-6);
    }
}

TEST(Forward, SigmoidStrictlyInsideUnitInterval) {
    MlpSpec spec{{1, 1, 1}, {Activation::linear(), Activation::sigmoid()}};
    MlpParams p;
    p.layers.push_back({Matrix{{1.0}}, {0}});
    p.layers.push_back({Matrix{{1.0}}, {0}});
    auto res = forward(spec, p, Matrix{{1000.0}, {-1000.0}});
    EXPECT_GT(res.output(0, 0), 0.0);
    EXPECT_LT(res.output(0, 0), 1.0);
    EXPECT_GT(res.output(1, 0), 0.0);
    EXPECT_TRUE(res.output.all_finite());
}

TEST(Forward, ShapeMismatchRejected) {
    MlpSpec spec{{2, 3, 1}, {Activation::relu(), Activation::sigmoid()}};
    Rng rng(1);
    auto p = init_params(spec, rng);
    EXPECT_THROW(forward(spec, p, Matrix(1, 3)), InvalidInput);
}

TEST(MlpSpec, Validation) {
    EXPECT_THROW((MlpSpec{{2, 1}, {Activation::linear()}}.validate()), InvalidSpec);
    EXPECT_THROW((MlpSpec{{2, 3, 1}, {Activation::softmax(), Activation::linear()}}.validate()),
                 InvalidSpec);
    EXPECT_THROW((MlpSpec{{2, 0, 1}, {Activation::relu(), Activation::linear()}}.validate()),
                 InvalidSpec);
    EXPECT_NO_THROW((MlpSpec{{2, 3, 2}, {Activation::relu(), Activation::softmax()}}.validate()));
}

TEST(Forward, Deterministic) {
    MlpSpec spec{{3, 8, 2}, {Activation::leaky_relu(0.2), Activation::linear()}};
    Rng r1(77), r2(77);
    auto p1 = init_params(spec, r1), p2 = init_params(spec, r2);
    EXPECT_EQ(p1, p2);
    auto x1 = standard_normal(5, 3, r1), x2 = standard_normal(5, 3, r2);
    EXPECT_EQ(forward(spec, p1, x1).output, forward(spec, p2, x2).output);
}

// ---------------------------------------------------------------- backward

TEST(Backward, ZeroLossGradGivesZeroGrads) {
    Rng rng(4);
    MlpSpec spec{{3, 4, 2}, {Activation::tanh(), Activation::linear()}};
    auto p = init_params(spec, rng);
    auto fw = forward(spec, p, standard_normal(6, 3, rng));
    auto bw = backward(spec, p, fw.cache, Matrix(6, 2));
    bw.grads.for_each([](double g) { EXPECT_EQ(g, 0.0); });
}

TEST(Backward, LinearSquaredErrorClosedForm) {
    // Two linear layers where the second is identity: the first layer's
    // gradient is 2 (pred - target) x.
    MlpSpec spec{{3, 1, 1}, {Activation::linear(), Activation::linear()}};
    MlpParams p;
    p.layers.push_back({Matrix{{0.3, -0.2, 0.5}}, {0.1}});
    p.layers.push_back({Matrix{{1.0}}, {0.0}});
    const Matrix x{{1.0, 2.0, -1.0}};
    const double target = 2.0;
    auto fw = forward(spec, p, x);
    const double pred = fw.output(0, 0);  // 0.3 - 0.4 - 0.5 + 0.1 = -0.5
    EXPECT_NEAR(pred, -0.5, 1e-15);
    auto bw = backward(spec, p, fw.cache, Matrix{{2.0 * (pred - target)}});
    for (std::size_t k = 0; k < 3; ++k)
        EXPECT_NEAR(bw.grads.layers[0].weight(0, k), 2.0 * (pred - target) * x(0, k), 1e-14);
    EXPECT_NEAR(bw.grads.layers[0].bias[0], 2.0 * (pred - target), 1e-14);
}

TEST(Backward, CacheMismatchRejected) {
    Rng rng(4);
    MlpSpec spec{{3, 4, 2}, {Activation::tanh(), Activation::linear()}};
    auto p = init_params(spec, rng);
    auto fw = forward(spec, p, standard_normal(6, 3, rng));
    EXPECT_THROW(backward(spec, p, fw.cache, Matrix(6, 3)), InvalidInput);
    fw.cache.inputs.pop_back();
    EXPECT_THROW(backward(spec, p, fw.cache, Matrix(6, 2)), InvalidInput);
}

// Every activation as hidden and output layer, 100 random 3-layer nets per
// pairing, checked against central differences of a random linear read-out.
TEST(Backward, FiniteDifferenceAllActivations) {
    const std::vector<Activation> hidden = {Activation::relu(), Activation::leaky_relu(0.2),
                                            Activation::tanh(), Activation::sigmoid(),
                                            Activation::linear()};
    const std::vector<Activation> outs = {Activation::linear(), Activation::sigmoid(),
                                          Activation::softmax(), Activation::tanh()};
    Rng rng(2024);
    for (const auto& h : hidden) {
        for (const auto& o : outs) {
            for (int inst = 0; inst < 100;) {
                auto spec = random_spec(rng, h, o);
                auto p = init_params(spec, rng, 10.0);
                // Non-zero biases keep dead-relu rows off the kink at exactly 0.
                for (auto& l : p.layers)
                    for (double& b : l.bias) b = rng.normal(0.0, 0.5);
                auto x = standard_normal(1 + rng.uniform_int(4), spec.input_size(), rng);
                if (oracle::near_kink(spec, p, x)) continue;
                ++inst;
                auto w = standard_normal(x.rows(), spec.output_size(), rng);
                auto loss = [&] {
                    auto out = forward(spec, p, x).output;
                    double s = 0;
                    for (std::size_t i = 0; i < out.size(); ++i) s += w.data()[i] * out.data()[i];
                    return s;
                };
                auto fw = forward(spec, p, x);
                auto bw = backward(spec, p, fw.cache, w);
                auto numeric = oracle::numeric_grad(p, loss);
                ASSERT_LT(max_rel_err(oracle::flatten(bw.grads), numeric), kFdRelTol)
                    << to_string(h) << " / " << to_string(o) << " instance " << inst;
                auto numeric_x = oracle::numeric_grad(x, loss);
                ASSERT_LT(max_rel_err(bw.input_grad, numeric_x), kFdRelTol);
            }
        }
    }
}

// ---------------------------------------------------------------- optimizer

TEST(Optimizer, ZeroGradientLeavesParams) {
    for (auto cfg : {OptimizerConfig::sgd(0.1), OptimizerConfig::adam(0.001, 0.9, 0.999, 1e-8)}) {
        MlpParams p;
        p.layers.push_back({Matrix{{1.0, -2.0}}, {0.5}});
        const auto before = p;
        OptimizerState st(cfg, p);
        st.step(p, p.zeros_like());
        EXPECT_EQ(p, before);
        EXPECT_EQ(st.step_count(), 1u);
    }
}

TEST(Optimizer, SgdArithmetic) {
    MlpParams p;
    p.layers.push_back({Matrix{{1.0}}, {0.0}});
    MlpParams g;
    g.layers.push_back({Matrix{{2.0}}, {0.0}});
    OptimizerState st(OptimizerConfig::sgd(0.1), p);
    optimizer_step(st, p, g);
    EXPECT_DOUBLE_EQ(p.layers[0].weight(0, 0), 0.8);
}

TEST(Optimizer, SingleAdamStepMatchesRecurrence) {
    // m = 0.1*2 = 0.2, v = 0.001*4 = 0.004, m_hat = 2, v_hat = 4,
    // p = 1 - 0.001 * 2 / (2 + 1e-8).
    const double expected = 1.0 - 0.001 * 2.0 / (2.0 + 1e-8);
    EXPECT_NEAR(expected, 0.999000000005, 1e-15);
    MlpParams p;
    p.layers.push_back({Matrix{{1.0}}, {0.0}});
    MlpParams g;
    g.layers.push_back({Matrix{{2.0}}, {0.0}});
    OptimizerState st(OptimizerConfig::adam(0.001, 0.9, 0.999, 1e-8), p);
    st.step(p, g);
    EXPECT_NEAR(p.layers[0].weight(0, 0), expected, 1e-15);
    EXPECT_NEAR(st.first_moment().layers[0].weight(0, 0), 0.2, 1e-15);
    EXPECT_NEAR(st.second_moment().layers[0].weight(0, 0), 0.004, 1e-15);
}

TEST(Optimizer, StepCounterIncrements) {
    MlpParams p;
    p.layers.push_back({Matrix{{1.0}}, {0.0}});
    OptimizerState st(OptimizerConfig::adam(), p);
    for (std::uint64_t i = 1; i <= 5; ++i) {
        st.step(p, p);
        EXPECT_EQ(st.step_count(), i);
    }
}

TEST(Optimizer, NonFiniteGradientDiverges) {
    MlpParams p;
    p.layers.push_back({Matrix{{1.0}}, {0.0}});
    MlpParams g;
    g.layers.push_back({Matrix{{std::nan("")}}, {0.0}});
    OptimizerState st(OptimizerConfig::adam(), p);
    EXPECT_THROW(st.step(p, g), TrainingDiverged);
    MlpParams bad;
    bad.layers.push_back({Matrix(2, 2), {0.0, 0.0}});
    EXPECT_THROW(st.step(p, bad), InvalidInput);
}

// ---------------------------------------------------------------- losses

TEST(Loss, BceHalfIsLn2) {
    auto r = bce_loss(Matrix{{0.5}}, Matrix{{1.0}});
    EXPECT_NEAR(r.value, std::numbers::ln2, 1e-12);
}

TEST(Loss, BcePerfectPredictionBounded) {
    auto r = bce_loss(Matrix{{1.0}, {0.0}}, Matrix{{1.0}, {0.0}});
    EXPECT_LE(r.value, -std::log(1.0 - kProbEps) + 1e-18);
    EXPECT_TRUE(std::isfinite(r.value));
}

TEST(Loss, BceGradientFiniteDifference) {
    Rng rng(31);
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 1 + rng.uniform_int(6), c = 1 + rng.uniform_int(3);
        Matrix p(n, c), t(n, c);
        for (double& v : p.data()) v = rng.uniform(0.05, 0.95);
        for (double& v : t.data()) v = static_cast<double>(rng.uniform_int(2));
        auto r = bce_loss(p, t);
        auto numeric = oracle::numeric_grad(p, [&] { return bce_loss(p, t).value; });
        ASSERT_LT(max_rel_err(r.grad, numeric), kFdRelTol);
    }
}

TEST(Loss, BceWithLogitsAgreesWithBce) {
    Rng rng(8);
    Matrix l = standard_normal(10, 1, rng), t(10, 1), p(10, 1);
    for (std::size_t i = 0; i < 10; ++i) {
        t.data()[i] = static_cast<double>(rng.uniform_int(2));
        p.data()[i] = 1.0 / (1.0 + std::exp(-l.data()[i]));
    }
    EXPECT_NEAR(bce_with_logits(l, t).value, bce_loss(p, t).value, 1e-12);
    auto r = bce_with_logits(l, t);
    auto numeric = oracle::numeric_grad(l, [&] { return bce_with_logits(l, t).value; });
    EXPECT_LT(max_rel_err(r.grad, numeric), kFdRelTol);
}

TEST(Loss, SoftmaxCeUniformIsLnK) {
    for (std::size_t k : {2u, 3u, 10u}) {
        Matrix logits(1, k, 0.7), target(1, k, 1.0 / static_cast<double>(k));
        EXPECT_NEAR(softmax_ce_loss(logits, target).value, std::log(static_cast<double>(k)), 1e-12);
    }
}

TEST(Loss, SoftmaxCeLargeGapGoesToZero) {
    double prev = 1e9;
    for (double gap : {1.0, 10.0, 30.0, 1000.0}) {
        auto v = softmax_ce_loss(Matrix{{gap, 0.0, 0.0}}, Matrix{{1.0, 0.0, 0.0}}).value;
        EXPECT_LE(v, prev);
        EXPECT_TRUE(std::isfinite(v));
        prev = v;
    }
    EXPECT_LT(prev, 1e-12);
}

TEST(Loss, SoftmaxCeGradientFiniteDifference) {
    Rng rng(32);
    for (int inst = 0; inst < 100; ++inst) {
        const std::size_t n = 1 + rng.uniform_int(5), c = 2 + rng.uniform_int(4);
        Matrix l = standard_normal(n, c, rng), t(n, c);
        for (std::size_t r = 0; r < n; ++r) {
            double s = 0;
            for (double& v : t.row(r)) s += (v = rng.uniform());
            for (double& v : t.row(r)) v /= s;
        }
        auto res = softmax_ce_loss(l, t);
        auto numeric = oracle::numeric_grad(l, [&] { return softmax_ce_loss(l, t).value; });
        ASSERT_LT(max_rel_err(res.grad, numeric), kFdRelTol);
    }
}

TEST(Loss, ShapeMismatch) {
    EXPECT_THROW(bce_loss(Matrix(2, 1), Matrix(1, 2)), InvalidInput);
    EXPECT_THROW(softmax_ce_loss(Matrix(2, 3), Matrix(2, 2)), InvalidInput);
}
