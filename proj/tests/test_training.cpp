#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "lowres/errors.hpp"
#include "lowres/mlp.hpp"
#include "lowres/sweep.hpp"
#include "lowres/train.hpp"

using namespace lowres;

namespace {

// 200-sample, 2-class, linearly separable toy task on [0,1]^4.
Dataset separable_toy(std::uint64_t seed = 5) {
    Dataset d;
    d.name = "toy";
    d.n_classes = 2;
    const int n = 200;
    d.inputs = Matrix(n, 4);
    d.labels.resize(n);
    RngStream rng(seed, 0);
    for (int i = 0; i < n; ++i) {
        int cls = i % 2;
        d.labels[i] = cls;
        for (int c = 0; c < 4; ++c) {
            double lo = cls == 0 ? 0.0 : 0.6;
            d.inputs.at(i, c) = lo + 0.4 * rng.next();
        }
    }
    return d;
}

TrainConfig toy_config(QuantPolicy policy, std::uint64_t seed, int epochs) {
    TrainConfig cfg;
    cfg.policy = policy;
    cfg.learning_rate = 0.5;
    cfg.epochs = epochs;
    cfg.batch_size = 50;
    cfg.seed = seed;
    cfg.eval_every = epochs;
    return cfg;
}

double train_toy_final_error(QuantPolicy policy, std::uint64_t seed, int epochs) {
    Dataset toy = separable_toy();
    ModelSpec spec{"mlp", 4};
    const Grid* snap = policy.quantized() ? &*policy.grid : nullptr;
    auto model = make_model(spec, toy, seed, snap);
    train(*model, toy, nullptr, toy_config(policy, seed, epochs));
    return model->evaluate(toy).value;
}

}  // namespace

TEST_CASE("baseline reaches zero training error on separable toy data") {
    CHECK(train_toy_final_error(QuantPolicy::float_baseline(), 1, 120) == 0.0);
}

TEST_CASE("2-bit randomized rounding learns the toy task") {
    std::vector<double> errors;
    for (std::uint64_t seed : {1ull, 2ull, 3ull})
        errors.push_back(train_toy_final_error(QuantPolicy::rr(2), seed, 200));
    std::sort(errors.begin(), errors.end());
    CHECK(errors[1] < 10.0);  // 3-seed median
}

TEST_CASE("training is bit-deterministic given the seed") {
    Dataset toy = separable_toy();
    ModelSpec spec{"mlp", 4};
    Grid g = make_grid(3);
    auto m1 = make_model(spec, toy, 7, &g);
    auto m2 = make_model(spec, toy, 7, &g);
    TrainConfig cfg = toy_config(QuantPolicy::rr(3), 7, 40);
    train(*m1, toy, nullptr, cfg);
    train(*m2, toy, nullptr, cfg);
    auto p1 = m1->params();
    auto p2 = m2->params();
    for (std::size_t i = 0; i < p1.size(); ++i)
        for (std::size_t j = 0; j < p1[i].value->size(); ++j)
            CHECK((*p1[i].value)[j] == (*p2[i].value)[j]);
}

TEST_CASE("weights stay on the grid through training") {
    Dataset toy = separable_toy();
    ModelSpec spec{"mlp", 4};
    for (int bits : {2, 5}) {
        Grid g = make_grid(bits);
        auto model = make_model(spec, toy, 3, &g);
        train(*model, toy, nullptr, toy_config(QuantPolicy::rr(bits), 3, 30));
        CHECK(weights_on_grid(*model, g));
    }
}

TEST_CASE("high-resolution rr tracks the float baseline") {
    std::vector<double> baseline;
    for (std::uint64_t seed : {1ull, 2ull, 3ull})
        baseline.push_back(train_toy_final_error(QuantPolicy::float_baseline(), seed, 120));
    std::sort(baseline.begin(), baseline.end());
    double spread = baseline.back() - baseline.front();
    double floor = 100.0 / 200.0;  // one example of the toy set
    double rr24 = train_toy_final_error(QuantPolicy::rr(24), 1, 120);
    CHECK(std::abs(rr24 - baseline[1]) <= 2.0 * std::max(spread, floor));
}

TEST_CASE("learning curve bookkeeping") {
    Dataset toy = separable_toy();
    ModelSpec spec{"mlp", 4};
    auto model = make_model(spec, toy, 1, nullptr);
    TrainConfig cfg = toy_config(QuantPolicy::float_baseline(), 1, 25);
    cfg.eval_every = 10;
    LearningCurve curve = train(*model, toy, &toy, cfg);
    REQUIRE(curve.points.size() == 3);  // epochs 10, 20, 25 (final always recorded)
    CHECK(curve.points[0].epoch == 10);
    CHECK(curve.points[1].epoch == 20);
    CHECK(curve.points[2].epoch == 25);
    for (std::size_t i = 1; i < curve.points.size(); ++i)
        CHECK(curve.points[i].epoch > curve.points[i - 1].epoch);
    CHECK(curve.points[2].valid_metric == curve.points[2].train_metric);
}

TEST_CASE("memory budget arithmetic") {
    MemoryBudget b2{400, 2};
    MemoryBudget b4{400, 4};
    CHECK(b2.derive_hidden(10) == 20);
    CHECK(b4.derive_hidden(10) == 10);  // doubling bits halves the hidden size
    MemoryBudget tiny{16, 32};
    CHECK_THROWS_AS((tiny.derive_hidden(10)), ConfigError);
}

TEST_CASE("offline compression: lossless when k covers all distinct weights") {
    Dataset toy = separable_toy();
    ModelSpec spec{"mlp", 4};
    auto model = make_model(spec, toy, 11, nullptr);
    train(*model, toy, nullptr, toy_config(QuantPolicy::float_baseline(), 11, 60));
    double before = model->evaluate(toy).value;
    // 4*4 + 4*2 = 24 weight entries; k = 2^7 - 1 = 127 >= 24, full-precision centers
    auto clone = model->clone();
    CompressionReport report = compress_trained(*clone, 7, 53, 1);
    CHECK(clone->evaluate(toy).value == before);
    CHECK(report.codebooks.size() == 2);

    // k = 1 collapses every matrix to its mean: near-chance performance
    auto degenerate = model->clone();
    for (const ParamView& p : degenerate->params()) {
        if (!p.weight_matrix) continue;
        KmeansResult km = kmeans_compress({p.value->data(), p.value->size()}, 1, 32, 1);
        auto flat = apply_codebook(km.codebook, km.assignments);
        for (std::size_t i = 0; i < p.value->size(); ++i) (*p.value)[i] = flat[i];
    }
    CHECK(degenerate->evaluate(toy).value >= 30.0);

    // compression to few clusters cannot beat the uncompressed model by more
    // than noise
    auto coarse = model->clone();
    compress_trained(*coarse, 2, 32, 1);
    CHECK(coarse->evaluate(toy).value >= before - 1.0);
}

TEST_CASE("fixed-hidden sweep bookkeeping") {
    Dataset toy = separable_toy();
    SweepOptions options;
    options.model = ModelSpec{"mlp", 4};
    options.base = toy_config(QuantPolicy::float_baseline(), 0, 5);
    options.seeds = {1, 2};
    std::vector<Method> methods = {Method::Nearest, Method::RR, Method::CoarseP,
                                   Method::KmeansOffline};
    std::vector<int> bits = {2, 4, 6, 8};
    auto rows = sweep_fixed_hidden(bits, methods, options, toy, nullptr, toy);
    CHECK(rows.size() == methods.size() * bits.size() * options.seeds.size());
    for (const auto& row : rows) {
        CHECK(row.hidden_size == 4);
        CHECK(row.memory_bits >= 4 * 4 * row.bits);
        CHECK(row.curve.points.size() >= 1);
    }
    // baseline ignores the bits axis
    auto base_rows = sweep_fixed_hidden(bits, {Method::Baseline}, options, toy, nullptr, toy);
    CHECK(base_rows.size() == options.seeds.size());
    CHECK(base_rows[0].bits == 32);
}

TEST_CASE("fixed-memory sweep matches fixed-hidden when the budget is loose") {
    Dataset toy = separable_toy();
    SweepOptions options;
    options.model = ModelSpec{"mlp", 4};
    options.base = toy_config(QuantPolicy::rr(2), 0, 10);
    options.seeds = {3};
    // budget chosen so hidden = 4 exactly at 4 bits per weight: 4*4*4 = 64
    auto fixed_mem = sweep_fixed_memory(64, {4}, Method::RR, options, toy, nullptr, toy);
    auto fixed_hid = sweep_fixed_hidden({4}, {Method::RR}, options, toy, nullptr, toy);
    REQUIRE(fixed_mem.size() == 1);
    REQUIRE(fixed_hid.size() == 1);
    CHECK(fixed_mem[0].hidden_size == 4);
    CHECK(fixed_mem[0].test_metric.value == fixed_hid[0].test_metric.value);
    CHECK(fixed_mem[0].memory_bits == fixed_hid[0].memory_bits);

    CHECK_THROWS_AS((sweep_fixed_memory(8, {4}, Method::RR, options, toy, nullptr, toy)),
                    ConfigError);
}

TEST_CASE("non-finite gradients abort training as a numerical failure") {
    Dataset toy = separable_toy();
    ModelSpec spec{"mlp", 4};
    auto model = make_model(spec, toy, 1, nullptr);
    toy.inputs.at(3, 2) = std::nan("");  // poisons every gradient it touches
    TrainConfig cfg = toy_config(QuantPolicy::float_baseline(), 1, 5);
    cfg.batch_size = toy.examples();
    CHECK_THROWS_AS((train(*model, toy, nullptr, cfg)), NumericError);
}

TEST_CASE("parallel sweep cells produce the same rows as sequential") {
    Dataset toy = separable_toy();
    SweepOptions options;
    options.model = ModelSpec{"mlp", 4};
    options.base = toy_config(QuantPolicy::float_baseline(), 0, 8);
    options.seeds = {1, 2, 3};
    std::vector<int> bits = {2, 4};
    auto seq = sweep_fixed_hidden(bits, {Method::RR}, options, toy, nullptr, toy);
    options.workers = 3;
    auto par = sweep_fixed_hidden(bits, {Method::RR}, options, toy, nullptr, toy);
    REQUIRE(seq.size() == par.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        CHECK(seq[i].bits == par[i].bits);
        CHECK(seq[i].seed == par[i].seed);
        CHECK(seq[i].train_metric.value == par[i].train_metric.value);
        CHECK(seq[i].test_metric.value == par[i].test_metric.value);
    }
}
