#include <doctest.h>

#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "lowres/activations.hpp"
#include "lowres/mlp.hpp"
#include "lowres/nade.hpp"
#include "lowres/rbm.hpp"
#include "lowres/synthetic.hpp"

using namespace lowres;

namespace {

Matrix random_matrix(int r, int c, RngStream& rng, double scale = 1.0) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = scale * (2.0 * rng.next() - 1.0);
    return m;
}

// Central finite differences against an analytic gradient, entry by entry.
void check_gradient(Matrix& param, const Matrix& analytic,
                    const std::function<double()>& loss, double tol = 1e-4) {
    const double h = 1e-5;
    for (std::size_t i = 0; i < param.size(); ++i) {
        double saved = param[i];
        param[i] = saved + h;
        double up = loss();
        param[i] = saved - h;
        double down = loss();
        param[i] = saved;
        double numeric = (up - down) / (2.0 * h);
        double rel = std::abs(analytic[i] - numeric) /
                     std::max(std::abs(analytic[i]) + std::abs(numeric), 1e-6);
        CHECK(rel < tol);
    }
}

// Independent forward pass: plain loops, no shared code with mlp_forward.
std::vector<double> reference_mlp_row(const MlpParams& p, const std::vector<double>& x) {
    std::vector<double> h(p.W1.cols());
    for (int j = 0; j < p.W1.cols(); ++j) {
        double a = p.b1.at(0, j);
        for (int i = 0; i < p.W1.rows(); ++i) a += x[i] * p.W1.at(i, j);
        h[j] = 1.0 / (1.0 + std::exp(-a));
    }
    std::vector<double> z(p.W2.cols());
    for (int k = 0; k < p.W2.cols(); ++k) {
        double a = p.b2.at(0, k);
        for (int j = 0; j < p.W2.rows(); ++j) a += h[j] * p.W2.at(j, k);
        z[k] = a;
    }
    double mx = *std::max_element(z.begin(), z.end());
    double sum = 0.0;
    for (double& v : z) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : z) v /= sum;
    return z;
}

}  // namespace

TEST_CASE("mlp: zero parameters give uniform class probabilities") {
    MlpParams p;
    p.hidden_size = 4;
    p.W1 = Matrix(6, 4);
    p.b1 = Matrix(1, 4);
    p.W2 = Matrix(4, 5);
    p.b2 = Matrix(1, 5);
    Matrix x(3, 6, 0.5);
    Matrix probs = mlp_forward(p, x);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 5; ++c) CHECK(probs.at(r, c) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("mlp: batch rows are independent and rows sum to one") {
    RngStream rng(3, 0);
    MlpParams p = mlp_init(5, 7, 3, 11, nullptr);
    Matrix batch = random_matrix(3, 5, rng, 0.5);
    for (std::size_t i = 0; i < batch.size(); ++i) batch[i] = std::abs(batch[i]);
    Matrix all = mlp_forward(p, batch);
    for (int r = 0; r < 3; ++r) {
        Matrix single(1, 5);
        for (int c = 0; c < 5; ++c) single.at(0, c) = batch.at(r, c);
        Matrix one = mlp_forward(p, single);
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) {
            CHECK(one.at(0, c) == doctest::Approx(all.at(r, c)).epsilon(1e-12));
            sum += all.at(r, c);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mlp: forward matches an independently coded pass") {
    RngStream rng(17, 0);
    MlpParams p = mlp_init(8, 6, 4, 23, nullptr);
    for (int t = 0; t < 5; ++t) {
        std::vector<double> x(8);
        for (double& v : x) v = rng.next();
        Matrix row(1, 8);
        for (int i = 0; i < 8; ++i) row.at(0, i) = x[i];
        Matrix probs = mlp_forward(p, row);
        std::vector<double> ref = reference_mlp_row(p, x);
        for (int c = 0; c < 4; ++c)
            CHECK(std::abs(probs.at(0, c) - ref[c]) < 1e-12);
    }
}

TEST_CASE("mlp: analytic gradient matches finite differences") {
    RngStream rng(29, 0);
    MlpParams p = mlp_init(6, 5, 3, 31, nullptr);
    Matrix x = random_matrix(4, 6, rng, 0.5);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::abs(x[i]);
    std::vector<int> labels = {0, 2, 1, 2};
    MlpGrad g = mlp_grad(p, x, labels);
    auto loss = [&] { return mlp_mean_cross_entropy(p, x, labels); };
    check_gradient(p.W1, g.dW1, loss);
    check_gradient(p.b1, g.db1, loss);
    check_gradient(p.W2, g.dW2, loss);
    check_gradient(p.b2, g.db2, loss);
}

TEST_CASE("mlp: confident correct predictions have near-zero gradient") {
    MlpParams p;
    p.hidden_size = 2;
    p.W1 = Matrix(2, 2);
    p.b1 = Matrix(1, 2);
    p.W2 = Matrix::from_rows(2, 2, {40.0, -40.0, -40.0, 40.0});
    p.b2 = Matrix(1, 2);
    p.b1.at(0, 0) = 50.0;   // h ~ (1, 0) regardless of x
    p.b1.at(0, 1) = -50.0;
    Matrix x(3, 2, 0.0);
    std::vector<int> labels = {0, 0, 0};
    MlpGrad g = mlp_grad(p, x, labels);
    double norm = 0.0;
    for (const Matrix* m : {&g.dW1, &g.db1, &g.dW2, &g.db2})
        for (std::size_t i = 0; i < m->size(); ++i) norm += (*m)[i] * (*m)[i];
    CHECK(std::sqrt(norm) < 1e-8);
}

TEST_CASE("mlp: duplicated batch rows leave the mean gradient unchanged") {
    RngStream rng(37, 0);
    MlpParams p = mlp_init(4, 3, 3, 41, nullptr);
    Matrix x1 = random_matrix(2, 4, rng, 0.5);
    std::vector<int> l1 = {1, 2};
    Matrix x2(4, 4);
    std::vector<int> l2 = {1, 2, 1, 2};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) x2.at(r, c) = x1.at(r % 2, c);
    MlpGrad g1 = mlp_grad(p, x1, l1);
    MlpGrad g2 = mlp_grad(p, x2, l2);
    for (std::size_t i = 0; i < g1.dW1.size(); ++i)
        CHECK(g1.dW1[i] == doctest::Approx(g2.dW1[i]).epsilon(1e-12));
}

TEST_CASE("rbm: free energy closed forms and enumeration consistency") {
    const int V = 4, H = 3;
    RbmParams zero;
    zero.W = Matrix(V, H);
    zero.b_vis = Matrix(1, V);
    zero.b_hid = Matrix(1, H);
    zero.persistent_chains = Matrix(1, V);
    CHECK(rbm_free_energy(zero, {0, 0, 0, 0}) ==
          doctest::Approx(-H * std::log(2.0)).epsilon(1e-12));

    // F decreases when v aligns with a positive visible bias
    zero.b_vis.at(0, 1) = 0.7;
    CHECK(rbm_free_energy(zero, {0, 1, 0, 0}) < rbm_free_energy(zero, {0, 0, 0, 0}));

    CHECK_THROWS_AS((rbm_free_energy(zero, {0.5, 0, 0, 0})), std::invalid_argument);

    // sum_h exp(-E(v,h)) must equal exp(-F(v)) for every v
    RngStream rng(43, 0);
    RbmParams p;
    p.W = random_matrix(V, H, rng, 0.8);
    p.b_vis = random_matrix(1, V, rng, 0.5);
    p.b_hid = random_matrix(1, H, rng, 0.5);
    p.persistent_chains = Matrix(1, V);
    for (int vi = 0; vi < (1 << V); ++vi) {
        std::vector<double> v(V);
        for (int d = 0; d < V; ++d) v[d] = (vi >> d) & 1;
        double direct = 0.0;
        for (int hi = 0; hi < (1 << H); ++hi) {
            double energy = 0.0;
            for (int d = 0; d < V; ++d) energy -= p.b_vis.at(0, d) * v[d];
            for (int j = 0; j < H; ++j) {
                double hj = (hi >> j) & 1;
                energy -= p.b_hid.at(0, j) * hj;
                for (int d = 0; d < V; ++d) energy -= v[d] * p.W.at(d, j) * hj;
            }
            direct += std::exp(-energy);
        }
        CHECK(std::log(direct) == doctest::Approx(-rbm_free_energy(p, v)).epsilon(1e-10));
    }
}

TEST_CASE("rbm: pcd with chains equal to the data batch gives zero gradient") {
    RngStream rng(47, 0);
    const int V = 4, H = 3;
    RbmParams p;
    p.W = random_matrix(V, H, rng, 0.6);
    p.b_vis = random_matrix(1, V, rng, 0.3);
    p.b_hid = random_matrix(1, H, rng, 0.3);
    Matrix batch = Matrix::from_rows(3, V, {1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 0, 0});
    p.persistent_chains = batch;
    double worst = 0.0;
    for (int step = 0; step < 1000; ++step) {
        RbmGrad g = rbm_pcd_step(p, batch, 0, rng);  // gibbs_steps = 0: chains untouched
        for (std::size_t i = 0; i < g.dW.size(); ++i)
            worst = std::max(worst, std::abs(g.dW[i]));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("rbm: pcd gradient correlates with the exact likelihood gradient") {
    RngStream rng(53, 0);
    const int V = 4, H = 3;
    RbmParams p;
    p.W = random_matrix(V, H, rng, 0.8);
    p.b_vis = random_matrix(1, V, rng, 0.4);
    p.b_hid = random_matrix(1, H, rng, 0.4);
    p.persistent_chains = Matrix(8, V);
    for (std::size_t i = 0; i < p.persistent_chains.size(); ++i)
        p.persistent_chains[i] = rng.next() < 0.5 ? 1.0 : 0.0;
    Matrix data = Matrix::from_rows(4, V, {1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 1, 1, 1, 0, 1});

    // Exact NLL gradient by enumeration: E_model[v h] - E_data[v E[h|v]].
    std::vector<double> probs(1 << V);
    double z = 0.0;
    for (int vi = 0; vi < (1 << V); ++vi) {
        std::vector<double> v(V);
        for (int d = 0; d < V; ++d) v[d] = (vi >> d) & 1;
        probs[vi] = std::exp(-rbm_free_energy(p, v));
        z += probs[vi];
    }
    Matrix exact(V, H);
    for (int vi = 0; vi < (1 << V); ++vi) {
        std::vector<double> v(V);
        for (int d = 0; d < V; ++d) v[d] = (vi >> d) & 1;
        Matrix row(1, V);
        for (int d = 0; d < V; ++d) row.at(0, d) = v[d];
        Matrix h = rbm_hidden_probs(p, row);
        for (int d = 0; d < V; ++d)
            for (int j = 0; j < H; ++j)
                exact.at(d, j) += probs[vi] / z * v[d] * h.at(0, j);
    }
    Matrix hd = rbm_hidden_probs(p, data);
    for (int d = 0; d < V; ++d)
        for (int j = 0; j < H; ++j) {
            double e = 0.0;
            for (int r = 0; r < data.rows(); ++r) e += data.at(r, d) * hd.at(r, j);
            exact.at(d, j) -= e / data.rows();
        }

    Matrix avg(V, H);
    const int steps = 100;
    for (int s = 0; s < steps; ++s) {
        RbmGrad g = rbm_pcd_step(p, data, 15, rng);
        for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += g.dW[i] / steps;
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < avg.size(); ++i) {
        dot += avg[i] * exact[i];
        na += avg[i] * avg[i];
        nb += exact[i] * exact[i];
    }
    CHECK(dot / std::sqrt(na * nb) > 0.0);
}

TEST_CASE("rbm: gibbs stationary distribution matches the free energies") {
    RngStream rng(59, 0);
    const int V = 4, H = 3;
    RbmParams p;
    p.W = random_matrix(V, H, rng, 0.5);
    p.b_vis = random_matrix(1, V, rng, 0.3);
    p.b_hid = random_matrix(1, H, rng, 0.3);
    p.persistent_chains = Matrix(1, V);

    std::vector<double> exact(1 << V);
    double z = 0.0;
    for (int vi = 0; vi < (1 << V); ++vi) {
        std::vector<double> v(V);
        for (int d = 0; d < V; ++d) v[d] = (vi >> d) & 1;
        exact[vi] = std::exp(-rbm_free_energy(p, v));
        z += exact[vi];
    }
    for (double& e : exact) e /= z;

    Matrix v(1, V);
    std::vector<double> counts(1 << V, 0.0);
    const int sweeps = 100000;
    for (int s = 0; s < sweeps; ++s) {
        Matrix hp = rbm_hidden_probs(p, v);
        for (std::size_t i = 0; i < hp.size(); ++i) hp[i] = rng.next() < hp[i] ? 1.0 : 0.0;
        Matrix vp = rbm_visible_probs(p, hp);
        int state = 0;
        for (int d = 0; d < V; ++d) {
            v.at(0, d) = rng.next() < vp.at(0, d) ? 1.0 : 0.0;
            state |= static_cast<int>(v.at(0, d)) << d;
        }
        counts[state] += 1.0;
    }
    double tv = 0.0;
    for (int vi = 0; vi < (1 << V); ++vi) tv += std::abs(counts[vi] / sweeps - exact[vi]);
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("rbm: sampling bookkeeping") {
    const int V = 3, H = 2;
    RbmParams p;
    p.W = Matrix(V, H);
    p.b_vis = Matrix::from_rows(1, V, {0.3, -0.2, 0.9});
    p.b_hid = Matrix(1, H);
    p.persistent_chains = Matrix(1, V);
    RngStream rng(61, 0);

    auto empty = rbm_sample(p, {0, 0, 0}, 0, 100, rng);
    CHECK(empty.empty());

    auto records = rbm_sample(p, {1, 0, 1}, 350, 100, rng);
    REQUIRE(records.size() == 3);  // floor(350/100)
    for (const auto& rec : records)
        for (int d = 0; d < V; ++d)
            CHECK(rec[d] == doctest::Approx(sigmoid(p.b_vis.at(0, d))).epsilon(1e-12));
}

TEST_CASE("nade: zero parameters assign -D ln 2 everywhere") {
    NadeParams p = nade_init(8, 3, 1, nullptr);
    for (std::size_t i = 0; i < p.W.size(); ++i) p.W[i] = 0.0;
    for (std::size_t i = 0; i < p.V.size(); ++i) p.V[i] = 0.0;
    std::vector<double> x(8, 0.0);
    CHECK(nade_logprob(p, x) == doctest::Approx(-8 * std::log(2.0)).epsilon(1e-12));
    x.assign(8, 1.0);
    CHECK(nade_logprob(p, x) == doctest::Approx(-8 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("nade: probabilities over all inputs sum to one") {
    const int D = 10;
    for (std::uint64_t seed : {101ull, 102ull, 103ull}) {
        NadeParams p = nade_init(D, 6, seed, nullptr, seed == 103ull ? 77 : 0);
        double total = 0.0;
        std::vector<double> x(D);
        for (int xi = 0; xi < (1 << D); ++xi) {
            for (int d = 0; d < D; ++d) x[d] = (xi >> d) & 1;
            total += std::exp(nade_logprob(p, x));
        }
        CHECK(std::abs(total - 1.0) < 1e-9);
    }
}

TEST_CASE("nade: analytic gradient matches finite differences") {
    const int D = 7, H = 4;
    NadeParams p = nade_init(D, H, 211, nullptr, 5);
    std::vector<double> x = {1, 0, 0, 1, 1, 0, 1};
    NadeGrad g = nade_grad(p, x);
    auto loss = [&] { return -nade_logprob(p, x); };
    check_gradient(p.W, g.dW, loss);
    check_gradient(p.V, g.dV, loss);
    check_gradient(p.b_hid, g.db_hid, loss);
    check_gradient(p.b_vis, g.db_vis, loss);
}

TEST_CASE("nade: gradient at the zero-parameter point") {
    const int D = 5;
    NadeParams p = nade_init(D, 3, 1, nullptr);
    for (std::size_t i = 0; i < p.W.size(); ++i) p.W[i] = 0.0;
    for (std::size_t i = 0; i < p.V.size(); ++i) p.V[i] = 0.0;
    std::vector<double> zero_x(D, 0.0);
    NadeGrad g = nade_grad(p, zero_x);
    // P(x_d = 1) = 0.5 and x_d = 0, so d(-logprob)/db_vis_d = 0.5 - 0 = +0.5
    for (int d = 0; d < D; ++d) CHECK(g.db_vis.at(0, d) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evaluate: chance level, exact NLL, perfect classifier") {
    // random 10-class classifier sits at ~90% error
    DigitCorpusOptions opt;
    opt.examples = 2000;
    opt.seed = 31;
    Dataset data = make_digit_corpus(opt);
    MlpModel model(mlp_init(data.features(), 8, 10, 999, nullptr));
    Metric err = model.evaluate(data);
    CHECK(err.kind == MetricKind::MisclassificationPercent);
    double se = 3.0 * std::sqrt(0.9 * 0.1 / data.examples()) * 100.0;
    CHECK(std::abs(err.value - 90.0) < se + 1.0);

    // NADE at zero parameters scores exactly D ln 2 nats
    NadeParams p = nade_init(data.features(), 4, 3, nullptr);
    for (std::size_t i = 0; i < p.W.size(); ++i) p.W[i] = 0.0;
    for (std::size_t i = 0; i < p.V.size(); ++i) p.V[i] = 0.0;
    NadeModel nade(std::move(p));
    Dataset small = subsample(data, 50, 5);
    Metric nll = nade.evaluate(small);
    CHECK(nll.kind == MetricKind::NegLogLikelihoodNats);
    CHECK(nll.value == doctest::Approx(data.features() * std::log(2.0)).epsilon(1e-10));

    // a model evaluated against its own argmax labels scores 0%
    MlpModel self(mlp_init(data.features(), 8, 10, 1234, nullptr));
    Matrix probs = mlp_forward(self.raw(), small.inputs);
    Dataset relabeled = small;
    for (int r = 0; r < probs.rows(); ++r) {
        int best = 0;
        for (int c = 1; c < probs.cols(); ++c)
            if (probs.at(r, c) > probs.at(r, best)) best = c;
        relabeled.labels[r] = best;
    }
    CHECK(self.evaluate(relabeled).value == 0.0);
}
