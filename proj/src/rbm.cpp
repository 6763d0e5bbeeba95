#include "lowres/rbm.hpp"

#include <cmath>
#include <stdexcept>

#include "lowres/activations.hpp"
#include "lowres/errors.hpp"

namespace lowres {

namespace {

Matrix bernoulli_sample(const Matrix& probs, RngStream& rng) {
    Matrix out = probs;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = rng.next() < out[i] ? 1.0 : 0.0;
    return out;
}

void require_binary(const std::vector<double>& v, const char* who) {
    for (double x : v)
        if (x != 0.0 && x != 1.0)
            throw std::invalid_argument(std::string(who) + ": non-binary visible vector");
}

}  // namespace

RbmParams rbm_init(int visible, int hidden, int chains, std::uint64_t seed,
                   const Grid* snap, const Dataset* chain_source) {
    if (visible < 1 || hidden < 1 || chains < 1)
        throw std::invalid_argument("rbm_init: bad architecture");
    RbmParams p;
    RngStream rw(seed, fnv1a64("rbm.W.init"));
    p.W = init_weight_matrix(visible, hidden, visible, hidden, rw, snap);
    p.b_vis = Matrix(1, visible);
    p.b_hid = Matrix(1, hidden);
    p.persistent_chains = Matrix(chains, visible);
    RngStream rc(seed, fnv1a64("rbm.chains.init"));
    if (chain_source && chain_source->examples() > 0) {
        for (int r = 0; r < chains; ++r) {
            auto pick = static_cast<int>(rc.next_below(chain_source->examples()));
            for (int c = 0; c < visible; ++c)
                p.persistent_chains.at(r, c) =
                    chain_source->inputs.at(pick, c) >= 0.5 ? 1.0 : 0.0;
        }
    } else {
        for (std::size_t i = 0; i < p.persistent_chains.size(); ++i)
            p.persistent_chains[i] = rc.next() < 0.5 ? 1.0 : 0.0;
    }
    return p;
}

double rbm_free_energy(const RbmParams& params, const std::vector<double>& v) {
    if (static_cast<int>(v.size()) != params.W.rows())
        throw std::invalid_argument("rbm_free_energy: dimension mismatch");
    require_binary(v, "rbm_free_energy");
    double f = 0.0;
    for (int d = 0; d < params.W.rows(); ++d) f -= params.b_vis.at(0, d) * v[d];
    for (int j = 0; j < params.W.cols(); ++j) {
        double act = params.b_hid.at(0, j);
        for (int d = 0; d < params.W.rows(); ++d) act += params.W.at(d, j) * v[d];
        f -= softplus(act);
    }
    return f;
}

Matrix rbm_hidden_probs(const RbmParams& params, const Matrix& v) {
    return sigmoid(add_row_broadcast(matmul(v, params.W), params.b_hid));
}

Matrix rbm_visible_probs(const RbmParams& params, const Matrix& h) {
    return sigmoid(add_row_broadcast(matmul(h, transpose(params.W)), params.b_vis));
}

RbmGrad rbm_pcd_step(RbmParams& params, const Matrix& data_batch, int gibbs_steps,
                     RngStream& rng) {
    int n = data_batch.rows();
    if (n == 0) throw std::invalid_argument("rbm_pcd_step: empty batch");
    Matrix pos_h = rbm_hidden_probs(params, data_batch);

    for (int step = 0; step < gibbs_steps; ++step) {
        Matrix h_sample = bernoulli_sample(rbm_hidden_probs(params, params.persistent_chains), rng);
        Matrix v_probs = rbm_visible_probs(params, h_sample);
        params.persistent_chains = bernoulli_sample(v_probs, rng);
    }
    Matrix neg_h = rbm_hidden_probs(params, params.persistent_chains);
    int m = params.persistent_chains.rows();

    RbmGrad g;
    g.dW = subtract(scale(matmul(transpose(params.persistent_chains), neg_h), 1.0 / m),
                    scale(matmul(transpose(data_batch), pos_h), 1.0 / n));
    g.db_vis = subtract(column_means(params.persistent_chains), column_means(data_batch));
    g.db_hid = subtract(column_means(neg_h), column_means(pos_h));
    return g;
}

std::vector<std::vector<double>> rbm_sample(const RbmParams& params,
                                            const std::vector<double>& v0, int passes,
                                            int record_every, RngStream& rng) {
    if (static_cast<int>(v0.size()) != params.W.rows())
        throw std::invalid_argument("rbm_sample: dimension mismatch");
    if (record_every < 1) throw std::invalid_argument("rbm_sample: record_every < 1");
    Matrix v(1, params.W.rows());
    for (int d = 0; d < v.cols(); ++d) v.at(0, d) = v0[d];

    std::vector<std::vector<double>> records;
    for (int pass = 1; pass <= passes; ++pass) {
        Matrix h_sample = bernoulli_sample(rbm_hidden_probs(params, v), rng);
        Matrix v_probs = rbm_visible_probs(params, h_sample);
        v = bernoulli_sample(v_probs, rng);
        if (pass % record_every == 0)
            records.emplace_back(v_probs.data(), v_probs.data() + v_probs.size());
    }
    return records;
}

Metric rbm_evaluate(const RbmParams& params, const Dataset& data) {
    if (data.examples() == 0) throw std::invalid_argument("rbm_evaluate: empty dataset");
    Matrix h = rbm_hidden_probs(params, data.inputs);
    // CE against the reconstruction logits: softplus(rho) - v * rho per pixel.
    Matrix logits = add_row_broadcast(matmul(h, transpose(params.W)), params.b_vis);
    double total = 0.0;
    for (int r = 0; r < logits.rows(); ++r)
        for (int c = 0; c < logits.cols(); ++c)
            total += softplus(logits.at(r, c)) - data.inputs.at(r, c) * logits.at(r, c);
    return Metric{MetricKind::ReconstructionCrossEntropy, total / data.examples()};
}

std::vector<ParamView> RbmModel::params() {
    return {{"rbm.W", &p_.W, true},
            {"rbm.b_vis", &p_.b_vis, false},
            {"rbm.b_hid", &p_.b_hid, false}};
}

std::vector<Matrix> RbmModel::batch_gradient(const Dataset& data,
                                             const std::vector<int>& batch, RngStream& rng) {
    Matrix x(static_cast<int>(batch.size()), data.features());
    for (std::size_t i = 0; i < batch.size(); ++i)
        for (int c = 0; c < data.features(); ++c)
            x.at(static_cast<int>(i), c) = data.inputs.at(batch[i], c);
    RbmGrad g = rbm_pcd_step(p_, x, gibbs_steps_, rng);
    return {std::move(g.dW), std::move(g.db_vis), std::move(g.db_hid)};
}

Metric RbmModel::evaluate(const Dataset& data) const { return rbm_evaluate(p_, data); }

}  // namespace lowres
