#ifndef LOWRES_RBM_HPP
#define LOWRES_RBM_HPP

#include <vector>

#include "lowres/model.hpp"

namespace lowres {

// Binary restricted Boltzmann machine trained with persistent contrastive
// divergence: the negative-phase Gibbs chains live in the params and
// persist across updates.
struct RbmParams {
    Matrix W;      // visible x hidden
    Matrix b_vis;  // 1 x visible
    Matrix b_hid;  // 1 x hidden
    Matrix persistent_chains;  // chains x visible, binary
};

struct RbmGrad {
    Matrix dW, db_vis, db_hid;
};

// Chains start as binary-thresholded random training examples.
RbmParams rbm_init(int visible, int hidden, int chains, std::uint64_t seed,
                   const Grid* snap, const Dataset* chain_source = nullptr);

// F(v) = -b_vis.v - sum_j softplus(b_hid_j + (W^T v)_j); v must be binary.
double rbm_free_energy(const RbmParams& params, const std::vector<double>& v);

// Hidden activation probabilities for a batch of visible rows.
Matrix rbm_hidden_probs(const RbmParams& params, const Matrix& v);
// Visible activation probabilities given a batch of hidden rows.
Matrix rbm_visible_probs(const RbmParams& params, const Matrix& h);

// One PCD update: positive statistics from the data batch, negative
// statistics from the persistent chains after gibbs_steps full sweeps
// (gibbs_steps = 0 reads the chains as they stand). Advances the chains
// in place. Returned gradients point in the NLL-descent convention,
// i.e. theta <- theta - eta * d.
RbmGrad rbm_pcd_step(RbmParams& params, const Matrix& data_batch, int gibbs_steps,
                     RngStream& rng);

// Gibbs chain from v0; records the visible activation probabilities (not
// binarized) every record_every sweeps. floor(passes / record_every)
// records come back.
std::vector<std::vector<double>> rbm_sample(const RbmParams& params,
                                            const std::vector<double>& v0, int passes,
                                            int record_every, RngStream& rng);

// Mean-field reconstruction cross-entropy over the dataset; deterministic
// trend proxy for the intractable likelihood.
Metric rbm_evaluate(const RbmParams& params, const Dataset& data);

class RbmModel final : public Model {
public:
    RbmModel(RbmParams params, int gibbs_steps)
        : p_(std::move(params)), gibbs_steps_(gibbs_steps) {}
    std::string kind() const override { return "rbm"; }
    std::vector<ParamView> params() override;
    std::vector<Matrix> batch_gradient(const Dataset& data, const std::vector<int>& batch,
                                       RngStream& rng) override;
    Metric evaluate(const Dataset& data) const override;
    std::unique_ptr<Model> clone() const override { return std::make_unique<RbmModel>(*this); }

    RbmParams& raw() { return p_; }
    const RbmParams& raw() const { return p_; }
    int gibbs_steps() const { return gibbs_steps_; }

private:
    RbmParams p_;
    int gibbs_steps_;
};

}  // namespace lowres

#endif
