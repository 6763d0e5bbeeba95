#ifndef LOWRES_NADE_HPP
#define LOWRES_NADE_HPP

#include <vector>

#include "lowres/model.hpp"

namespace lowres {

// Autoregressive binary density model with exact log-likelihood: the joint
// factorizes into per-dimension logistic conditionals whose shared hidden
// state accumulates one weight column per visible dimension.
struct NadeParams {
    Matrix W;      // hidden x visible (input-to-hidden)
    Matrix V;      // visible x hidden (hidden-to-conditional)
    Matrix b_hid;  // 1 x hidden
    Matrix b_vis;  // 1 x visible
    std::vector<int> ordering;  // visiting order of the visible dimensions
};

struct NadeGrad {
    Matrix dW, dV, db_hid, db_vis;
};

// ordering_seed = 0 keeps the natural input order; otherwise a seeded
// permutation is drawn once and fixed for the run.
NadeParams nade_init(int visible, int hidden, std::uint64_t seed, const Grid* snap,
                     std::uint64_t ordering_seed = 0);

// log P(x) in nats; x binary.
double nade_logprob(const NadeParams& params, const std::vector<double>& x);

// Gradient of -log P(x).
NadeGrad nade_grad(const NadeParams& params, const std::vector<double>& x);

// Mean negative log-likelihood over the dataset, in nats.
Metric nade_evaluate(const NadeParams& params, const Dataset& data);

class NadeModel final : public Model {
public:
    explicit NadeModel(NadeParams params) : p_(std::move(params)) {}
    std::string kind() const override { return "nade"; }
    std::vector<ParamView> params() override;
    std::vector<Matrix> batch_gradient(const Dataset& data, const std::vector<int>& batch,
                                       RngStream& rng) override;
    Metric evaluate(const Dataset& data) const override;
    std::unique_ptr<Model> clone() const override { return std::make_unique<NadeModel>(*this); }

    NadeParams& raw() { return p_; }
    const NadeParams& raw() const { return p_; }

private:
    NadeParams p_;
};

}  // namespace lowres

#endif
