#ifndef LOWRES_MLP_HPP
#define LOWRES_MLP_HPP

#include <vector>

#include "lowres/model.hpp"

namespace lowres {

// Single-hidden-layer classifier: sigmoid hidden units, softmax output,
// mean cross-entropy loss.
struct MlpParams {
    Matrix W1;  // input x hidden
    Matrix b1;  // 1 x hidden
    Matrix W2;  // hidden x classes
    Matrix b2;  // 1 x classes
    int hidden_size = 0;
};

struct MlpGrad {
    Matrix dW1, db1, dW2, db2;
};

MlpParams mlp_init(int inputs, int hidden, int classes, std::uint64_t seed,
                   const Grid* snap);

// Class probabilities, one row per example; rows sum to 1.
Matrix mlp_forward(const MlpParams& params, const Matrix& x);

// Gradient of mean cross-entropy over the batch.
MlpGrad mlp_grad(const MlpParams& params, const Matrix& x, const std::vector<int>& labels);

double mlp_mean_cross_entropy(const MlpParams& params, const Matrix& x,
                              const std::vector<int>& labels);

// Percent of examples whose argmax class disagrees with the label.
Metric mlp_evaluate(const MlpParams& params, const Dataset& data);

class MlpModel final : public Model {
public:
    MlpModel(MlpParams params) : p_(std::move(params)) {}
    std::string kind() const override { return "mlp"; }
    std::vector<ParamView> params() override;
    std::vector<Matrix> batch_gradient(const Dataset& data, const std::vector<int>& batch,
                                       RngStream& rng) override;
    Metric evaluate(const Dataset& data) const override;
    std::unique_ptr<Model> clone() const override { return std::make_unique<MlpModel>(*this); }

    MlpParams& raw() { return p_; }
    const MlpParams& raw() const { return p_; }

private:
    MlpParams p_;
};

}  // namespace lowres

#endif
