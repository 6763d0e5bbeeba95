#include "lowres/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "lowres/activations.hpp"
#include "lowres/errors.hpp"

namespace lowres {

MlpParams mlp_init(int inputs, int hidden, int classes, std::uint64_t seed,
                   const Grid* snap) {
    if (inputs < 1 || hidden < 1 || classes < 2)
        throw std::invalid_argument("mlp_init: bad architecture");
    MlpParams p;
    p.hidden_size = hidden;
    RngStream r1(seed, fnv1a64("mlp.W1.init"));
    RngStream r2(seed, fnv1a64("mlp.W2.init"));
    p.W1 = init_weight_matrix(inputs, hidden, inputs, hidden, r1, snap);
    p.W2 = init_weight_matrix(hidden, classes, hidden, classes, r2, snap);
    p.b1 = Matrix(1, hidden);
    p.b2 = Matrix(1, classes);
    return p;
}

Matrix mlp_forward(const MlpParams& params, const Matrix& x) {
    if (x.cols() != params.W1.rows())
        throw std::invalid_argument("mlp_forward: input width mismatch");
    Matrix h = sigmoid(add_row_broadcast(matmul(x, params.W1), params.b1));
    return softmax_rows(add_row_broadcast(matmul(h, params.W2), params.b2));
}

MlpGrad mlp_grad(const MlpParams& params, const Matrix& x, const std::vector<int>& labels) {
    if (static_cast<int>(labels.size()) != x.rows())
        throw std::invalid_argument("mlp_grad: label count mismatch");
    int n = x.rows();
    Matrix h = sigmoid(add_row_broadcast(matmul(x, params.W1), params.b1));
    Matrix probs = softmax_rows(add_row_broadcast(matmul(h, params.W2), params.b2));

    // delta2 = (probs - onehot) / n
    Matrix delta2 = probs;
    for (int r = 0; r < n; ++r) {
        if (labels[r] < 0 || labels[r] >= probs.cols())
            throw std::invalid_argument("mlp_grad: label out of range");
        delta2.at(r, labels[r]) -= 1.0;
    }
    delta2 = scale(delta2, 1.0 / n);

    MlpGrad g;
    g.dW2 = matmul(transpose(h), delta2);
    g.db2 = column_sums(delta2);
    Matrix delta1 = matmul(delta2, transpose(params.W2));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < h.cols(); ++c)
            delta1.at(r, c) *= h.at(r, c) * (1.0 - h.at(r, c));
    g.dW1 = matmul(transpose(x), delta1);
    g.db1 = column_sums(delta1);
    return g;
}

double mlp_mean_cross_entropy(const MlpParams& params, const Matrix& x,
                              const std::vector<int>& labels) {
    Matrix probs = mlp_forward(params, x);
    double loss = 0.0;
    for (int r = 0; r < x.rows(); ++r)
        loss -= std::log(std::max(probs.at(r, labels[r]), 1e-300));
    return loss / x.rows();
}

Metric mlp_evaluate(const MlpParams& params, const Dataset& data) {
    if (data.examples() == 0) throw std::invalid_argument("mlp_evaluate: empty dataset");
    if (!data.labeled()) throw std::invalid_argument("mlp_evaluate: unlabeled dataset");
    Matrix probs = mlp_forward(params, data.inputs);
    int wrong = 0;
    for (int r = 0; r < probs.rows(); ++r) {
        int best = 0;
        for (int c = 1; c < probs.cols(); ++c)
            if (probs.at(r, c) > probs.at(r, best)) best = c;
        if (best != data.labels[r]) ++wrong;
    }
    return Metric{MetricKind::MisclassificationPercent,
                  100.0 * wrong / data.examples()};
}

std::vector<ParamView> MlpModel::params() {
    return {{"mlp.W1", &p_.W1, true},
            {"mlp.b1", &p_.b1, false},
            {"mlp.W2", &p_.W2, true},
            {"mlp.b2", &p_.b2, false}};
}

std::vector<Matrix> MlpModel::batch_gradient(const Dataset& data,
                                             const std::vector<int>& batch, RngStream&) {
    Matrix x(static_cast<int>(batch.size()), data.features());
    std::vector<int> labels(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (int c = 0; c < data.features(); ++c)
            x.at(static_cast<int>(i), c) = data.inputs.at(batch[i], c);
        labels[i] = data.labels[batch[i]];
    }
    MlpGrad g = mlp_grad(p_, x, labels);
    return {std::move(g.dW1), std::move(g.db1), std::move(g.dW2), std::move(g.db2)};
}

Metric MlpModel::evaluate(const Dataset& data) const { return mlp_evaluate(p_, data); }

}  // namespace lowres
