#include "lowres/model.hpp"

#include <cmath>
#include <stdexcept>

#include "lowres/mlp.hpp"
#include "lowres/nade.hpp"
#include "lowres/rbm.hpp"

namespace lowres {

std::string metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::MisclassificationPercent: return "misclassification_percent";
        case MetricKind::NegLogLikelihoodNats: return "neg_log_likelihood_nats";
        case MetricKind::ReconstructionCrossEntropy: return "reconstruction_cross_entropy";
    }
    return "unknown";
}

Matrix init_weight_matrix(int rows, int cols, int fan_in, int fan_out,
                          RngStream& rng, const Grid* snap) {
    double r = std::min(1.0, 4.0 * std::sqrt(6.0 / (fan_in + fan_out)));
    Matrix w(rows, cols);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = (2.0 * rng.next() - 1.0) * r;
    if (snap)
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = round_nearest(w[i], *snap);
    return w;
}

std::unique_ptr<Model> make_model(const ModelSpec& spec, const Dataset& train_data,
                                  std::uint64_t seed, const Grid* snap) {
    if (spec.hidden_size < 1) throw std::invalid_argument("make_model: hidden_size < 1");
    if (spec.kind == "mlp") {
        if (!train_data.labeled())
            throw std::invalid_argument("make_model: mlp needs a labeled dataset");
        return std::make_unique<MlpModel>(mlp_init(train_data.features(), spec.hidden_size,
                                                   train_data.n_classes, seed, snap));
    }
    if (spec.kind == "rbm") {
        int chains = spec.rbm_chains > 0 ? spec.rbm_chains : 100;
        return std::make_unique<RbmModel>(
            rbm_init(train_data.features(), spec.hidden_size, chains, seed, snap, &train_data),
            spec.rbm_gibbs_steps);
    }
    if (spec.kind == "nade") {
        return std::make_unique<NadeModel>(
            nade_init(train_data.features(), spec.hidden_size, seed, snap, spec.ordering_seed));
    }
    throw std::invalid_argument("make_model: unknown model kind '" + spec.kind + "'");
}

}  // namespace lowres
