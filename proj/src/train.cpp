#include "lowres/train.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "lowres/errors.hpp"

namespace lowres {

namespace {

// Stream id for the per-weight draws of one (parameter, epoch, batch) cell.
// Keyed by content, not iteration order, so evaluation parallelism can never
// perturb the training draw sequence.
std::uint64_t update_stream_id(const std::string& param_name, int epoch, int batch) {
    std::uint64_t h = fnv1a64(param_name.c_str());
    h = RngStream::mix64(h ^ static_cast<std::uint64_t>(epoch));
    return RngStream::mix64(h ^ (static_cast<std::uint64_t>(batch) << 20));
}

std::vector<int> epoch_order(int n, std::uint64_t seed, int epoch) {
    RngStream rng(seed, RngStream::mix64(fnv1a64("epoch-order") ^ static_cast<std::uint64_t>(epoch)));
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

}  // namespace

bool weights_on_grid(Model& model, const Grid& grid) {
    for (const ParamView& p : model.params()) {
        if (!p.weight_matrix) continue;
        for (std::size_t i = 0; i < p.value->size(); ++i)
            if (!grid.contains((*p.value)[i])) return false;
    }
    return true;
}

void snap_weights_to_grid(Model& model, const Grid& grid) {
    for (const ParamView& p : model.params()) {
        if (!p.weight_matrix) continue;
        for (std::size_t i = 0; i < p.value->size(); ++i)
            (*p.value)[i] = round_nearest((*p.value)[i], grid);
    }
}

LearningCurve train(Model& model, const Dataset& train_data, const Dataset* valid_data,
                    const TrainConfig& config) {
    if (config.epochs < 1) throw std::invalid_argument("train: epochs < 1");
    if (config.batch_size < 1) throw std::invalid_argument("train: batch_size < 1");
    if (config.learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate <= 0");
    if (train_data.examples() == 0) throw std::invalid_argument("train: empty dataset");

    const QuantPolicy& policy = config.policy;
    if (policy.quantized() && !weights_on_grid(model, *policy.grid))
        throw std::invalid_argument("train: weights not on the policy grid at entry");

    const QuantPolicy baseline = QuantPolicy::float_baseline();
    LearningCurve curve;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::vector<int> order = epoch_order(train_data.examples(), config.seed, epoch);
        int n_batches = (train_data.examples() + config.batch_size - 1) / config.batch_size;
        for (int b = 0; b < n_batches; ++b) {
            auto begin = order.begin() + static_cast<std::ptrdiff_t>(b) * config.batch_size;
            auto end = (b + 1) * config.batch_size <= train_data.examples()
                           ? begin + config.batch_size
                           : order.end();
            std::vector<int> batch(begin, end);

            RngStream model_rng(config.seed, update_stream_id("model-sampling", epoch, b));
            std::vector<Matrix> grads = model.batch_gradient(train_data, batch, model_rng);

            std::vector<ParamView> params = model.params();
            if (grads.size() != params.size())
                throw std::logic_error("train: gradient/parameter count mismatch");
            for (std::size_t i = 0; i < params.size(); ++i) {
                Matrix& value = *params[i].value;
                const Matrix& grad = grads[i];
                if (!value.same_shape(grad))
                    throw std::logic_error("train: gradient shape mismatch for " + params[i].name);
                bool quantize_this =
                    policy.quantized() && (params[i].weight_matrix || config.quantize_biases);
                if (quantize_this) {
                    RngStream draws(config.seed, update_stream_id(params[i].name, epoch, b));
                    for (std::size_t j = 0; j < value.size(); ++j)
                        value[j] = quantized_update(value[j], grad[j], config.learning_rate,
                                                    policy, draws.at(j));
                } else if (params[i].weight_matrix) {
                    // Float path for weights still goes through the update op
                    // (clip to the allowed range), with an unused draw.
                    for (std::size_t j = 0; j < value.size(); ++j)
                        value[j] = quantized_update(value[j], grad[j], config.learning_rate,
                                                    baseline, 0.0);
                } else {
                    for (std::size_t j = 0; j < value.size(); ++j) {
                        value[j] -= config.learning_rate * grad[j];
                        if (!std::isfinite(value[j]))
                            throw NumericError("train: non-finite bias in " + params[i].name +
                                               " at epoch " + std::to_string(epoch));
                    }
                }
            }
        }

        if (policy.quantized() && !weights_on_grid(model, *policy.grid))
            throw NumericError("train: weights left the grid at epoch " + std::to_string(epoch));
        for (const ParamView& p : model.params())
            if (!all_finite(*p.value))
                throw NumericError("train: diverged (non-finite " + p.name + ") at epoch " +
                                   std::to_string(epoch));

        if (epoch % config.eval_every == 0 || epoch == config.epochs) {
            Metric train_metric = model.evaluate(train_data);
            double valid = std::numeric_limits<double>::quiet_NaN();
            if (valid_data) valid = model.evaluate(*valid_data).value;
            curve.metric_kind = train_metric.kind;
            curve.points.push_back({epoch, train_metric.value, valid});
        }
    }
    return curve;
}

}  // namespace lowres
