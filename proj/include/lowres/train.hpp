#ifndef LOWRES_TRAIN_HPP
#define LOWRES_TRAIN_HPP

#include <cstdint>
#include <vector>

#include "lowres/model.hpp"

namespace lowres {

struct TrainConfig {
    QuantPolicy policy;
    double learning_rate = 0.1;
    int epochs = 10;
    int batch_size = 100;
    std::uint64_t seed = 1;
    int eval_every = 1;           // epochs between learning-curve records
    bool quantize_biases = false; // default: only weight matrices live on the grid
};

struct CurvePoint {
    int epoch;
    double train_metric;
    double valid_metric;  // NaN when no validation set was given
};

struct LearningCurve {
    MetricKind metric_kind{};
    std::vector<CurvePoint> points;
};

// Batch gradient descent with every weight update routed through
// quantized_update, one fresh counter-based draw per weight per step.
// Deterministic given (config.seed, dataset): the same seed reproduces
// bit-identical final parameters. Divergence (non-finite parameters)
// throws NumericError; leaving the grid under a quantized policy is a
// logic error and also throws.
LearningCurve train(Model& model, const Dataset& train_data, const Dataset* valid_data,
                    const TrainConfig& config);

// True iff every entry of every weight matrix is a grid member.
bool weights_on_grid(Model& model, const Grid& grid);

// Snap all weight matrices onto the grid by nearest rounding (used when a
// float-trained model enters a quantized flow).
void snap_weights_to_grid(Model& model, const Grid& grid);

}  // namespace lowres

#endif
