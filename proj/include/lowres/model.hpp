#ifndef LOWRES_MODEL_HPP
#define LOWRES_MODEL_HPP

#include <memory>
#include <string>
#include <vector>

#include "lowres/dataset.hpp"
#include "lowres/matrix.hpp"
#include "lowres/quantize.hpp"
#include "lowres/rng.hpp"

namespace lowres {

enum class MetricKind {
    MisclassificationPercent,
    NegLogLikelihoodNats,
    // Scalar trend proxy for RBMs, whose test likelihood is intractable.
    // Not a number the original experiments report.
    ReconstructionCrossEntropy,
};

struct Metric {
    MetricKind kind;
    double value;
};

std::string metric_kind_name(MetricKind kind);

// One named parameter matrix. Quantization policies apply to weight
// matrices; bias rows stay continuous unless explicitly opted in.
struct ParamView {
    std::string name;
    Matrix* value;
    bool weight_matrix;
};

// What the quantized training loop needs from a network: its parameters,
// a batch gradient aligned with them, and the scalar evaluation the
// experiments report.
class Model {
public:
    virtual ~Model() = default;
    virtual std::string kind() const = 0;
    virtual std::vector<ParamView> params() = 0;
    // Gradient of the model's training objective, one matrix per params()
    // entry. rng feeds models whose gradient estimate samples (RBM Gibbs
    // chains); deterministic models ignore it.
    virtual std::vector<Matrix> batch_gradient(const Dataset& data,
                                               const std::vector<int>& batch,
                                               RngStream& rng) = 0;
    virtual Metric evaluate(const Dataset& data) const = 0;
    virtual std::unique_ptr<Model> clone() const = 0;
};

// Uniform init on [-r, r] with r = min(1, 4*sqrt(6/(fan_in+fan_out))),
// snapped to the grid by nearest rounding when one is given.
Matrix init_weight_matrix(int rows, int cols, int fan_in, int fan_out,
                          RngStream& rng, const Grid* snap);

struct ModelSpec {
    std::string kind;  // "mlp" | "rbm" | "nade"
    int hidden_size = 0;
    int rbm_chains = 0;       // 0: set from the training batch size
    int rbm_gibbs_steps = 15;
    std::uint64_t ordering_seed = 0;  // nade: 0 keeps natural input order
};

std::unique_ptr<Model> make_model(const ModelSpec& spec, const Dataset& train_data,
                                  std::uint64_t seed, const Grid* snap);

}  // namespace lowres

#endif
