#ifndef LOWRES_SWEEP_HPP
#define LOWRES_SWEEP_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lowres/kmeans.hpp"
#include "lowres/train.hpp"

namespace lowres {

enum class Method { Baseline, Nearest, RR, CoarseP, KmeansOffline };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// Fixed weight-matrix memory: trading per-weight resolution against hidden
// units. Only the input-to-hidden matrix counts by default.
struct MemoryBudget {
    std::int64_t total_bits;
    int bits_per_weight;

    // Largest hidden size whose counted weights fit the budget; throws
    // ConfigError when not even one unit fits.
    int derive_hidden(int input_size) const;
};

struct SweepOptions {
    ModelSpec model;              // model.hidden_size ignored in fixed-memory mode
    TrainConfig base;             // policy and seed filled in per cell
    std::vector<std::uint64_t> seeds;
    int kmeans_center_bits = 32;
    bool coarse_levels_pow2 = false;  // 2^i probability levels instead of 2^i - 1
    bool count_all_matrices = false;  // memory accounting: all weight matrices
    int workers = 1;                  // sweep cells run on this many threads
};

struct SweepCellResult {
    std::string model_kind;
    Method method;
    int bits;         // 32 for the float baseline
    int hidden_size;
    std::uint64_t seed;
    Metric train_metric{}, valid_metric{}, test_metric{};
    std::int64_t memory_bits = 0;  // counted weights x bits, plus codebook overhead
    double wall_seconds = 0.0;
    LearningCurve curve;
    std::shared_ptr<Model> trained;  // final parameters, for downstream artifacts
};

// One row per (bits, method, seed) cell, ordered by (method, bits, seed).
// The float baseline ignores the bits axis and yields one row per seed.
std::vector<SweepCellResult> sweep_fixed_hidden(const std::vector<int>& bits_list,
                                                const std::vector<Method>& methods,
                                                const SweepOptions& options,
                                                const Dataset& train_data,
                                                const Dataset* valid_data,
                                                const Dataset& test_data);

// Same sweep for one method under a fixed memory budget: each bits value
// derives its own hidden size.
std::vector<SweepCellResult> sweep_fixed_memory(std::int64_t total_bits,
                                                const std::vector<int>& bits_list,
                                                Method method, const SweepOptions& options,
                                                const Dataset& train_data,
                                                const Dataset* valid_data,
                                                const Dataset& test_data);

// Offline compression of a float-trained model: every weight matrix is
// clustered to k = 2^bits - 1 centers and replaced by its codebook
// reconstruction. Reports one codebook per weight matrix.
struct CompressionReport {
    std::vector<std::pair<std::string, Codebook>> codebooks;
    std::int64_t codebook_bits = 0;
};

CompressionReport compress_trained(Model& model, int bits, int center_bits,
                                   std::uint64_t seed);

// Counted weight entries for the memory column (input-to-hidden only unless
// count_all_matrices).
std::int64_t counted_weights(Model& model, bool count_all_matrices);

}  // namespace lowres

#endif
