#ifndef LOWRES_RUN_CONFIG_HPP
#define LOWRES_RUN_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lowres/sweep.hpp"

namespace lowres {

enum class DataSource { Idx, Libsvm, Digits, Patterns };

// Parsed and schema-checked experiment description. The flat key=value
// sections of the file map 1:1 onto these fields; unknown sections or keys
// are rejected up front with the offending line number.
struct RunConfig {
    // [run]
    std::string model_kind;            // mlp | rbm | nade
    std::string sweep_mode;            // fixed_hidden | fixed_memory
    std::vector<Method> methods;
    std::vector<int> bits;
    std::vector<std::uint64_t> seeds;
    std::string output_dir;
    int workers = 1;

    // [data]
    DataSource source = DataSource::Digits;
    std::string data_dir;              // env LOWRES_DATA_DIR overrides
    std::string train_images, train_labels, test_images, test_labels;  // idx
    std::string train_path, test_path; // libsvm
    int n_features = 0;                // libsvm
    int train_examples = 1000, test_examples = 1000;  // generators
    double noise = 0.05;               // generators
    int max_shift = 3;                 // digits
    int features = 64, classes = 10, distinct_bits = 16;  // patterns
    std::uint64_t generator_seed = 11;
    bool do_binarize = true;
    double binarize_threshold = 0.5;
    int train_subsample = 0, test_subsample = 0;  // 0 = keep all
    std::uint64_t subsample_seed = 7;

    // [model]
    int hidden_size = 0;           // fixed_hidden
    std::int64_t total_bits = 0;   // fixed_memory
    bool quantize_biases = false;
    bool coarse_levels_pow2 = false;
    int kmeans_center_bits = 32;
    bool count_all_matrices = false;

    // [train]
    double learning_rate = 0.1;
    int epochs = 10;
    int batch_size = 100;
    int eval_every = 1;
    double val_fraction = 0.0;

    // [rbm]
    int gibbs_steps = 15;
    int sample_passes = 3000;
    int sample_record_every = 1000;
    int sample_chains = 4;

    std::string config_hash;  // FNV-1a of the raw config text, 16 hex digits
    std::string raw_text;
};

// Throws ConfigError with a line/field diagnostic on any schema violation.
RunConfig parse_run_config(const std::string& text, const std::string& origin = "config");

RunConfig read_run_config(const std::string& path);

}  // namespace lowres

#endif
