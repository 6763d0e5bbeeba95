#ifndef LOWRES_RUNNER_HPP
#define LOWRES_RUNNER_HPP

#include <string>

#include "lowres/dataset.hpp"
#include "lowres/run_config.hpp"

namespace lowres {

struct LoadedData {
    Dataset train;
    Dataset valid;  // empty when val_fraction = 0
    Dataset test;
    int image_rows = 0;  // 0 when inputs have no image shape
    int image_cols = 0;
    bool has_valid = false;
};

// Resolves paths against the data directory (env LOWRES_DATA_DIR wins over
// the config value), loads/generates, binarizes, subsamples, splits.
// Missing files raise DataError whose message includes fetch instructions.
LoadedData load_data(const RunConfig& config);

// Executes the configured sweep and writes results.csv, curves/*.csv and,
// for RBM runs, samples/*.pgm and filters/*.pgm under output_dir.
// Everything except the wall_seconds column is reproducible byte-for-byte.
void run_experiment(const RunConfig& config);

}  // namespace lowres

#endif
