#ifndef LOWRES_DATASET_HPP
#define LOWRES_DATASET_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lowres/matrix.hpp"

namespace lowres {

// Examples-by-features inputs in [0,1], plus integer class labels for
// classification tasks (empty for density estimation). Immutable once built.
struct Dataset {
    Matrix inputs;
    std::vector<int> labels;  // empty when unlabeled
    int n_classes = 0;        // 0 when unlabeled
    std::string name;
    std::string split;

    // Original label values in class-index order, for datasets whose labels
    // were remapped to contiguous 0-based classes.
    std::vector<std::string> label_names;

    int examples() const { return inputs.rows(); }
    int features() const { return inputs.cols(); }
    bool labeled() const { return !labels.empty(); }
};

// value >= threshold -> 1 else 0, per input entry. Inputs must be in [0,1].
Dataset binarize(const Dataset& dataset, double threshold = 0.5);

// Deterministic shuffled subset of n examples. Labeled data is stratified:
// class proportions preserved within one example per class. Throws when n
// exceeds the dataset size.
Dataset subsample(const Dataset& dataset, int n, std::uint64_t seed);

// Deterministic shuffled split into (first_n, rest).
std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, int first_n,
                                          std::uint64_t seed);

}  // namespace lowres

#endif
