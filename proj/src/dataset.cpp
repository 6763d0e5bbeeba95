#include "lowres/dataset.hpp"

#include <algorithm>
#include <stdexcept>

#include "lowres/errors.hpp"
#include "lowres/rng.hpp"

namespace lowres {

Dataset binarize(const Dataset& dataset, double threshold) {
    Dataset out = dataset;
    for (std::size_t i = 0; i < out.inputs.size(); ++i)
        out.inputs[i] = out.inputs[i] >= threshold ? 1.0 : 0.0;
    return out;
}

namespace {

std::vector<int> shuffled_indices(int n, RngStream& rng) {
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(idx[i], idx[j]);
    }
    return idx;
}

}  // namespace

Dataset subsample(const Dataset& dataset, int n, std::uint64_t seed) {
    if (n > dataset.examples())
        throw DataError(DataErrorCode::BadArgument,
                        "subsample: requested " + std::to_string(n) + " of " +
                            std::to_string(dataset.examples()) + " examples");
    RngStream rng(seed, fnv1a64("subsample"));
    std::vector<int> picked;
    picked.reserve(n);

    if (!dataset.labeled()) {
        std::vector<int> idx = shuffled_indices(dataset.examples(), rng);
        picked.assign(idx.begin(), idx.begin() + n);
    } else {
        // Stratified: shuffle within each class, then take classes
        // round-robin so counts stay proportional within one example.
        std::vector<std::vector<int>> by_class(dataset.n_classes);
        for (int i = 0; i < dataset.examples(); ++i)
            by_class[dataset.labels[i]].push_back(i);
        std::vector<int> order = shuffled_indices(dataset.examples(), rng);
        std::vector<std::vector<int>> shuffled(dataset.n_classes);
        for (int i : order) shuffled[dataset.labels[i]].push_back(i);

        // Quota per class proportional to class frequency.
        std::vector<int> quota(dataset.n_classes, 0);
        int assigned = 0;
        std::vector<std::pair<double, int>> remainders;
        for (int c = 0; c < dataset.n_classes; ++c) {
            double exact = static_cast<double>(n) * shuffled[c].size() / dataset.examples();
            quota[c] = static_cast<int>(exact);
            assigned += quota[c];
            remainders.emplace_back(-(exact - quota[c]), c);
        }
        std::sort(remainders.begin(), remainders.end());
        for (int i = 0; assigned < n; ++i) {
            int c = remainders[i % remainders.size()].second;
            if (quota[c] < static_cast<int>(shuffled[c].size())) {
                ++quota[c];
                ++assigned;
            }
        }
        for (int c = 0; c < dataset.n_classes; ++c)
            for (int i = 0; i < quota[c]; ++i) picked.push_back(shuffled[c][i]);
        // Present classes in mixed order, not blocked by label.
        std::vector<int> mix = shuffled_indices(static_cast<int>(picked.size()), rng);
        std::vector<int> mixed(picked.size());
        for (std::size_t i = 0; i < picked.size(); ++i) mixed[i] = picked[mix[i]];
        picked = std::move(mixed);
    }

    Dataset out;
    out.name = dataset.name;
    out.split = dataset.split;
    out.n_classes = dataset.n_classes;
    out.label_names = dataset.label_names;
    out.inputs = Matrix(n, dataset.features());
    if (dataset.labeled()) out.labels.resize(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < dataset.features(); ++c)
            out.inputs.at(r, c) = dataset.inputs.at(picked[r], c);
        if (dataset.labeled()) out.labels[r] = dataset.labels[picked[r]];
    }
    return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& dataset, int first_n,
                                          std::uint64_t seed) {
    if (first_n < 0 || first_n > dataset.examples())
        throw DataError(DataErrorCode::BadArgument, "split_dataset: bad split size");
    RngStream rng(seed, fnv1a64("split"));
    std::vector<int> order = shuffled_indices(dataset.examples(), rng);

    auto take = [&](int begin, int count) {
        Dataset part;
        part.name = dataset.name;
        part.n_classes = dataset.n_classes;
        part.label_names = dataset.label_names;
        part.inputs = Matrix(count, dataset.features());
        if (dataset.labeled()) part.labels.resize(count);
        for (int r = 0; r < count; ++r) {
            int src = order[begin + r];
            for (int c = 0; c < dataset.features(); ++c)
                part.inputs.at(r, c) = dataset.inputs.at(src, c);
            if (dataset.labeled()) part.labels[r] = dataset.labels[src];
        }
        return part;
    };
    return {take(0, first_n), take(first_n, dataset.examples() - first_n)};
}

}  // namespace lowres
