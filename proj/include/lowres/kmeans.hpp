#ifndef LOWRES_KMEANS_HPP
#define LOWRES_KMEANS_HPP

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace lowres {

// Product of offline weight compression: k cluster centers, strictly
// increasing, each stored at center_bits precision. Costs
// k * center_bits extra storage next to the index-coded weight matrix.
struct Codebook {
    std::vector<double> centers;
    int center_bits = 0;

    int k() const { return static_cast<int>(centers.size()); }
};

struct KmeansResult {
    Codebook codebook;
    std::vector<int> assignments;  // per input value, index into centers
    bool k_shrunk = false;         // requested k exceeded distinct value count
    double cost = 0.0;             // within-cluster sum of squares at the fixpoint
};

// 1-D Lloyd clustering of weight values. Seeding is farthest-point on the
// sorted values with the first center drawn from the given seed; iteration
// runs to the assignment fixpoint or 300 rounds. Cluster means are then
// rounded to a uniform 2^center_bits-level grid over [-1, 1] and duplicate
// centers merged, so the effective k can shrink. Throws on empty input,
// k < 1, or center_bits < 1.
KmeansResult kmeans_compress(std::span<const double> weights, int k,
                             int center_bits, std::uint64_t seed);

// Extra storage the codebook needs, in bits.
std::int64_t codebook_memory_bits(const Codebook& codebook);

// Every weight replaced by its cluster's center value.
std::vector<double> apply_codebook(const Codebook& codebook,
                                   std::span<const int> assignments);

}  // namespace lowres

#endif
