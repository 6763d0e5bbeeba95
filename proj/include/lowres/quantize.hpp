#ifndef LOWRES_QUANTIZE_HPP
#define LOWRES_QUANTIZE_HPP

#include <cstdint>
#include <optional>

#include "lowres/rng.hpp"

namespace lowres {

// Discrete weight value set for i-bit weights: the multiples of `spacing`
// inside [-1, 1]. With spacing = 1 / (2^(i-1) - 1) the set is symmetric
// about zero, contains zero, has exactly 2^i - 1 members, and its extreme
// members are exactly -1 and +1.
struct Grid {
    int bits;
    double spacing;
    double lo = -1.0;
    double hi = 1.0;

    // Largest n with |point(n)| inside the range; points are n in
    // [-max_index, max_index].
    std::int64_t max_index() const { return (std::int64_t{1} << (bits - 1)) - 1; }
    std::int64_t point_count() const { return 2 * max_index() + 1; }

    // n-th grid value. The extreme indices map to exactly +-1 so that grid
    // membership of the clip boundary never depends on whether
    // max_index * spacing rounds to 1.0.
    double point(std::int64_t n) const;

    // True iff x is bit-identical to some point(n) with |n| <= max_index.
    bool contains(double x) const;
};

// bits >= 2; throws std::invalid_argument below that (a 2-bit grid, {-1,0,1},
// is the smallest one with a positive, a negative and a zero value).
Grid make_grid(int bits);

// Nearest grid value of a after clipping a into [-1, 1]; exact ties round
// away from zero.
double round_nearest(double a, const Grid& grid);

// Randomized rounding of a onto the grid: moves to the higher-|a| neighbour
// with probability equal to the fractional grid position, else to the lower
// one. u is the caller-supplied uniform draw in [0,1). Values already on the
// grid are returned unchanged for every u, and the expectation over u equals
// a. No clipping happens here; for |a| > 1 the result lies on the unbounded
// extension of the grid and the update step clips afterwards.
double randomized_round(double a, const Grid& grid, double u);

// Nearest value of p in {j / (levels-1) : j = 0..levels-1}; ties round up.
// Requires p in [0,1] and levels >= 2.
double quantize_probability(double p, std::int64_t levels);

// Randomized rounding whose acceptance probability is itself stored at low
// resolution: p is quantized to `levels` uniform values on [0,1] before the
// comparison with u. Nothing downstream sees the unquantized p.
double randomized_round_coarse(double a, const Grid& grid, std::int64_t levels,
                               double u);

enum class UpdateRule {
    FloatBaseline,       // plain gradient descent, no grid
    NearestRounding,     // deterministic nearest-grid rounding each update
    RandomizedRounding,  // stochastic rounding each update
    CoarseProbRounding,  // stochastic rounding with low-resolution p
};

// Which update rule is in force, plus the grid it rounds onto.
struct QuantPolicy {
    UpdateRule rule = UpdateRule::FloatBaseline;
    std::optional<Grid> grid;      // absent only for FloatBaseline
    std::int64_t prob_levels = 0;  // CoarseProbRounding only

    static QuantPolicy float_baseline();
    static QuantPolicy nearest(int bits);
    static QuantPolicy rr(int bits);
    // By default the probability resolution mirrors the weight grid
    // cardinality (2^bits - 1 levels); pass levels_pow2 = true for 2^bits.
    static QuantPolicy coarse_rr(int bits, bool levels_pow2 = false);

    bool quantized() const { return rule != UpdateRule::FloatBaseline; }
};

// One gradient-descent weight update: candidate = theta - eta * dtheta,
// rounded per the policy (a no-op for the float baseline), then clipped to
// [-1, 1] (round-then-clip order, every policy). For quantized policies the
// result is always a grid member inside the range. Non-finite inputs throw
// NumericError.
double quantized_update(double theta, double dtheta, double eta,
                        const QuantPolicy& policy, double u);

}  // namespace lowres

#endif
