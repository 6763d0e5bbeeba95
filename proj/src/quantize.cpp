#include "lowres/quantize.hpp"

#include <cmath>
#include <stdexcept>

#include "lowres/errors.hpp"

namespace lowres {

namespace {

// |a| / spacing carries one or two ulps of division noise when a is a stored
// grid value; within this distance of an integer we treat the position as
// exactly on-grid so that on-grid values are fixed points of every rounding
// mode. The implied probability perturbation (< 1e-9) is far below anything
// observable.
constexpr double kGridSnapTol = 1e-9;

double fractional_position(double a, const Grid& grid, std::int64_t* lower_index) {
    double m = std::abs(a) / grid.spacing;
    double nearest = std::round(m);
    if (std::abs(m - nearest) < kGridSnapTol) m = nearest;
    double lower = std::floor(m);
    *lower_index = static_cast<std::int64_t>(lower);
    return m - lower;
}

}  // namespace

double Grid::point(std::int64_t n) const {
    if (n == max_index()) return hi;
    if (n == -max_index()) return lo;
    return static_cast<double>(n) * spacing;
}

bool Grid::contains(double x) const {
    if (!std::isfinite(x)) return false;
    std::int64_t n = std::llround(x / spacing);
    if (std::llabs(n) > max_index()) return false;
    return x == point(n);
}

Grid make_grid(int bits) {
    if (bits < 2) throw std::invalid_argument("make_grid: resolution below 2 bits");
    if (bits > 62) throw std::invalid_argument("make_grid: resolution above 62 bits");
    Grid g;
    g.bits = bits;
    g.spacing = 1.0 / static_cast<double>((std::int64_t{1} << (bits - 1)) - 1);
    return g;
}

double round_nearest(double a, const Grid& grid) {
    if (!std::isfinite(a)) throw NumericError("round_nearest: non-finite input");
    double clipped = std::min(grid.hi, std::max(grid.lo, a));
    double s = clipped < 0.0 ? -1.0 : 1.0;
    // round-half-up on the magnitude = round half away from zero overall
    auto n = static_cast<std::int64_t>(std::floor(std::abs(clipped) / grid.spacing + 0.5));
    return s * grid.point(n);
}

double randomized_round(double a, const Grid& grid, double u) {
    if (!std::isfinite(a)) throw NumericError("randomized_round: non-finite input");
    double s = a < 0.0 ? -1.0 : 1.0;
    std::int64_t lower = 0;
    double p = fractional_position(a, grid, &lower);
    std::int64_t n = (p > u) ? lower + 1 : lower;
    return s * grid.point(n);
}

double quantize_probability(double p, std::int64_t levels) {
    if (!(p >= 0.0 && p <= 1.0))
        throw NumericError("quantize_probability: p outside [0,1]");
    if (levels < 2) throw std::invalid_argument("quantize_probability: levels < 2");
    auto denom = static_cast<double>(levels - 1);
    auto j = std::floor(p * denom + 0.5);  // ties up
    return j / denom;
}

double randomized_round_coarse(double a, const Grid& grid, std::int64_t levels,
                               double u) {
    if (!std::isfinite(a))
        throw NumericError("randomized_round_coarse: non-finite input");
    double s = a < 0.0 ? -1.0 : 1.0;
    std::int64_t lower = 0;
    double p = quantize_probability(fractional_position(a, grid, &lower), levels);
    std::int64_t n = (p > u) ? lower + 1 : lower;
    return s * grid.point(n);
}

QuantPolicy QuantPolicy::float_baseline() { return QuantPolicy{}; }

QuantPolicy QuantPolicy::nearest(int bits) {
    return QuantPolicy{UpdateRule::NearestRounding, make_grid(bits), 0};
}

QuantPolicy QuantPolicy::rr(int bits) {
    return QuantPolicy{UpdateRule::RandomizedRounding, make_grid(bits), 0};
}

QuantPolicy QuantPolicy::coarse_rr(int bits, bool levels_pow2) {
    std::int64_t levels = (std::int64_t{1} << bits) - (levels_pow2 ? 0 : 1);
    return QuantPolicy{UpdateRule::CoarseProbRounding, make_grid(bits), levels};
}

double quantized_update(double theta, double dtheta, double eta,
                        const QuantPolicy& policy, double u) {
    if (!std::isfinite(dtheta)) throw NumericError("quantized_update: non-finite gradient");
    if (!std::isfinite(theta)) throw NumericError("quantized_update: non-finite weight");
    double c = theta - eta * dtheta;
    if (!std::isfinite(c)) throw NumericError("quantized_update: update candidate overflowed");
    switch (policy.rule) {
        case UpdateRule::FloatBaseline:
            break;
        case UpdateRule::NearestRounding:
            c = round_nearest(c, *policy.grid);
            break;
        case UpdateRule::RandomizedRounding:
            c = randomized_round(c, *policy.grid, u);
            break;
        case UpdateRule::CoarseProbRounding:
            c = randomized_round_coarse(c, *policy.grid, policy.prob_levels, u);
            break;
    }
    return std::min(1.0, std::max(-1.0, c));
}

}  // namespace lowres
