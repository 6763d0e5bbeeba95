#ifndef LOWRES_PGM_HPP
#define LOWRES_PGM_HPP

#include <string>
#include <vector>

#include "lowres/matrix.hpp"

namespace lowres {

// Binary 8-bit PGM (P5), linear scaling of [0,1] to 0..255. Out-of-range
// values clamp with a warning on stderr.
void write_pgm(const Matrix& image, const std::string& path);
std::vector<std::uint8_t> encode_pgm(const Matrix& image);

// Tiles laid out row-major into a grid with 1-pixel separators. All tiles
// must share one shape. grid_cols <= 0 picks a square-ish layout
// (ceil(sqrt(n)) columns). A single tile gets no separators.
Matrix tile_grid(const std::vector<Matrix>& tiles, int grid_cols = 0,
                 double separator_value = 0.0);

// One tile per weight-matrix column, reshaped to rows x cols and min-max
// normalized per column (constant columns map to 0.5), tiled square-ish.
void write_receptive_fields(const Matrix& weights, int image_rows, int image_cols,
                            const std::string& path);

}  // namespace lowres

#endif
