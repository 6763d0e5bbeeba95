#include "lowres/pgm.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "lowres/errors.hpp"

namespace lowres {

std::vector<std::uint8_t> encode_pgm(const Matrix& image) {
    std::string header = "P5\n" + std::to_string(image.cols()) + " " +
                         std::to_string(image.rows()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    bool clamped = false;
    for (int r = 0; r < image.rows(); ++r)
        for (int c = 0; c < image.cols(); ++c) {
            double v = image.at(r, c);
            if (v < 0.0 || v > 1.0) {
                clamped = true;
                v = std::min(1.0, std::max(0.0, v));
            }
            out.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
        }
    if (clamped) std::cerr << "write_pgm: values outside [0,1] clamped\n";
    return out;
}

void write_pgm(const Matrix& image, const std::string& path) {
    if (image.rows() < 1 || image.cols() < 1)
        throw std::invalid_argument("write_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataErrorCode::FileNotFound, "write_pgm: cannot write " + path);
    auto bytes = encode_pgm(image);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

Matrix tile_grid(const std::vector<Matrix>& tiles, int grid_cols, double separator_value) {
    if (tiles.empty()) throw std::invalid_argument("tile_grid: no tiles");
    int th = tiles[0].rows(), tw = tiles[0].cols();
    for (const Matrix& t : tiles)
        if (t.rows() != th || t.cols() != tw)
            throw std::invalid_argument("tile_grid: tiles differ in shape");
    int n = static_cast<int>(tiles.size());
    int cols = grid_cols > 0 ? grid_cols
                             : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    int rows = (n + cols - 1) / cols;

    Matrix out(rows * th + (rows - 1), cols * tw + (cols - 1), separator_value);
    for (int i = 0; i < n; ++i) {
        int gr = i / cols, gc = i % cols;
        int oy = gr * (th + 1), ox = gc * (tw + 1);
        for (int y = 0; y < th; ++y)
            for (int x = 0; x < tw; ++x) out.at(oy + y, ox + x) = tiles[i].at(y, x);
    }
    return out;
}

void write_receptive_fields(const Matrix& weights, int image_rows, int image_cols,
                            const std::string& path) {
    if (static_cast<std::size_t>(image_rows) * image_cols !=
        static_cast<std::size_t>(weights.rows()))
        throw std::invalid_argument("write_receptive_fields: column length " +
                                    std::to_string(weights.rows()) + " does not reshape to " +
                                    std::to_string(image_rows) + "x" + std::to_string(image_cols));
    std::vector<Matrix> tiles;
    tiles.reserve(weights.cols());
    for (int c = 0; c < weights.cols(); ++c) {
        double lo = weights.at(0, c), hi = weights.at(0, c);
        for (int r = 1; r < weights.rows(); ++r) {
            lo = std::min(lo, weights.at(r, c));
            hi = std::max(hi, weights.at(r, c));
        }
        Matrix tile(image_rows, image_cols);
        for (int r = 0; r < weights.rows(); ++r) {
            double v = hi > lo ? (weights.at(r, c) - lo) / (hi - lo) : 0.5;
            tile[static_cast<std::size_t>(r)] = v;
        }
        tiles.push_back(std::move(tile));
    }
    write_pgm(tile_grid(tiles), path);
}

}  // namespace lowres
