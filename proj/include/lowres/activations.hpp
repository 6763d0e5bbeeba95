#ifndef LOWRES_ACTIVATIONS_HPP
#define LOWRES_ACTIVATIONS_HPP

#include <cmath>
#include <vector>

#include "lowres/matrix.hpp"

namespace lowres {

// Numerically stable logistic; exp is only ever taken of a non-positive
// argument so there is no overflow for any finite x.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    double e = std::exp(x);
    return e / (1.0 + e);
}

// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
    if (x > 0.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

inline Matrix sigmoid(const Matrix& a) {
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = sigmoid(out[i]);
    return out;
}

// Max-subtracted softmax over one row.
std::vector<double> softmax_row(const std::vector<double>& x);

// Row-wise softmax of a matrix.
Matrix softmax_rows(const Matrix& a);

}  // namespace lowres

#endif
