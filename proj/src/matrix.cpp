#include "lowres/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

namespace lowres {

namespace {

using EigenRowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMajor>;
using Map = Eigen::Map<EigenRowMajor>;

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

}  // namespace

Matrix::Matrix(int rows, int cols, double fill)
    : rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
}

Matrix Matrix::from_rows(int rows, int cols, std::initializer_list<double> values) {
    Matrix m(rows, cols);
    if (values.size() != m.size())
        throw std::invalid_argument("Matrix::from_rows: value count mismatch");
    std::size_t i = 0;
    for (double v : values) m.data_[i++] = v;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions disagree");
    Matrix out(a.rows(), b.cols());
    if (out.size() == 0) return out;
    ConstMap ma(a.data(), a.rows(), a.cols());
    ConstMap mb(b.data(), b.rows(), b.cols());
    Map mo(out.data(), out.rows(), out.cols());
    mo.noalias() = ma * mb;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out.at(c, r) = a.at(r, c);
    return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "subtract");
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard");
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
    return out;
}

Matrix scale(const Matrix& a, double factor) {
    Matrix out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor;
    return out;
}

Matrix add_row_broadcast(const Matrix& a, const Matrix& b) {
    if (b.rows() != 1 || b.cols() != a.cols())
        throw std::invalid_argument("add_row_broadcast: need 1 x cols vector");
    Matrix out = a;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out.at(r, c) += b.at(0, c);
    return out;
}

Matrix column_sums(const Matrix& a) {
    Matrix out(1, a.cols());
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) out.at(0, c) += a.at(r, c);
    return out;
}

Matrix column_means(const Matrix& a) {
    if (a.rows() == 0) throw std::invalid_argument("column_means: empty matrix");
    return scale(column_sums(a), 1.0 / a.rows());
}

bool all_finite(const Matrix& a) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!std::isfinite(a[i])) return false;
    return true;
}

}  // namespace lowres
