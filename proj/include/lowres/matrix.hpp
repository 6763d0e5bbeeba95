#ifndef LOWRES_MATRIX_HPP
#define LOWRES_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lowres {

// Dense row-major matrix, 64-bit entries. Stored weights may live on a
// coarse grid but all arithmetic runs at full double precision; only the
// update step ever quantizes.
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols, double fill = 0.0);
    static Matrix from_rows(int rows, int cols, std::initializer_list<double> values);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

private:
    int rows_;
    int cols_;
    std::vector<double> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double factor);

// b is 1 x cols; added to every row of a.
Matrix add_row_broadcast(const Matrix& a, const Matrix& b);
// Column sums as a 1 x cols matrix.
Matrix column_sums(const Matrix& a);
Matrix column_means(const Matrix& a);

bool all_finite(const Matrix& a);

}  // namespace lowres

#endif
