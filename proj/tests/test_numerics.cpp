#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lowres/activations.hpp"
#include "lowres/matrix.hpp"
#include "lowres/rng.hpp"

using namespace lowres;

namespace {

// Oracle: naive triple loop, written independently of the library path.
Matrix naive_matmul(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (int k = 0; k < a.cols(); ++k) acc += a.at(i, k) * b.at(k, j);
            out.at(i, j) = acc;
        }
    return out;
}

Matrix random_matrix(int r, int c, RngStream& rng) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = 2.0 * rng.next() - 1.0;
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace

TEST_CASE("matmul identity and scalars") {
    Matrix a = Matrix::from_rows(2, 2, {1.0, 2.0, 3.0, 4.0});
    Matrix id = Matrix::from_rows(2, 2, {1.0, 0.0, 0.0, 1.0});
    CHECK(max_abs_diff(matmul(id, a), a) == 0.0);
    CHECK(max_abs_diff(matmul(a, id), a) == 0.0);
    Matrix x = Matrix::from_rows(1, 1, {2.0});
    Matrix y = Matrix::from_rows(1, 1, {3.0});
    CHECK(matmul(x, y).at(0, 0) == 6.0);
}

TEST_CASE("matmul matches the naive-loop oracle") {
    RngStream rng(17, 0);
    Matrix a = random_matrix(3, 4, rng);
    Matrix b = random_matrix(4, 2, rng);
    CHECK(max_abs_diff(matmul(a, b), naive_matmul(a, b)) < 1e-12);
    for (int t = 0; t < 10; ++t) {
        int m = 1 + static_cast<int>(rng.next_below(8));
        int k = 1 + static_cast<int>(rng.next_below(8));
        int n = 1 + static_cast<int>(rng.next_below(8));
        Matrix p = random_matrix(m, k, rng);
        Matrix q = random_matrix(k, n, rng);
        CHECK(max_abs_diff(matmul(p, q), naive_matmul(p, q)) < 1e-12);
    }
    CHECK_THROWS_AS((matmul(a, a)), std::invalid_argument);
}

TEST_CASE("transpose relation (AB)^T = B^T A^T") {
    RngStream rng(23, 0);
    Matrix a = random_matrix(4, 3, rng);
    Matrix b = random_matrix(3, 5, rng);
    CHECK(max_abs_diff(transpose(matmul(a, b)), matmul(transpose(b), transpose(a))) < 1e-12);
}

TEST_CASE("sigmoid values and stability") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(-700.0) >= 0.0);
    CHECK(sigmoid(-700.0) < 1e-300);
    CHECK(sigmoid(700.0) <= 1.0);
    CHECK(sigmoid(700.0) > 1.0 - 1e-12);
    // high-precision reference for 1/(1+e^-1)
    CHECK(std::abs(sigmoid(1.0) - 0.73105857863000487925) < 1e-15);
}

TEST_CASE("sigmoid symmetry") {
    RngStream rng(31, 0);
    for (int i = 0; i < 100; ++i) {
        double x = 40.0 * rng.next() - 20.0;
        CHECK(sigmoid(x) + sigmoid(-x) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("softplus agrees with naive form in the safe range") {
    for (double x : {-20.0, -3.0, -0.5, 0.0, 0.5, 3.0, 20.0})
        CHECK(softplus(x) == doctest::Approx(std::log(1.0 + std::exp(x))).epsilon(1e-12));
    CHECK(softplus(1000.0) == doctest::Approx(1000.0));
}

TEST_CASE("softmax: uniform, shift invariance, closed form") {
    std::vector<double> equal = {3.0, 3.0, 3.0, 3.0};
    for (double v : softmax_row(equal)) CHECK(v == doctest::Approx(0.25).epsilon(1e-12));

    std::vector<double> x = {0.3, -1.2, 2.0};
    std::vector<double> shifted = {0.3 + 17.0, -1.2 + 17.0, 2.0 + 17.0};
    auto sx = softmax_row(x);
    auto ss = softmax_row(shifted);
    double sum = 0.0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
        CHECK(std::abs(sx[i] - ss[i]) < 1e-12);
        CHECK(sx[i] > 0.0);
        sum += sx[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    auto two = softmax_row({0.0, std::log(3.0)});
    CHECK(two[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(two[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("rng determinism and stream independence") {
    RngStream a(123, 5);
    RngStream b(123, 5);
    for (int i = 0; i < 1000; ++i) CHECK(a.next() == b.next());
    CHECK(a.at(17) == b.at(17));

    // mean over 1e6 draws
    RngStream c(2024, 0);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += c.next();
    CHECK(std::abs(sum / n - 0.5) < 0.002);

    // cross-stream correlation over 1e5 pairs
    RngStream s1(77, 1);
    RngStream s2(77, 2);
    const int m = 100000;
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int i = 0; i < m; ++i) {
        double x = s1.next(), y = s2.next();
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    double cov = sxy / m - (sx / m) * (sy / m);
    double vx = sxx / m - (sx / m) * (sx / m);
    double vy = syy / m - (sy / m) * (sy / m);
    CHECK(std::abs(cov / std::sqrt(vx * vy)) < 0.01);
}

TEST_CASE("rng bounded draws and derived streams") {
    RngStream r(9, 9);
    for (int i = 0; i < 1000; ++i) CHECK(r.next_below(7) < 7);
    RngStream d1 = r.derive(1);
    RngStream d2 = r.derive(2);
    CHECK(d1.next() != d2.next());
    RngStream d1b = r.derive(1);
    CHECK(d1.at(0) == d1b.at(0));
}

TEST_CASE("matrix helpers") {
    Matrix a = Matrix::from_rows(2, 2, {1.0, 2.0, 3.0, 4.0});
    Matrix b = Matrix::from_rows(1, 2, {10.0, 20.0});
    Matrix sum = add_row_broadcast(a, b);
    CHECK(sum.at(0, 0) == 11.0);
    CHECK(sum.at(1, 1) == 24.0);
    Matrix cs = column_sums(a);
    CHECK(cs.at(0, 0) == 4.0);
    CHECK(cs.at(0, 1) == 6.0);
    CHECK(column_means(a).at(0, 1) == 3.0);
    CHECK(all_finite(a));
    a.at(0, 0) = std::nan("");
    CHECK(!all_finite(a));
}
