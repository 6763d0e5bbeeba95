#include "lowres/activations.hpp"

#include <algorithm>
#include <stdexcept>

namespace lowres {

std::vector<double> softmax_row(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("softmax_row: empty input");
    double mx = *std::max_element(x.begin(), x.end());
    std::vector<double> out(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::exp(x[i] - mx);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

Matrix softmax_rows(const Matrix& a) {
    Matrix out = a;
    for (int r = 0; r < a.rows(); ++r) {
        double mx = a.at(r, 0);
        for (int c = 1; c < a.cols(); ++c) mx = std::max(mx, a.at(r, c));
        double sum = 0.0;
        for (int c = 0; c < a.cols(); ++c) {
            out.at(r, c) = std::exp(a.at(r, c) - mx);
            sum += out.at(r, c);
        }
        for (int c = 0; c < a.cols(); ++c) out.at(r, c) /= sum;
    }
    return out;
}

}  // namespace lowres
