#include "lowres/nade.hpp"

#include <cmath>
#include <stdexcept>

#include "lowres/activations.hpp"

namespace lowres {

namespace {

void require_dims(const NadeParams& p, const std::vector<double>& x, const char* who) {
    if (static_cast<int>(x.size()) != p.W.cols())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    for (double v : x)
        if (v != 0.0 && v != 1.0)
            throw std::invalid_argument(std::string(who) + ": non-binary input");
}

}  // namespace

NadeParams nade_init(int visible, int hidden, std::uint64_t seed, const Grid* snap,
                     std::uint64_t ordering_seed) {
    if (visible < 1 || hidden < 1) throw std::invalid_argument("nade_init: bad architecture");
    NadeParams p;
    RngStream rw(seed, fnv1a64("nade.W.init"));
    RngStream rv(seed, fnv1a64("nade.V.init"));
    p.W = init_weight_matrix(hidden, visible, visible, hidden, rw, snap);
    p.V = init_weight_matrix(visible, hidden, hidden, visible, rv, snap);
    p.b_hid = Matrix(1, hidden);
    p.b_vis = Matrix(1, visible);
    p.ordering.resize(visible);
    for (int d = 0; d < visible; ++d) p.ordering[d] = d;
    if (ordering_seed != 0) {
        RngStream ro(ordering_seed, fnv1a64("nade.ordering"));
        for (int i = visible - 1; i > 0; --i) {
            auto j = static_cast<int>(ro.next_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(p.ordering[i], p.ordering[j]);
        }
    }
    return p;
}

double nade_logprob(const NadeParams& params, const std::vector<double>& x) {
    require_dims(params, x, "nade_logprob");
    const int hidden = params.W.rows();
    std::vector<double> a(params.b_hid.data(), params.b_hid.data() + hidden);
    double logprob = 0.0;
    for (int d : params.ordering) {
        double rho = params.b_vis.at(0, d);
        for (int j = 0; j < hidden; ++j) rho += params.V.at(d, j) * sigmoid(a[j]);
        // log sigmoid(rho) = -softplus(-rho); log(1 - sigmoid(rho)) = -softplus(rho)
        logprob -= x[d] != 0.0 ? softplus(-rho) : softplus(rho);
        if (x[d] != 0.0)
            for (int j = 0; j < hidden; ++j) a[j] += params.W.at(j, d);
    }
    return logprob;
}

NadeGrad nade_grad(const NadeParams& params, const std::vector<double>& x) {
    require_dims(params, x, "nade_grad");
    const int hidden = params.W.rows();
    const int visible = params.W.cols();

    // Forward, keeping the pre-activation state before each step.
    Matrix a_steps(visible, hidden);
    std::vector<double> p_steps(visible);
    std::vector<double> a(params.b_hid.data(), params.b_hid.data() + hidden);
    for (int t = 0; t < visible; ++t) {
        int d = params.ordering[t];
        for (int j = 0; j < hidden; ++j) a_steps.at(t, j) = a[j];
        double rho = params.b_vis.at(0, d);
        for (int j = 0; j < hidden; ++j) rho += params.V.at(d, j) * sigmoid(a[j]);
        p_steps[t] = sigmoid(rho);
        if (x[d] != 0.0)
            for (int j = 0; j < hidden; ++j) a[j] += params.W.at(j, d);
    }

    NadeGrad g;
    g.dW = Matrix(hidden, visible);
    g.dV = Matrix(visible, hidden);
    g.db_hid = Matrix(1, hidden);
    g.db_vis = Matrix(1, visible);

    // Backward: accum holds d(-logprob)/da for all later steps.
    std::vector<double> accum(hidden, 0.0);
    for (int t = visible - 1; t >= 0; --t) {
        int d = params.ordering[t];
        double err = p_steps[t] - x[d];
        g.db_vis.at(0, d) = err;
        // W[:,d] only feeds steps after t, where x_d has been added.
        if (x[d] != 0.0)
            for (int j = 0; j < hidden; ++j) g.dW.at(j, d) = accum[j];
        for (int j = 0; j < hidden; ++j) {
            double h = sigmoid(a_steps.at(t, j));
            g.dV.at(d, j) = err * h;
            accum[j] += err * params.V.at(d, j) * h * (1.0 - h);
        }
    }
    for (int j = 0; j < hidden; ++j) g.db_hid.at(0, j) = accum[j];
    return g;
}

Metric nade_evaluate(const NadeParams& params, const Dataset& data) {
    if (data.examples() == 0) throw std::invalid_argument("nade_evaluate: empty dataset");
    double total = 0.0;
    std::vector<double> x(data.features());
    for (int r = 0; r < data.examples(); ++r) {
        for (int c = 0; c < data.features(); ++c) x[c] = data.inputs.at(r, c);
        total -= nade_logprob(params, x);
    }
    return Metric{MetricKind::NegLogLikelihoodNats, total / data.examples()};
}

std::vector<ParamView> NadeModel::params() {
    return {{"nade.W", &p_.W, true},
            {"nade.V", &p_.V, true},
            {"nade.b_hid", &p_.b_hid, false},
            {"nade.b_vis", &p_.b_vis, false}};
}

std::vector<Matrix> NadeModel::batch_gradient(const Dataset& data,
                                              const std::vector<int>& batch, RngStream&) {
    NadeGrad sum;
    sum.dW = Matrix(p_.W.rows(), p_.W.cols());
    sum.dV = Matrix(p_.V.rows(), p_.V.cols());
    sum.db_hid = Matrix(1, p_.b_hid.cols());
    sum.db_vis = Matrix(1, p_.b_vis.cols());
    std::vector<double> x(data.features());
    for (int idx : batch) {
        for (int c = 0; c < data.features(); ++c) x[c] = data.inputs.at(idx, c);
        NadeGrad g = nade_grad(p_, x);
        for (std::size_t i = 0; i < sum.dW.size(); ++i) sum.dW[i] += g.dW[i];
        for (std::size_t i = 0; i < sum.dV.size(); ++i) sum.dV[i] += g.dV[i];
        for (std::size_t i = 0; i < sum.db_hid.size(); ++i) sum.db_hid[i] += g.db_hid[i];
        for (std::size_t i = 0; i < sum.db_vis.size(); ++i) sum.db_vis[i] += g.db_vis[i];
    }
    double inv = 1.0 / static_cast<double>(batch.size());
    return {scale(sum.dW, inv), scale(sum.dV, inv), scale(sum.db_hid, inv),
            scale(sum.db_vis, inv)};
}

Metric NadeModel::evaluate(const Dataset& data) const { return nade_evaluate(p_, data); }

}  // namespace lowres
