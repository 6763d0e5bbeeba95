#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lowres/kmeans.hpp"
#include "lowres/rng.hpp"

using namespace lowres;

namespace {

// Oracle: exact 1-D k-means by dynamic programming over the sorted values.
// O(k n^2) with prefix sums; independent of the Lloyd implementation.
double exact_kmeans_cost(std::vector<double> values, int k) {
    std::sort(values.begin(), values.end());
    const int n = static_cast<int>(values.size());
    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + values[i];
        prefix_sq[i + 1] = prefix_sq[i] + values[i] * values[i];
    }
    // Cost of putting values[i..j] into one cluster at their mean.
    auto segment = [&](int i, int j) {
        double s = prefix[j + 1] - prefix[i];
        double sq = prefix_sq[j + 1] - prefix_sq[i];
        int m = j - i + 1;
        return sq - s * s / m;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> dp(k + 1, std::vector<double>(n + 1, inf));
    dp[0][0] = 0.0;
    for (int c = 1; c <= k; ++c)
        for (int j = 1; j <= n; ++j)
            for (int i = c - 1; i < j; ++i)
                dp[c][j] = std::min(dp[c][j], dp[c - 1][i] + segment(i, j - 1));
    double best = inf;
    for (int c = 1; c <= k; ++c) best = std::min(best, dp[c][n]);
    return best;
}

}  // namespace

TEST_CASE("two point masses") {
    std::vector<double> w = {-1.0, -1.0, 1.0, 1.0};
    KmeansResult r = kmeans_compress(w, 2, 32, 1);
    REQUIRE(r.codebook.k() == 2);
    CHECK(r.codebook.centers[0] == doctest::Approx(-1.0));
    CHECK(r.codebook.centers[1] == doctest::Approx(1.0));
    CHECK(r.assignments == std::vector<int>{0, 0, 1, 1});
    CHECK(r.cost == doctest::Approx(0.0));
}

TEST_CASE("degenerate: all values equal") {
    std::vector<double> w(17, 0.25);
    KmeansResult r = kmeans_compress(w, 5, 32, 3);
    CHECK(r.k_shrunk);
    REQUIRE(r.codebook.k() == 1);
    CHECK(r.codebook.centers[0] == doctest::Approx(0.25).epsilon(1e-9));
    for (int a : r.assignments) CHECK(a == 0);
}

TEST_CASE("k = 1 gives the global mean") {
    std::vector<double> w = {-0.5, 0.0, 0.1, 0.8};
    KmeansResult r = kmeans_compress(w, 1, 32, 2);
    REQUIRE(r.codebook.k() == 1);
    CHECK(r.codebook.centers[0] == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("lloyd reaches within 1% of the exact DP optimum") {
    RngStream rng(99, 0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 20 + static_cast<int>(rng.next_below(181));
        int k = 2 + static_cast<int>(rng.next_below(14));
        std::vector<double> w(n);
        for (double& v : w) v = 2.0 * rng.next() - 1.0;
        KmeansResult r = kmeans_compress(w, k, 53, trial + 1);
        double exact = exact_kmeans_cost(w, k);
        CHECK(r.cost <= 1.01 * exact + 1e-12);
    }
}

TEST_CASE("lloyd cost never increases across iterations (spot check via fixpoint)") {
    // The fixpoint cost must be no worse than the single-cluster cost and
    // no better than the exact optimum.
    RngStream rng(123, 1);
    std::vector<double> w(150);
    for (double& v : w) v = 2.0 * rng.next() - 1.0;
    KmeansResult r = kmeans_compress(w, 6, 53, 7);
    CHECK(r.cost >= exact_kmeans_cost(w, 6) - 1e-12);
    CHECK(r.cost <= exact_kmeans_cost(w, 1) + 1e-12);
}

TEST_CASE("center precision grid and duplicate merging") {
    // center_bits = 1 leaves only the two level endpoints {-1, +1}.
    std::vector<double> w = {-0.9, -0.8, 0.7, 0.9};
    KmeansResult r = kmeans_compress(w, 2, 1, 5);
    REQUIRE(r.codebook.k() == 2);
    CHECK(r.codebook.centers[0] == -1.0);
    CHECK(r.codebook.centers[1] == 1.0);

    // Coarse centers can collide; assignments must follow the merge.
    std::vector<double> close = {0.30, 0.31, 0.32, 0.33};
    KmeansResult rc = kmeans_compress(close, 2, 2, 5);
    CHECK(rc.codebook.k() >= 1);
    for (int a : rc.assignments) {
        CHECK(a >= 0);
        CHECK(a < rc.codebook.k());
    }
    for (std::size_t i = 1; i < rc.codebook.centers.size(); ++i)
        CHECK(rc.codebook.centers[i] > rc.codebook.centers[i - 1]);
}

TEST_CASE("memory accounting is k * center_bits") {
    Codebook cb;
    cb.centers = std::vector<double>(15, 0.0);
    for (int i = 0; i < 15; ++i) cb.centers[i] = i * 0.01;
    cb.center_bits = 32;
    CHECK(codebook_memory_bits(cb) == 480);
    cb.centers.resize(3);
    cb.center_bits = 8;
    CHECK(codebook_memory_bits(cb) == 24);
    cb.centers.resize(1);
    cb.center_bits = 1;
    CHECK(codebook_memory_bits(cb) == 1);
}

TEST_CASE("error paths") {
    std::vector<double> empty;
    CHECK_THROWS_AS((kmeans_compress(empty, 1, 8, 1)), std::invalid_argument);
    std::vector<double> w = {0.1, 0.2};
    CHECK_THROWS_AS((kmeans_compress(w, 0, 8, 1)), std::invalid_argument);
    CHECK_THROWS_AS((kmeans_compress(w, 1, 0, 1)), std::invalid_argument);
}

TEST_CASE("apply_codebook realizes the compressed vector") {
    std::vector<double> w = {-0.8, -0.7, 0.6, 0.65, 0.7};
    KmeansResult r = kmeans_compress(w, 2, 32, 4);
    std::vector<double> c = apply_codebook(r.codebook, r.assignments);
    REQUIRE(c.size() == w.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        bool is_center = false;
        for (double center : r.codebook.centers) is_center |= (c[i] == center);
        CHECK(is_center);
    }
}
