#include "lowres/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "lowres/rng.hpp"

namespace lowres {

namespace {

constexpr int kMaxLloydIterations = 300;
// Local-search refinement runs only on inputs this small; it is what closes
// the gap between Lloyd fixpoints and the exact 1-D optimum.
constexpr std::size_t kRefineMaxValues = 2048;
constexpr int kRefineMaxCenters = 64;

double snap_to_center_grid(double c, int center_bits) {
    if (center_bits >= 53) return c;  // finer than double mantissa spacing here
    auto levels = static_cast<double>((std::int64_t{1} << center_bits) - 1);
    double spacing = 2.0 / levels;
    double snapped = std::round((c + 1.0) / spacing) * spacing - 1.0;
    return std::min(1.0, std::max(-1.0, snapped));
}

// Cluster index of v given ascending centers; ties at midpoints go low.
int nearest_center(const std::vector<double>& centers, double v) {
    auto it = std::lower_bound(centers.begin(), centers.end(), v);
    if (it == centers.begin()) return 0;
    if (it == centers.end()) return static_cast<int>(centers.size()) - 1;
    auto hi = static_cast<int>(it - centers.begin());
    return (v - centers[hi - 1] <= centers[hi] - v) ? hi - 1 : hi;
}

struct Fixpoint {
    std::vector<double> centers;   // ascending cluster means
    std::vector<int> assignments;  // per sorted value
    double cost = 0.0;
};

Fixpoint run_lloyd(const std::vector<double>& sorted, std::vector<double> centers) {
    const std::size_t n = sorted.size();
    std::sort(centers.begin(), centers.end());
    std::vector<int> assign(n, -1);
    for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
        std::vector<int> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = nearest_center(centers, sorted[i]);

        std::vector<double> sum(centers.size(), 0.0);
        std::vector<std::size_t> count(centers.size(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[next[i]] += sorted[i];
            ++count[next[i]];
        }
        std::vector<double> updated;
        std::vector<int> remap(centers.size(), -1);
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (count[c] == 0) continue;  // empty cluster dropped
            remap[c] = static_cast<int>(updated.size());
            updated.push_back(sum[c] / static_cast<double>(count[c]));
        }
        for (std::size_t i = 0; i < n; ++i) next[i] = remap[next[i]];

        bool converged = updated.size() == centers.size() && next == assign;
        centers = std::move(updated);
        assign = std::move(next);
        if (converged) break;
    }
    Fixpoint out;
    for (std::size_t i = 0; i < n; ++i) {
        double d = sorted[i] - centers[assign[i]];
        out.cost += d * d;
    }
    out.centers = std::move(centers);
    out.assignments = std::move(assign);
    return out;
}

std::vector<double> quantile_seeds(const std::vector<double>& sorted, int k) {
    std::vector<double> centers(k);
    for (int c = 0; c < k; ++c) {
        auto pos = static_cast<std::size_t>((c + 0.5) / k * sorted.size());
        centers[c] = sorted[std::min(pos, sorted.size() - 1)];
    }
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
    return centers;
}

std::vector<double> maximin_seeds(const std::vector<double>& sorted, int k, RngStream& rng) {
    std::vector<double> centers{sorted[rng.next_below(sorted.size())]};
    std::vector<double> min_dist(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        min_dist[i] = std::abs(sorted[i] - centers[0]);
    while (static_cast<int>(centers.size()) < k) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < sorted.size(); ++i)
            if (min_dist[i] > min_dist[best]) best = i;
        if (min_dist[best] == 0.0) break;  // fewer distinct values than k
        centers.push_back(sorted[best]);
        for (std::size_t i = 0; i < sorted.size(); ++i)
            min_dist[i] = std::min(min_dist[i], std::abs(sorted[i] - centers.back()));
    }
    return centers;
}

// Classic k-means++ seeding: each next seed drawn with probability
// proportional to squared distance from the chosen set.
std::vector<double> dsquared_seeds(const std::vector<double>& sorted, int k, RngStream& rng) {
    std::vector<double> centers{sorted[rng.next_below(sorted.size())]};
    std::vector<double> dist_sq(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        double d = sorted[i] - centers[0];
        dist_sq[i] = d * d;
    }
    while (static_cast<int>(centers.size()) < k) {
        double total = std::accumulate(dist_sq.begin(), dist_sq.end(), 0.0);
        if (total == 0.0) break;
        double target = rng.next() * total;
        std::size_t pick = 0;
        double acc = 0.0;
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            acc += dist_sq[i];
            if (acc >= target) {
                pick = i;
                break;
            }
        }
        centers.push_back(sorted[pick]);
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            double d = sorted[i] - centers.back();
            dist_sq[i] = std::min(dist_sq[i], d * d);
        }
    }
    return centers;
}

// Optimal 2-way split of one sorted segment, by prefix-sum scan.
std::size_t best_split_index(const double* pts, std::size_t m) {
    std::vector<double> p(m + 1, 0.0), q(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        p[i + 1] = p[i] + pts[i];
        q[i + 1] = q[i] + pts[i] * pts[i];
    }
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 1;
    for (std::size_t i = 1; i < m; ++i) {
        double c1 = q[i] - p[i] * p[i] / static_cast<double>(i);
        double c2 = (q[m] - q[i]) -
                    (p[m] - p[i]) * (p[m] - p[i]) / static_cast<double>(m - i);
        if (c1 + c2 < best) {
            best = c1 + c2;
            best_i = i;
        }
    }
    return best_i;
}

// All "remove one center, split one cluster at its best point" moves,
// Lloyd-refined, cheapest first, duplicates removed.
std::vector<Fixpoint> single_moves(const std::vector<double>& sorted, const Fixpoint& from) {
    const int k = static_cast<int>(from.centers.size());
    std::vector<std::size_t> start(k + 1, 0);
    for (std::size_t i = 0; i < sorted.size(); ++i) ++start[from.assignments[i] + 1];
    for (int c = 0; c < k; ++c) start[c + 1] += start[c];

    std::vector<Fixpoint> moves;
    for (int sp = 0; sp < k; ++sp) {
        std::size_t seg_begin = start[sp], seg_len = start[sp + 1] - start[sp];
        if (seg_len < 2) continue;
        std::size_t cut = best_split_index(sorted.data() + seg_begin, seg_len);
        double mean_lo = 0.0, mean_hi = 0.0;
        for (std::size_t i = 0; i < cut; ++i) mean_lo += sorted[seg_begin + i];
        for (std::size_t i = cut; i < seg_len; ++i) mean_hi += sorted[seg_begin + i];
        mean_lo /= static_cast<double>(cut);
        mean_hi /= static_cast<double>(seg_len - cut);
        for (int rm = 0; rm < k; ++rm) {
            if (rm == sp) continue;
            std::vector<double> centers;
            centers.reserve(k);
            for (int c = 0; c < k; ++c)
                if (c != rm && c != sp) centers.push_back(from.centers[c]);
            centers.push_back(mean_lo);
            centers.push_back(mean_hi);
            Fixpoint fp = run_lloyd(sorted, std::move(centers));
            if (static_cast<int>(fp.centers.size()) == k) moves.push_back(std::move(fp));
        }
    }
    std::sort(moves.begin(), moves.end(),
              [](const Fixpoint& a, const Fixpoint& b) { return a.cost < b.cost; });
    std::vector<Fixpoint> dedup;
    for (Fixpoint& m : moves)
        if (dedup.empty() || m.centers != dedup.back().centers ||
            std::abs(m.cost - dedup.back().cost) > 1e-15)
            dedup.push_back(std::move(m));
    return dedup;
}

Fixpoint refine_depth1(const std::vector<double>& sorted, Fixpoint fp) {
    for (;;) {
        if (fp.centers.size() < 2) return fp;
        std::vector<Fixpoint> moves = single_moves(sorted, fp);
        if (moves.empty() || moves.front().cost >= fp.cost - 1e-14) return fp;
        fp = std::move(moves.front());
    }
}

// Escalation: allow one non-improving intermediate move (top few candidates)
// if a follow-up move lands strictly below the incumbent.
Fixpoint refine_depth2(const std::vector<double>& sorted, Fixpoint fp) {
    constexpr std::size_t kWidth = 6;
    fp = refine_depth1(sorted, std::move(fp));
    for (;;) {
        if (fp.centers.size() < 2) return fp;
        std::vector<Fixpoint> first = single_moves(sorted, fp);
        if (first.size() > kWidth) first.resize(kWidth);
        bool accepted = false;
        Fixpoint best_second;
        for (const Fixpoint& mid : first) {
            std::vector<Fixpoint> second = single_moves(sorted, mid);
            if (second.empty()) continue;
            if (second.front().cost < fp.cost - 1e-14 &&
                (!accepted || second.front().cost < best_second.cost)) {
                best_second = std::move(second.front());
                accepted = true;
            }
        }
        if (!accepted) return fp;
        fp = refine_depth1(sorted, std::move(best_second));
    }
}

}  // namespace

KmeansResult kmeans_compress(std::span<const double> weights, int k,
                             int center_bits, std::uint64_t seed) {
    if (weights.empty()) throw std::invalid_argument("kmeans_compress: empty input");
    if (k < 1) throw std::invalid_argument("kmeans_compress: k < 1");
    if (center_bits < 1) throw std::invalid_argument("kmeans_compress: center_bits < 1");

    const auto n = weights.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weights[a] < weights[b]; });
    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = weights[order[i]];

    std::size_t distinct = 1;
    for (std::size_t i = 1; i < n; ++i)
        if (sorted[i] != sorted[i - 1]) ++distinct;

    KmeansResult result;
    if (static_cast<std::size_t>(k) > distinct) {
        std::cerr << "kmeans_compress: k=" << k << " exceeds " << distinct
                  << " distinct values, shrinking\n";
        k = static_cast<int>(distinct);
        result.k_shrunk = true;
    }

    RngStream rng(seed, fnv1a64("kmeans-seeding"));
    int restarts = n <= 4096 ? 8 : 2;
    Fixpoint best;
    bool have_best = false;
    auto consider = [&](std::vector<double> centers) {
        if (centers.empty()) return;
        Fixpoint fp = run_lloyd(sorted, std::move(centers));
        if (!have_best || fp.cost < best.cost) {
            best = std::move(fp);
            have_best = true;
        }
    };
    consider(quantile_seeds(sorted, k));
    consider(maximin_seeds(sorted, k, rng));
    for (int r = 0; r < restarts; ++r) consider(dsquared_seeds(sorted, k, rng));

    if (n <= kRefineMaxValues && k <= kRefineMaxCenters)
        best = refine_depth2(sorted, std::move(best));

    result.cost = best.cost;

    // Snap centers to the storage grid and merge any that collide.
    std::vector<double> snapped(best.centers.size());
    for (std::size_t c = 0; c < best.centers.size(); ++c)
        snapped[c] = snap_to_center_grid(best.centers[c], center_bits);
    std::vector<int> merge_map(best.centers.size());
    std::vector<double> final_centers;
    for (std::size_t c = 0; c < snapped.size(); ++c) {
        if (!final_centers.empty() && snapped[c] == final_centers.back()) {
            merge_map[c] = static_cast<int>(final_centers.size()) - 1;
        } else {
            merge_map[c] = static_cast<int>(final_centers.size());
            final_centers.push_back(snapped[c]);
        }
    }

    result.codebook.centers = std::move(final_centers);
    result.codebook.center_bits = center_bits;
    result.assignments.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        result.assignments[order[i]] = merge_map[best.assignments[i]];
    return result;
}

std::int64_t codebook_memory_bits(const Codebook& codebook) {
    return static_cast<std::int64_t>(codebook.k()) * codebook.center_bits;
}

std::vector<double> apply_codebook(const Codebook& codebook,
                                   std::span<const int> assignments) {
    std::vector<double> out(assignments.size());
    for (std::size_t i = 0; i < assignments.size(); ++i)
        out[i] = codebook.centers[assignments[i]];
    return out;
}

}  // namespace lowres
