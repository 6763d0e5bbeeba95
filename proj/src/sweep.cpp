#include "lowres/sweep.hpp"

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "lowres/errors.hpp"

namespace lowres {

std::string method_name(Method m) {
    switch (m) {
        case Method::Baseline: return "baseline";
        case Method::Nearest: return "nearest";
        case Method::RR: return "rr";
        case Method::CoarseP: return "coarse_p";
        case Method::KmeansOffline: return "kmeans_offline";
    }
    return "unknown";
}

Method method_from_name(const std::string& name) {
    if (name == "baseline") return Method::Baseline;
    if (name == "nearest") return Method::Nearest;
    if (name == "rr") return Method::RR;
    if (name == "coarse_p") return Method::CoarseP;
    if (name == "kmeans_offline") return Method::KmeansOffline;
    throw ConfigError("unknown method '" + name + "'");
}

int MemoryBudget::derive_hidden(int input_size) const {
    if (total_bits < 1 || bits_per_weight < 1 || input_size < 1)
        throw ConfigError("memory budget: nonpositive sizes");
    std::int64_t per_unit = static_cast<std::int64_t>(input_size) * bits_per_weight;
    std::int64_t hidden = total_bits / per_unit;
    if (hidden < 1)
        throw ConfigError("memory budget of " + std::to_string(total_bits) +
                          " bits cannot fit one hidden unit at " +
                          std::to_string(bits_per_weight) + " bits per weight");
    return static_cast<int>(hidden);
}

std::int64_t counted_weights(Model& model, bool count_all_matrices) {
    std::int64_t total = 0;
    bool first = true;
    for (const ParamView& p : model.params()) {
        if (!p.weight_matrix) continue;
        if (first || count_all_matrices) total += static_cast<std::int64_t>(p.value->size());
        first = false;
    }
    return total;
}

CompressionReport compress_trained(Model& model, int bits, int center_bits,
                                   std::uint64_t seed) {
    if (bits < 2) throw std::invalid_argument("compress_trained: bits < 2");
    int k = static_cast<int>((std::int64_t{1} << bits) - 1);
    CompressionReport report;
    for (const ParamView& p : model.params()) {
        if (!p.weight_matrix) continue;
        std::uint64_t matrix_seed = RngStream::mix64(seed ^ fnv1a64(p.name.c_str()));
        KmeansResult km = kmeans_compress({p.value->data(), p.value->size()}, k,
                                          center_bits, matrix_seed);
        std::vector<double> compressed = apply_codebook(km.codebook, km.assignments);
        for (std::size_t i = 0; i < p.value->size(); ++i) (*p.value)[i] = compressed[i];
        report.codebook_bits += codebook_memory_bits(km.codebook);
        report.codebooks.emplace_back(p.name, std::move(km.codebook));
    }
    return report;
}

namespace {

struct CellKey {
    Method method;
    int bits;
    std::uint64_t seed;
};

SweepCellResult run_cell(const CellKey& key, int hidden, const SweepOptions& options,
                         const Dataset& train_data, const Dataset* valid_data,
                         const Dataset& test_data) {
    auto t0 = std::chrono::steady_clock::now();

    TrainConfig cfg = options.base;
    cfg.seed = key.seed;
    const Grid* snap = nullptr;
    Grid grid;
    switch (key.method) {
        case Method::Baseline:
        case Method::KmeansOffline:
            cfg.policy = QuantPolicy::float_baseline();
            break;
        case Method::Nearest:
            cfg.policy = QuantPolicy::nearest(key.bits);
            break;
        case Method::RR:
            cfg.policy = QuantPolicy::rr(key.bits);
            break;
        case Method::CoarseP:
            cfg.policy = QuantPolicy::coarse_rr(key.bits, options.coarse_levels_pow2);
            break;
    }
    if (cfg.policy.quantized()) {
        grid = *cfg.policy.grid;
        snap = &grid;
    }

    ModelSpec spec = options.model;
    spec.hidden_size = hidden;
    if (spec.kind == "rbm" && spec.rbm_chains == 0) spec.rbm_chains = cfg.batch_size;
    std::unique_ptr<Model> model = make_model(spec, train_data, key.seed, snap);

    SweepCellResult row;
    row.model_kind = spec.kind;
    row.method = key.method;
    row.bits = key.method == Method::Baseline ? 32 : key.bits;
    row.hidden_size = hidden;
    row.seed = key.seed;
    row.curve = train(*model, train_data, valid_data, cfg);

    std::int64_t index_bits = key.method == Method::Baseline ? 32 : key.bits;
    row.memory_bits = counted_weights(*model, options.count_all_matrices) * index_bits;
    if (key.method == Method::KmeansOffline) {
        CompressionReport report =
            compress_trained(*model, key.bits, options.kmeans_center_bits, key.seed);
        row.memory_bits = counted_weights(*model, options.count_all_matrices) * key.bits +
                          report.codebook_bits;
    }

    row.train_metric = model->evaluate(train_data);
    row.valid_metric = valid_data ? model->evaluate(*valid_data) : row.train_metric;
    row.test_metric = model->evaluate(test_data);
    row.trained = std::move(model);
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

std::vector<SweepCellResult> run_cells(const std::vector<std::pair<CellKey, int>>& cells,
                                       const SweepOptions& options, const Dataset& train_data,
                                       const Dataset* valid_data, const Dataset& test_data) {
    std::vector<SweepCellResult> rows(cells.size());
    int workers = options.workers < 1 ? 1 : options.workers;
    if (workers == 1) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            rows[i] = run_cell(cells[i].first, cells[i].second, options, train_data,
                               valid_data, test_data);
        return rows;
    }
    // Cells are independent and internally deterministic; results land by
    // index, never by completion order.
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) return;
                try {
                    rows[i] = run_cell(cells[i].first, cells[i].second, options, train_data,
                                       valid_data, test_data);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return rows;
}

}  // namespace

std::vector<SweepCellResult> sweep_fixed_hidden(const std::vector<int>& bits_list,
                                                const std::vector<Method>& methods,
                                                const SweepOptions& options,
                                                const Dataset& train_data,
                                                const Dataset* valid_data,
                                                const Dataset& test_data) {
    if (bits_list.empty() || methods.empty() || options.seeds.empty())
        throw ConfigError("sweep_fixed_hidden: empty bits/methods/seeds");
    std::vector<std::pair<CellKey, int>> cells;
    for (Method m : methods) {
        if (m == Method::Baseline) {
            for (std::uint64_t s : options.seeds)
                cells.push_back({{m, 32, s}, options.model.hidden_size});
            continue;
        }
        for (int bits : bits_list)
            for (std::uint64_t s : options.seeds)
                cells.push_back({{m, bits, s}, options.model.hidden_size});
    }
    return run_cells(cells, options, train_data, valid_data, test_data);
}

std::vector<SweepCellResult> sweep_fixed_memory(std::int64_t total_bits,
                                                const std::vector<int>& bits_list,
                                                Method method, const SweepOptions& options,
                                                const Dataset& train_data,
                                                const Dataset* valid_data,
                                                const Dataset& test_data) {
    if (bits_list.empty() || options.seeds.empty())
        throw ConfigError("sweep_fixed_memory: empty bits/seeds");
    std::vector<std::pair<CellKey, int>> cells;
    for (int bits : bits_list) {
        MemoryBudget budget{total_bits, method == Method::Baseline ? 32 : bits};
        int hidden = budget.derive_hidden(train_data.features());
        for (std::uint64_t s : options.seeds) cells.push_back({{method, bits, s}, hidden});
    }
    return run_cells(cells, options, train_data, valid_data, test_data);
}

}  // namespace lowres
