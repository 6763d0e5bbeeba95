#include "lowres/runner.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "lowres/errors.hpp"
#include "lowres/idx.hpp"
#include "lowres/libsvm.hpp"
#include "lowres/pgm.hpp"
#include "lowres/rbm.hpp"
#include "lowres/synthetic.hpp"

namespace fs = std::filesystem;

namespace lowres {

namespace {

std::string resolve_data_path(const RunConfig& cfg, const std::string& name) {
    const char* env = std::getenv("LOWRES_DATA_DIR");
    fs::path dir = env && *env ? fs::path(env) : fs::path(cfg.data_dir);
    fs::path p(name);
    return p.is_absolute() ? p.string() : (dir / p).string();
}

void require_file(const std::string& path, const std::string& fetch_hint) {
    if (fs::exists(path)) return;
    throw DataError(DataErrorCode::FileNotFound,
                    "dataset file not found: " + path +
                        "\nThis tool never downloads data on its own. " + fetch_hint);
}

Dataset idx_pair_to_dataset(const IdxTensor& images, const IdxTensor& labels,
                            const std::string& name) {
    if (images.dims.size() != 3)
        throw DataError(DataErrorCode::BadArgument,
                        "idx images: expected 3 dimensions, got " +
                            std::to_string(images.dims.size()));
    if (labels.dims.size() != 1)
        throw DataError(DataErrorCode::BadArgument, "idx labels: expected 1 dimension");
    if (images.dims[0] != labels.dims[0])
        throw DataError(DataErrorCode::BadArgument, "idx: image/label count mismatch");
    auto n = static_cast<int>(images.dims[0]);
    auto rows = static_cast<int>(images.dims[1]);
    auto cols = static_cast<int>(images.dims[2]);
    Dataset d;
    d.name = name;
    d.inputs = Matrix(n, rows * cols);
    for (std::size_t i = 0; i < images.data.size(); ++i)
        d.inputs[i] = images.data[i] / 255.0;
    d.labels.resize(n);
    int max_label = 0;
    for (int i = 0; i < n; ++i) {
        d.labels[i] = labels.data[i];
        max_label = std::max(max_label, d.labels[i]);
    }
    d.n_classes = max_label + 1;
    return d;
}

constexpr const char* kIdxFetchHint =
    "Fetch the four handwritten-digit IDX files (train/t10k images and labels) from "
    "an MNIST mirror and place them in the data directory, or point LOWRES_DATA_DIR "
    "at a directory that has them.";
constexpr const char* kLibsvmFetchHint =
    "Fetch the dataset in libsvm format (for 'dna': files dna.scale.tr / dna.scale.t "
    "from the LIBSVM dataset page) and place it in the data directory.";

LoadedData load_raw(const RunConfig& cfg) {
    LoadedData out;
    switch (cfg.source) {
        case DataSource::Idx: {
            std::string ti = resolve_data_path(cfg, cfg.train_images);
            std::string tl = resolve_data_path(cfg, cfg.train_labels);
            std::string vi = resolve_data_path(cfg, cfg.test_images);
            std::string vl = resolve_data_path(cfg, cfg.test_labels);
            for (const auto& p : {ti, tl, vi, vl}) require_file(p, kIdxFetchHint);
            IdxTensor train_x = read_idx_file(ti);
            out.train = idx_pair_to_dataset(train_x, read_idx_file(tl), "idx-train");
            out.test = idx_pair_to_dataset(read_idx_file(vi), read_idx_file(vl), "idx-test");
            out.image_rows = static_cast<int>(train_x.dims[1]);
            out.image_cols = static_cast<int>(train_x.dims[2]);
            break;
        }
        case DataSource::Libsvm: {
            std::string tr = resolve_data_path(cfg, cfg.train_path);
            std::string te = resolve_data_path(cfg, cfg.test_path);
            require_file(tr, kLibsvmFetchHint);
            require_file(te, kLibsvmFetchHint);
            out.train = read_libsvm_file(tr, cfg.n_features);
            out.test = read_libsvm_file(te, cfg.n_features);
            break;
        }
        case DataSource::Digits: {
            DigitCorpusOptions opt;
            opt.examples = cfg.train_examples + cfg.test_examples;
            opt.noise = cfg.noise;
            opt.max_shift = cfg.max_shift;
            opt.seed = cfg.generator_seed;
            Dataset all = make_digit_corpus(opt);
            auto [train, test] = split_dataset(all, cfg.train_examples, cfg.generator_seed + 1);
            out.train = std::move(train);
            out.test = std::move(test);
            out.train.split = "train";
            out.test.split = "test";
            out.image_rows = out.image_cols = 28;
            break;
        }
        case DataSource::Patterns: {
            PatternTaskOptions opt;
            opt.examples = cfg.train_examples + cfg.test_examples;
            opt.features = cfg.features;
            opt.classes = cfg.classes;
            opt.distinct_bits = cfg.distinct_bits;
            opt.noise = cfg.noise;
            opt.seed = cfg.generator_seed;
            Dataset all = make_pattern_task(opt);
            auto [train, test] = split_dataset(all, cfg.train_examples, cfg.generator_seed + 1);
            out.train = std::move(train);
            out.test = std::move(test);
            int side = static_cast<int>(std::lround(std::sqrt(cfg.features)));
            if (side * side == cfg.features) out.image_rows = out.image_cols = side;
            break;
        }
    }
    return out;
}

std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string cell_stub(const SweepCellResult& row) {
    return row.model_kind + "_" + method_name(row.method) + "_b" + std::to_string(row.bits) +
           "_h" + std::to_string(row.hidden_size) + "_s" + std::to_string(row.seed);
}

void write_results_csv(const std::string& path, const RunConfig& cfg,
                       const std::vector<SweepCellResult>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorCode::FileNotFound, "cannot write " + path);
    out << "model,method,bits,hidden_size,seed,config_hash,train_metric,valid_metric,"
           "test_metric,metric_kind,memory_bits,wall_seconds\n";
    for (const SweepCellResult& r : rows) {
        out << r.model_kind << ',' << method_name(r.method) << ',' << r.bits << ','
            << r.hidden_size << ',' << r.seed << ',' << cfg.config_hash << ','
            << format_metric(r.train_metric.value) << ',' << format_metric(r.valid_metric.value)
            << ',' << format_metric(r.test_metric.value) << ','
            << metric_kind_name(r.test_metric.kind) << ',' << r.memory_bits << ','
            << format_metric(r.wall_seconds) << '\n';
    }
}

void write_curve_csv(const std::string& path, const LearningCurve& curve) {
    std::ofstream out(path);
    if (!out) throw DataError(DataErrorCode::FileNotFound, "cannot write " + path);
    out << "epoch,train_metric,valid_metric\n";
    for (const CurvePoint& p : curve.points) {
        out << p.epoch << ',' << format_metric(p.train_metric) << ',';
        if (std::isnan(p.valid_metric))
            out << "nan";
        else
            out << format_metric(p.valid_metric);
        out << '\n';
    }
}

// Fig-6-style grid: one column per initial condition, one row per recording.
void write_rbm_artifacts(const RunConfig& cfg, const LoadedData& data,
                         const SweepCellResult& row, const RbmModel& model,
                         const fs::path& out_dir) {
    if (data.image_rows == 0) {
        std::cerr << "rbm artifacts skipped: inputs have no image shape\n";
        return;
    }
    const RbmParams& params = model.raw();
    RngStream pick(row.seed, fnv1a64("rbm-sample-init"));
    std::vector<std::vector<std::vector<double>>> per_chain;  // [chain][record][pixel]
    int records = cfg.sample_passes / cfg.sample_record_every;
    for (int chain = 0; chain < cfg.sample_chains; ++chain) {
        auto idx = static_cast<int>(pick.next_below(data.test.examples()));
        std::vector<double> v0(data.test.features());
        for (int c = 0; c < data.test.features(); ++c)
            v0[c] = data.test.inputs.at(idx, c) >= 0.5 ? 1.0 : 0.0;
        RngStream chain_rng(row.seed, RngStream::mix64(fnv1a64("rbm-sample-chain") ^
                                                       static_cast<std::uint64_t>(chain)));
        per_chain.push_back(
            rbm_sample(params, v0, cfg.sample_passes, cfg.sample_record_every, chain_rng));
    }
    std::vector<Matrix> tiles;
    for (int rec = 0; rec < records; ++rec)
        for (int chain = 0; chain < cfg.sample_chains; ++chain) {
            Matrix tile(data.image_rows, data.image_cols);
            for (std::size_t i = 0; i < tile.size(); ++i) tile[i] = per_chain[chain][rec][i];
            tiles.push_back(std::move(tile));
        }
    if (!tiles.empty())
        write_pgm(tile_grid(tiles, cfg.sample_chains),
                  (out_dir / "samples" / ("samples_" + cell_stub(row) + ".pgm")).string());
    write_receptive_fields(params.W, data.image_rows, data.image_cols,
                           (out_dir / "filters" / ("filters_" + cell_stub(row) + ".pgm")).string());
}

}  // namespace

LoadedData load_data(const RunConfig& cfg) {
    LoadedData data = load_raw(cfg);
    if (cfg.do_binarize) {
        data.train = binarize(data.train, cfg.binarize_threshold);
        data.test = binarize(data.test, cfg.binarize_threshold);
    }
    if (cfg.train_subsample > 0)
        data.train = subsample(data.train, cfg.train_subsample, cfg.subsample_seed);
    if (cfg.test_subsample > 0)
        data.test = subsample(data.test, cfg.test_subsample, cfg.subsample_seed + 1);
    if (cfg.val_fraction > 0.0) {
        int val_n = static_cast<int>(std::lround(cfg.val_fraction * data.train.examples()));
        auto [valid, train] = split_dataset(data.train, val_n, cfg.subsample_seed + 2);
        data.valid = std::move(valid);
        data.train = std::move(train);
        data.has_valid = true;
    }
    return data;
}

void run_experiment(const RunConfig& cfg) {
    LoadedData data = load_data(cfg);

    SweepOptions options;
    options.model.kind = cfg.model_kind;
    options.model.hidden_size = cfg.hidden_size;
    options.model.rbm_gibbs_steps = cfg.gibbs_steps;
    options.base.learning_rate = cfg.learning_rate;
    options.base.epochs = cfg.epochs;
    options.base.batch_size = cfg.batch_size;
    options.base.eval_every = cfg.eval_every;
    options.base.quantize_biases = cfg.quantize_biases;
    options.seeds = cfg.seeds;
    options.kmeans_center_bits = cfg.kmeans_center_bits;
    options.coarse_levels_pow2 = cfg.coarse_levels_pow2;
    options.count_all_matrices = cfg.count_all_matrices;
    options.workers = cfg.workers;

    const Dataset* valid = data.has_valid ? &data.valid : &data.test;

    std::vector<SweepCellResult> rows;
    if (cfg.sweep_mode == "fixed_hidden") {
        rows = sweep_fixed_hidden(cfg.bits, cfg.methods, options, data.train, valid, data.test);
    } else {
        rows = sweep_fixed_memory(cfg.total_bits, cfg.bits, cfg.methods.at(0), options,
                                  data.train, valid, data.test);
    }

    fs::path out_dir(cfg.output_dir);
    fs::create_directories(out_dir);
    fs::create_directories(out_dir / "curves");
    if (cfg.model_kind == "rbm") {
        fs::create_directories(out_dir / "samples");
        fs::create_directories(out_dir / "filters");
    }

    write_results_csv((out_dir / "results.csv").string(), cfg, rows);
    for (const SweepCellResult& row : rows) {
        write_curve_csv((out_dir / "curves" / ("curve_" + cell_stub(row) + ".csv")).string(),
                        row.curve);
        if (row.trained && row.model_kind == "rbm")
            write_rbm_artifacts(cfg, data, row, dynamic_cast<const RbmModel&>(*row.trained),
                                out_dir);
        std::cout << cell_stub(row) << ": train=" << format_metric(row.train_metric.value)
                  << " test=" << format_metric(row.test_metric.value)
                  << " memory_bits=" << row.memory_bits << "\n";
    }
    std::cout << "results written to " << (out_dir / "results.csv").string() << "\n";
}

}  // namespace lowres
