#include "lowres/run_config.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lowres/errors.hpp"
#include "lowres/rng.hpp"

namespace lowres {

namespace {

struct Entry {
    std::string value;
    int line;
};
using Sections = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

Sections parse_ini(const std::string& text, const std::string& origin) {
    Sections sections;
    std::istringstream lines(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + " line " + std::to_string(line_no) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + " line " + std::to_string(line_no) + ": empty section name");
            sections[section];
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + " line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + " line " + std::to_string(line_no) + ": empty key");
        if (section.empty())
            throw ConfigError(origin + " line " + std::to_string(line_no) +
                              ": key outside any [section]");
        if (sections[section].count(key))
            throw ConfigError(origin + " line " + std::to_string(line_no) + ": duplicate key '" +
                              key + "' in [" + section + "]");
        sections[section][key] = {value, line_no};
    }
    return sections;
}

const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"run", {"model", "sweep", "methods", "bits", "seeds", "output_dir", "workers"}},
        {"data",
         {"source", "data_dir", "train_images", "train_labels", "test_images", "test_labels",
          "train_path", "test_path", "n_features", "train_examples", "test_examples", "noise",
          "max_shift", "features", "classes", "distinct_bits", "generator_seed", "binarize",
          "binarize_threshold", "train_subsample", "test_subsample", "subsample_seed"}},
        {"model",
         {"hidden_size", "total_bits", "quantize_biases", "coarse_levels_pow2",
          "kmeans_center_bits", "count_all_matrices"}},
        {"train", {"learning_rate", "epochs", "batch_size", "eval_every", "val_fraction"}},
        {"rbm", {"gibbs_steps", "sample_passes", "sample_record_every", "sample_chains"}},
    };
    return s;
}

class Reader {
public:
    Reader(const Sections& sections, std::string origin)
        : sections_(sections), origin_(std::move(origin)) {}

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string str(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end() || !s->second.count(key))
            throw ConfigError(origin_ + ": missing required key '" + key + "' in [" + section + "]");
        return s->second.at(key).value;
    }

    std::string str_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const {
        return has(section, key) ? str(section, key) : fallback;
    }

    long long integer(const std::string& section, const std::string& key, long long fallback,
                      bool required = false) const {
        if (!has(section, key)) {
            if (required)
                throw ConfigError(origin_ + ": missing required key '" + key + "' in [" + section +
                                  "]");
            return fallback;
        }
        return to_int(section, key, sections_.at(section).at(key));
    }

    double real(const std::string& section, const std::string& key, double fallback) const {
        if (!has(section, key)) return fallback;
        const Entry& e = sections_.at(section).at(key);
        char* end = nullptr;
        double v = std::strtod(e.value.c_str(), &end);
        if (end != e.value.c_str() + e.value.size() || e.value.empty())
            throw ConfigError(at_line(e) + ": '" + key + "' expects a number, got '" + e.value + "'");
        return v;
    }

    bool boolean(const std::string& section, const std::string& key, bool fallback) const {
        if (!has(section, key)) return fallback;
        const Entry& e = sections_.at(section).at(key);
        if (e.value == "true" || e.value == "1") return true;
        if (e.value == "false" || e.value == "0") return false;
        throw ConfigError(at_line(e) + ": '" + key + "' expects true/false, got '" + e.value + "'");
    }

    template <typename T, typename Convert>
    std::vector<T> list(const std::string& section, const std::string& key, Convert convert) const {
        const Entry& e = sections_.at(section).at(key);
        std::vector<T> out;
        std::stringstream ss(str(section, key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty())
                throw ConfigError(at_line(e) + ": empty element in '" + key + "' list");
            out.push_back(convert(item, e));
        }
        if (out.empty()) throw ConfigError(at_line(e) + ": '" + key + "' list is empty");
        return out;
    }

    std::string at_line(const Entry& e) const {
        return origin_ + " line " + std::to_string(e.line);
    }

    long long to_int(const std::string& section, const std::string& key, const Entry& e) const {
        (void)section;
        char* end = nullptr;
        long long v = std::strtoll(e.value.c_str(), &end, 10);
        if (end != e.value.c_str() + e.value.size() || e.value.empty())
            throw ConfigError(at_line(e) + ": '" + key + "' expects an integer, got '" + e.value +
                              "'");
        return v;
    }

private:
    const Sections& sections_;
    std::string origin_;
};

std::string hash_hex(const std::string& text) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (char ch : text) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001B3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    Sections sections = parse_ini(text, origin);

    for (const auto& [name, entries] : sections) {
        auto known = schema().find(name);
        if (known == schema().end())
            throw ConfigError(origin + ": unknown section [" + name + "]");
        for (const auto& [key, entry] : entries)
            if (!known->second.count(key))
                throw ConfigError(origin + " line " + std::to_string(entry.line) +
                                  ": unknown key '" + key + "' in [" + name + "]");
    }

    Reader r(sections, origin);
    RunConfig cfg;
    cfg.raw_text = text;
    cfg.config_hash = hash_hex(text);

    cfg.model_kind = r.str("run", "model");
    if (cfg.model_kind != "mlp" && cfg.model_kind != "rbm" && cfg.model_kind != "nade")
        throw ConfigError(origin + ": model must be mlp, rbm, or nade, got '" + cfg.model_kind + "'");
    cfg.sweep_mode = r.str("run", "sweep");
    if (cfg.sweep_mode != "fixed_hidden" && cfg.sweep_mode != "fixed_memory")
        throw ConfigError(origin + ": sweep must be fixed_hidden or fixed_memory");
    cfg.methods = r.list<Method>("run", "methods", [&](const std::string& s, const Entry& e) {
        try {
            return method_from_name(s);
        } catch (const ConfigError&) {
            throw ConfigError(r.at_line(e) + ": unknown method '" + s + "'");
        }
    });
    cfg.bits = r.list<int>("run", "bits", [&](const std::string& s, const Entry& e) {
        char* end = nullptr;
        long v = std::strtol(s.c_str(), &end, 10);
        if (end != s.c_str() + s.size() || v < 2 || v > 62)
            throw ConfigError(r.at_line(e) + ": bits entries must be integers in [2,62], got '" +
                              s + "'");
        return static_cast<int>(v);
    });
    cfg.seeds = r.list<std::uint64_t>("run", "seeds", [&](const std::string& s, const Entry& e) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (end != s.c_str() + s.size())
            throw ConfigError(r.at_line(e) + ": seeds must be integers, got '" + s + "'");
        return static_cast<std::uint64_t>(v);
    });
    cfg.output_dir = r.str("run", "output_dir");
    cfg.workers = static_cast<int>(r.integer("run", "workers", 1));
    if (cfg.workers < 1) throw ConfigError(origin + ": workers must be >= 1");

    std::string source = r.str("data", "source");
    if (source == "idx") cfg.source = DataSource::Idx;
    else if (source == "libsvm") cfg.source = DataSource::Libsvm;
    else if (source == "digits") cfg.source = DataSource::Digits;
    else if (source == "patterns") cfg.source = DataSource::Patterns;
    else throw ConfigError(origin + ": data source must be idx, libsvm, digits, or patterns");

    cfg.data_dir = r.str_or("data", "data_dir", ".");
    if (cfg.source == DataSource::Idx) {
        cfg.train_images = r.str("data", "train_images");
        cfg.train_labels = r.str("data", "train_labels");
        cfg.test_images = r.str("data", "test_images");
        cfg.test_labels = r.str("data", "test_labels");
    } else if (cfg.source == DataSource::Libsvm) {
        cfg.train_path = r.str("data", "train_path");
        cfg.test_path = r.str("data", "test_path");
        cfg.n_features = static_cast<int>(r.integer("data", "n_features", 0, true));
        if (cfg.n_features < 1) throw ConfigError(origin + ": n_features must be >= 1");
    }
    cfg.train_examples = static_cast<int>(r.integer("data", "train_examples", cfg.train_examples));
    cfg.test_examples = static_cast<int>(r.integer("data", "test_examples", cfg.test_examples));
    cfg.noise = r.real("data", "noise", cfg.noise);
    cfg.max_shift = static_cast<int>(r.integer("data", "max_shift", cfg.max_shift));
    cfg.features = static_cast<int>(r.integer("data", "features", cfg.features));
    cfg.classes = static_cast<int>(r.integer("data", "classes", cfg.classes));
    cfg.distinct_bits = static_cast<int>(r.integer("data", "distinct_bits", cfg.distinct_bits));
    cfg.generator_seed = static_cast<std::uint64_t>(r.integer("data", "generator_seed", 11));
    cfg.do_binarize = r.boolean("data", "binarize", true);
    cfg.binarize_threshold = r.real("data", "binarize_threshold", 0.5);
    cfg.train_subsample = static_cast<int>(r.integer("data", "train_subsample", 0));
    cfg.test_subsample = static_cast<int>(r.integer("data", "test_subsample", 0));
    cfg.subsample_seed = static_cast<std::uint64_t>(r.integer("data", "subsample_seed", 7));

    cfg.hidden_size = static_cast<int>(r.integer("model", "hidden_size", 0));
    cfg.total_bits = r.integer("model", "total_bits", 0);
    if (cfg.sweep_mode == "fixed_hidden" && cfg.hidden_size < 1)
        throw ConfigError(origin + ": fixed_hidden sweep requires hidden_size >= 1");
    if (cfg.sweep_mode == "fixed_memory") {
        if (cfg.total_bits < 1)
            throw ConfigError(origin + ": fixed_memory sweep requires total_bits >= 1");
        if (cfg.methods.size() != 1)
            throw ConfigError(origin + ": fixed_memory sweep takes exactly one method");
    }
    cfg.quantize_biases = r.boolean("model", "quantize_biases", false);
    cfg.coarse_levels_pow2 = r.boolean("model", "coarse_levels_pow2", false);
    cfg.kmeans_center_bits = static_cast<int>(r.integer("model", "kmeans_center_bits", 32));
    if (cfg.kmeans_center_bits < 1)
        throw ConfigError(origin + ": kmeans_center_bits must be >= 1");
    cfg.count_all_matrices = r.boolean("model", "count_all_matrices", false);

    cfg.learning_rate = r.real("train", "learning_rate", 0.1);
    if (cfg.learning_rate <= 0.0) throw ConfigError(origin + ": learning_rate must be > 0");
    cfg.epochs = static_cast<int>(r.integer("train", "epochs", 10));
    if (cfg.epochs < 1) throw ConfigError(origin + ": epochs must be >= 1");
    cfg.batch_size = static_cast<int>(r.integer("train", "batch_size", 100));
    if (cfg.batch_size < 1) throw ConfigError(origin + ": batch_size must be >= 1");
    cfg.eval_every = static_cast<int>(r.integer("train", "eval_every", 1));
    if (cfg.eval_every < 1) throw ConfigError(origin + ": eval_every must be >= 1");
    cfg.val_fraction = r.real("train", "val_fraction", 0.0);
    if (cfg.val_fraction < 0.0 || cfg.val_fraction >= 1.0)
        throw ConfigError(origin + ": val_fraction must be in [0,1)");

    cfg.gibbs_steps = static_cast<int>(r.integer("rbm", "gibbs_steps", 15));
    cfg.sample_passes = static_cast<int>(r.integer("rbm", "sample_passes", 3000));
    cfg.sample_record_every = static_cast<int>(r.integer("rbm", "sample_record_every", 1000));
    cfg.sample_chains = static_cast<int>(r.integer("rbm", "sample_chains", 4));
    if (cfg.gibbs_steps < 0) throw ConfigError(origin + ": gibbs_steps must be >= 0");
    if (cfg.sample_record_every < 1)
        throw ConfigError(origin + ": sample_record_every must be >= 1");

    if (cfg.model_kind == "mlp" && cfg.source == DataSource::Idx && cfg.train_labels.empty())
        throw ConfigError(origin + ": mlp on idx data needs label files");
    return cfg;
}

RunConfig read_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path);
}

}  // namespace lowres
