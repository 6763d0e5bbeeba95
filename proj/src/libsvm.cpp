#include "lowres/libsvm.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "lowres/errors.hpp"

namespace lowres {

namespace {

struct SparseRow {
    std::string label;
    std::vector<std::pair<int, double>> entries;
};

bool numeric_label(const std::string& s) {
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end != s.c_str() && *end == '\0';
}

[[noreturn]] void fail(DataErrorCode code, int line_no, const std::string& what) {
    throw DataError(code, "libsvm line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Dataset parse_libsvm(const std::string& text, int n_features) {
    if (n_features < 1)
        throw DataError(DataErrorCode::BadArgument, "libsvm: n_features < 1");

    std::vector<SparseRow> rows;
    std::istringstream lines(text);
    std::string line;
    int line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        std::istringstream tokens(line);
        SparseRow row;
        if (!(tokens >> row.label)) continue;  // blank line
        std::string tok;
        int prev_index = 0;
        while (tokens >> tok) {
            auto colon = tok.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
                fail(DataErrorCode::MalformedToken, line_no, "bad token '" + tok + "'");
            char* end = nullptr;
            long index = std::strtol(tok.c_str(), &end, 10);
            if (end != tok.c_str() + colon)
                fail(DataErrorCode::MalformedToken, line_no, "bad index in '" + tok + "'");
            const char* vstart = tok.c_str() + colon + 1;
            double value = std::strtod(vstart, &end);
            if (end != tok.c_str() + tok.size())
                fail(DataErrorCode::MalformedToken, line_no, "bad value in '" + tok + "'");
            if (index <= prev_index)
                fail(DataErrorCode::NonIncreasingIndex, line_no,
                     "index " + std::to_string(index) + " not above " +
                         std::to_string(prev_index));
            if (index > n_features)
                fail(DataErrorCode::IndexOutOfRange, line_no,
                     "index " + std::to_string(index) + " exceeds n_features=" +
                         std::to_string(n_features));
            prev_index = static_cast<int>(index);
            row.entries.emplace_back(static_cast<int>(index) - 1, value);
        }
        rows.push_back(std::move(row));
    }

    // Contiguous 0-based classes, ordered numerically when possible.
    std::vector<std::string> labels;
    for (const auto& r : rows) labels.push_back(r.label);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    bool all_numeric = std::all_of(labels.begin(), labels.end(), numeric_label);
    if (all_numeric)
        std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
            return std::strtod(a.c_str(), nullptr) < std::strtod(b.c_str(), nullptr);
        });
    std::map<std::string, int> class_of;
    for (std::size_t i = 0; i < labels.size(); ++i) class_of[labels[i]] = static_cast<int>(i);

    Dataset out;
    out.inputs = Matrix(static_cast<int>(rows.size()), n_features);
    out.labels.resize(rows.size());
    out.n_classes = static_cast<int>(labels.size());
    out.label_names = labels;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out.labels[r] = class_of[rows[r].label];
        for (auto [c, v] : rows[r].entries) out.inputs.at(static_cast<int>(r), c) = v;
    }
    return out;
}

Dataset read_libsvm_file(const std::string& path, int n_features) {
    std::ifstream in(path);
    if (!in)
        throw DataError(DataErrorCode::FileNotFound, "libsvm: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    Dataset d = parse_libsvm(ss.str(), n_features);
    d.name = path;
    return d;
}

}  // namespace lowres
