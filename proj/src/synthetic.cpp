#include "lowres/synthetic.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

#include "lowres/rng.hpp"

namespace lowres {

namespace {

// 5x7 digit glyphs, one string per row, '#' = on.
constexpr std::array<std::array<const char*, 7>, 10> kDigitGlyphs = {{
    {" ### ", "#   #", "#  ##", "# # #", "##  #", "#   #", " ### "},  // 0
    {"  #  ", " ##  ", "  #  ", "  #  ", "  #  ", "  #  ", " ### "},  // 1
    {" ### ", "#   #", "    #", "   # ", "  #  ", " #   ", "#####"},  // 2
    {"#####", "   # ", "  #  ", "   # ", "    #", "#   #", " ### "},  // 3
    {"   # ", "  ## ", " # # ", "#  # ", "#####", "   # ", "   # "},  // 4
    {"#####", "#    ", "#### ", "    #", "    #", "#   #", " ### "},  // 5
    {"  ## ", " #   ", "#    ", "#### ", "#   #", "#   #", " ### "},  // 6
    {"#####", "    #", "   # ", "  #  ", " #   ", " #   ", " #   "},  // 7
    {" ### ", "#   #", "#   #", " ### ", "#   #", "#   #", " ### "},  // 8
    {" ### ", "#   #", "#   #", " ####", "    #", "   # ", " ##  "},  // 9
}};

constexpr int kGlyphW = 5;
constexpr int kGlyphH = 7;
constexpr int kScale = 3;

void render_digit(int digit, int image_size, int dx, int dy, bool dilate, double noise,
                  RngStream& rng, double* out) {
    std::fill(out, out + static_cast<std::size_t>(image_size) * image_size, 0.0);
    auto set = [&](int x, int y) {
        if (x >= 0 && x < image_size && y >= 0 && y < image_size)
            out[static_cast<std::size_t>(y) * image_size + x] = 1.0;
    };
    for (int gy = 0; gy < kGlyphH; ++gy)
        for (int gx = 0; gx < kGlyphW; ++gx) {
            if (kDigitGlyphs[digit][gy][gx] != '#') continue;
            for (int sy = 0; sy < kScale; ++sy)
                for (int sx = 0; sx < kScale; ++sx)
                    set(dx + gx * kScale + sx, dy + gy * kScale + sy);
        }
    if (dilate) {
        std::vector<double> base(out, out + static_cast<std::size_t>(image_size) * image_size);
        for (int y = 0; y < image_size; ++y)
            for (int x = 0; x < image_size; ++x) {
                if (base[static_cast<std::size_t>(y) * image_size + x] == 0.0) continue;
                set(x + 1, y);
                set(x, y + 1);
            }
    }
    for (int i = 0; i < image_size * image_size; ++i)
        if (rng.next() < noise) out[i] = 1.0 - out[i];
}

}  // namespace

Dataset make_digit_corpus(const DigitCorpusOptions& options) {
    if (options.examples < 1) throw std::invalid_argument("digit corpus: examples < 1");
    if (options.image_size < kGlyphW * kScale + 1 || options.image_size < kGlyphH * kScale + 1)
        throw std::invalid_argument("digit corpus: image too small for the glyphs");

    const int size = options.image_size;
    const int cx = (size - kGlyphW * kScale) / 2;
    const int cy = (size - kGlyphH * kScale) / 2;

    Dataset out;
    out.name = "digit-corpus";
    out.n_classes = 10;
    out.inputs = Matrix(options.examples, size * size);
    out.labels.resize(options.examples);
    RngStream root(options.seed, fnv1a64("digit-corpus"));
    // Deterministic class mixing: label stream separate from pixel streams.
    RngStream label_rng = root.derive(1);
    for (int i = 0; i < options.examples; ++i) {
        int digit = static_cast<int>(label_rng.next_below(10));
        RngStream rng = root.derive(1000 + static_cast<std::uint64_t>(i));
        auto shift = [&](int center, int lo_cap, int hi_cap) {
            int span = 2 * options.max_shift + 1;
            int v = center - options.max_shift + static_cast<int>(rng.next_below(span));
            return std::clamp(v, lo_cap, hi_cap);
        };
        int dx = shift(cx, 0, size - kGlyphW * kScale);
        int dy = shift(cy, 0, size - kGlyphH * kScale);
        bool dilate = rng.next() < options.dilate_prob;
        render_digit(digit, size, dx, dy, dilate, options.noise, rng,
                     out.inputs.data() + static_cast<std::size_t>(i) * size * size);
        out.labels[i] = digit;
    }
    return out;
}

std::pair<IdxTensor, IdxTensor> digit_corpus_idx(const DigitCorpusOptions& options) {
    Dataset d = make_digit_corpus(options);
    const auto n = static_cast<std::uint32_t>(d.examples());
    const auto size = static_cast<std::uint32_t>(options.image_size);

    IdxTensor images;
    images.type_code = 0x08;
    images.dims = {n, size, size};
    images.data.resize(d.inputs.size());
    for (std::size_t i = 0; i < d.inputs.size(); ++i)
        images.data[i] = d.inputs[i] != 0.0 ? 255 : 0;

    IdxTensor labels;
    labels.type_code = 0x08;
    labels.dims = {n};
    labels.data.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        labels.data[i] = static_cast<std::uint8_t>(d.labels[i]);
    return {std::move(images), std::move(labels)};
}

Dataset make_pattern_task(const PatternTaskOptions& options) {
    if (options.examples < 1 || options.features < 1 || options.classes < 2)
        throw std::invalid_argument("pattern task: bad sizes");
    if (options.distinct_bits > options.features)
        throw std::invalid_argument("pattern task: distinct_bits > features");

    RngStream root(options.seed, fnv1a64("pattern-task"));
    RngStream proto_rng = root.derive(1);
    std::vector<double> base(options.features);
    for (double& b : base) b = proto_rng.next() < 0.5 ? 1.0 : 0.0;

    // Each class flips its own random feature subset of the shared base.
    std::vector<std::vector<double>> prototypes(options.classes, base);
    for (int c = 0; c < options.classes; ++c) {
        std::vector<int> idx(options.features);
        for (int f = 0; f < options.features; ++f) idx[f] = f;
        for (int i = options.features - 1; i > 0; --i) {
            auto j = static_cast<int>(proto_rng.next_below(static_cast<std::uint64_t>(i) + 1));
            std::swap(idx[i], idx[j]);
        }
        for (int b = 0; b < options.distinct_bits; ++b)
            prototypes[c][idx[b]] = 1.0 - prototypes[c][idx[b]];
    }

    Dataset out;
    out.name = "pattern-task";
    out.n_classes = options.classes;
    out.inputs = Matrix(options.examples, options.features);
    out.labels.resize(options.examples);
    RngStream label_rng = root.derive(2);
    for (int i = 0; i < options.examples; ++i) {
        int c = static_cast<int>(label_rng.next_below(options.classes));
        RngStream rng = root.derive(1000 + static_cast<std::uint64_t>(i));
        for (int f = 0; f < options.features; ++f) {
            double v = prototypes[c][f];
            if (rng.next() < options.noise) v = 1.0 - v;
            out.inputs.at(i, f) = v;
        }
        out.labels[i] = c;
    }
    return out;
}

}  // namespace lowres
