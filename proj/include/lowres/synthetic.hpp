#ifndef LOWRES_SYNTHETIC_HPP
#define LOWRES_SYNTHETIC_HPP

#include <cstdint>
#include <utility>

#include "lowres/dataset.hpp"
#include "lowres/idx.hpp"

namespace lowres {

// Deterministic 10-class corpus of rendered digit glyphs: a 5x7 bitmap font
// upscaled into image_size x image_size frames with per-example translation
// jitter, optional stroke dilation, and salt-and-pepper pixel noise. Binary
// pixels. Stands in for handwritten-digit data where the real corpus is not
// on disk; same shapes, same file format, same pipeline.
struct DigitCorpusOptions {
    int examples = 1000;
    int image_size = 28;
    int max_shift = 3;      // translation jitter around the centered placement
    double noise = 0.05;    // per-pixel flip probability
    double dilate_prob = 0.4;
    std::uint64_t seed = 1;
};

Dataset make_digit_corpus(const DigitCorpusOptions& options);

// The same corpus as a pair of IDX tensors (images, labels), byte-compatible
// with the classic handwritten-digit files.
std::pair<IdxTensor, IdxTensor> digit_corpus_idx(const DigitCorpusOptions& options);

// Deterministic n-class binary pattern task: every class flips its own
// distinct_bits feature subset of a shared base pattern, and examples flip
// each feature with probability noise. Class separation shrinks as
// distinct_bits falls, so capacity and weight resolution both matter.
struct PatternTaskOptions {
    int examples = 1000;
    int features = 64;
    int classes = 10;
    int distinct_bits = 16;
    double noise = 0.15;
    std::uint64_t seed = 1;
};

Dataset make_pattern_task(const PatternTaskOptions& options);

}  // namespace lowres

#endif
