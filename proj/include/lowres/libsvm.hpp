#ifndef LOWRES_LIBSVM_HPP
#define LOWRES_LIBSVM_HPP

#include <string>

#include "lowres/dataset.hpp"

namespace lowres {

// libsvm sparse text: one "label idx:val idx:val ..." line per example with
// 1-based, strictly increasing indices. Absent indices densify to zero;
// labels are remapped to contiguous 0-based classes in sorted order of the
// original label strings (numeric sort when all labels are numeric), with
// the originals kept in Dataset::label_names. Malformed tokens,
// non-increasing indices, and indices beyond n_features each throw a
// DataError naming the line.
Dataset parse_libsvm(const std::string& text, int n_features);

Dataset read_libsvm_file(const std::string& path, int n_features);

}  // namespace lowres

#endif
