#ifndef LOWRES_IDX_HPP
#define LOWRES_IDX_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lowres {

// IDX container (the MNIST file format): two zero magic bytes, a type code,
// a dimension count, big-endian uint32 dimension sizes, then the raw
// payload. Only the unsigned-byte type (0x08) is supported.
struct IdxTensor {
    std::uint8_t type_code = 0x08;
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;

    std::size_t element_count() const;
};

// Throws DataError with code BadMagic, UnsupportedType, or Truncated; the
// truncation message names expected vs actual byte counts.
IdxTensor parse_idx(std::span<const std::uint8_t> bytes);

// Inverse of parse_idx, byte-exact.
std::vector<std::uint8_t> serialize_idx(const IdxTensor& tensor);

IdxTensor read_idx_file(const std::string& path);
void write_idx_file(const IdxTensor& tensor, const std::string& path);

}  // namespace lowres

#endif
