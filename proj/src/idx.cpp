#include "lowres/idx.hpp"

#include <fstream>

#include "lowres/errors.hpp"

namespace lowres {

std::size_t IdxTensor::element_count() const {
    std::size_t n = 1;
    for (std::uint32_t d : dims) n *= d;
    return dims.empty() ? 0 : n;
}

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 4)
        throw DataError(DataErrorCode::Truncated,
                        "idx: header needs 4 bytes, got " + std::to_string(bytes.size()));
    if (bytes[0] != 0 || bytes[1] != 0)
        throw DataError(DataErrorCode::BadMagic, "idx: bad magic bytes");
    IdxTensor t;
    t.type_code = bytes[2];
    if (t.type_code != 0x08)
        throw DataError(DataErrorCode::UnsupportedType,
                        "idx: unsupported type code " + std::to_string(int{t.type_code}) +
                            " (only unsigned byte, code 8, is supported)");
    std::size_t ndims = bytes[3];
    std::size_t offset = 4 + 4 * ndims;
    if (bytes.size() < offset)
        throw DataError(DataErrorCode::Truncated,
                        "idx: dimension table needs " + std::to_string(offset) +
                            " bytes, got " + std::to_string(bytes.size()));
    for (std::size_t d = 0; d < ndims; ++d) {
        std::size_t p = 4 + 4 * d;
        t.dims.push_back((std::uint32_t{bytes[p]} << 24) | (std::uint32_t{bytes[p + 1]} << 16) |
                         (std::uint32_t{bytes[p + 2]} << 8) | std::uint32_t{bytes[p + 3]});
    }
    std::size_t expected = offset + t.element_count();
    if (bytes.size() != expected)
        throw DataError(DataErrorCode::Truncated,
                        "idx: payload expects " + std::to_string(expected) +
                            " bytes total, got " + std::to_string(bytes.size()));
    t.data.assign(bytes.begin() + offset, bytes.end());
    return t;
}

std::vector<std::uint8_t> serialize_idx(const IdxTensor& tensor) {
    std::vector<std::uint8_t> out;
    out.reserve(4 + 4 * tensor.dims.size() + tensor.data.size());
    out.push_back(0);
    out.push_back(0);
    out.push_back(tensor.type_code);
    out.push_back(static_cast<std::uint8_t>(tensor.dims.size()));
    for (std::uint32_t d : tensor.dims) {
        out.push_back(static_cast<std::uint8_t>(d >> 24));
        out.push_back(static_cast<std::uint8_t>(d >> 16));
        out.push_back(static_cast<std::uint8_t>(d >> 8));
        out.push_back(static_cast<std::uint8_t>(d));
    }
    out.insert(out.end(), tensor.data.begin(), tensor.data.end());
    return out;
}

IdxTensor read_idx_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError(DataErrorCode::FileNotFound, "idx: cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return parse_idx(bytes);
}

void write_idx_file(const IdxTensor& tensor, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw DataError(DataErrorCode::FileNotFound, "idx: cannot write " + path);
    auto bytes = serialize_idx(tensor);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace lowres
