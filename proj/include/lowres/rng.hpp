#ifndef LOWRES_RNG_HPP
#define LOWRES_RNG_HPP

#include <cstdint>

namespace lowres {

// Counter-based uniform random stream. Every draw is a pure function of
// (seed, stream_id, counter), so identical configurations reproduce
// bit-identical sequences on any platform and independent streams can be
// handed out per weight matrix, per epoch, per batch without any shared
// state. There is deliberately no ambient/global generator in this library.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_id_(stream_id), counter_(0) {}

    // Uniform in [0,1); advances the counter.
    double next() { return at(counter_++); }

    // Uniform in [0,1) at an absolute counter position; does not advance.
    double at(std::uint64_t index) const {
        return static_cast<double>(word(index) >> 11) * 0x1.0p-53;
    }

    std::uint64_t next_u64() { return word(counter_++); }

    // Unbiased-enough bounded draw for shuffles (Lemire multiply-shift).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Independent stream derived from this one; the child starts at counter 0.
    RngStream derive(std::uint64_t sub_id) const {
        return RngStream(seed_, mix64(stream_id_ ^ mix64(sub_id ^ 0xD1B54A32D192ED03ull)));
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t counter() const { return counter_; }

    // SplitMix64 finalizer; also used as a general-purpose 64-bit hash
    // wherever deterministic stream ids are built from structured keys.
    static std::uint64_t mix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t word(std::uint64_t ctr) const {
        std::uint64_t h = mix64(seed_ ^ 0x243F6A8885A308D3ull);
        h = mix64(h ^ stream_id_);
        return mix64(h ^ ctr);
    }

    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_;
};

// Uniform draw in [0,1) advancing the stream. Thin named wrapper so call
// sites read like the update rules that consume it.
inline double uniform(RngStream& stream) { return stream.next(); }

// FNV-1a over a string, for stable stream ids keyed by parameter names.
inline std::uint64_t fnv1a64(const char* s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (; *s; ++s) {
        h ^= static_cast<unsigned char>(*s);
        h *= 0x100000001B3ull;
    }
    return h;
}

}  // namespace lowres

#endif
