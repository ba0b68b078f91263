#include "proxyvote/random_stream.hpp"

#include <cassert>

namespace proxyvote {

namespace {

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_(seed) {}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t tag, std::uint64_t a,
                                  std::uint64_t b) {
    // std::seed_seq's mixing is fully specified by the standard.
    std::seed_seq seq{lo32(seed), hi32(seed), lo32(tag), hi32(tag),
                      lo32(a),    hi32(a),    lo32(b),   hi32(b)};
    return RandomStream(seq);
}

double RandomStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::uniform_index(std::uint64_t bound) {
    assert(bound > 0);
    // Rejection sampling removes modulo bias.
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t x = engine_();
        if (x >= threshold) return x % bound;
    }
}

}  // namespace proxyvote
