#pragma once
// Binary file formats. Scheme files (.bps) and memory files (.bpm) share a
// header shape: 4-byte magic, version byte, kind byte, then m, n, t, s,
// total_bits, seed as 64-bit little-endian words. Scheme files carry one
// address row per element; memory files carry the payload bits packed
// 8 per byte (bit i at byte i/8, position i mod 8, final byte zero-padded).

#include <string>

#include "bitprobe/bit_memory.hpp"
#include "bitprobe/scheme.hpp"

namespace bitprobe::io {

inline constexpr char kSchemeMagic[4] = {'B', 'P', 'S', '1'};
inline constexpr char kMemoryMagic[4] = {'B', 'P', 'M', '1'};
inline constexpr std::uint8_t kFormatVersion = 1;

void save_scheme(const Scheme& scheme, const std::string& path);
Scheme load_scheme(const std::string& path);

struct MemoryFile {
  SchemeParams params;  // copied from the scheme at store time
  BitMemory memory;
};

void save_memory(const BitMemory& memory, const SchemeParams& params, const std::string& path);
MemoryFile load_memory(const std::string& path);

}  // namespace bitprobe::io
