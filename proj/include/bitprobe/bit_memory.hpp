#pragma once
// Fixed-length addressable bit array: the data structure being probed.
// Out-of-range access is a hard error, never a default value.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bitprobe {

class BitMemory {
 public:
  BitMemory() = default;
  explicit BitMemory(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

  std::size_t size() const { return len_; }

  bool get(std::size_t i) const {
    check(i);
    return (words_[i >> 6] >> (i & 63)) & 1ULL;
  }

  void set(std::size_t i, bool b) {
    check(i);
    const std::uint64_t mask = 1ULL << (i & 63);
    if (b)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  /// Packed bytes, bit i at byte i/8 in position i mod 8; final byte zero-padded.
  std::vector<std::uint8_t> to_bytes() const;
  static BitMemory from_bytes(std::span<const std::uint8_t> bytes, std::size_t len);

  bool operator==(const BitMemory&) const = default;

 private:
  void check(std::size_t i) const;

  std::size_t len_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace bitprobe
