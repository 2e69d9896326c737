#include "bitprobe/bit_memory.hpp"

#include <stdexcept>
#include <string>

namespace bitprobe {

void BitMemory::check(std::size_t i) const {
  if (i >= len_)
    throw std::out_of_range("bit index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(len_) + ")");
}

std::vector<std::uint8_t> BitMemory::to_bytes() const {
  std::vector<std::uint8_t> out((len_ + 7) / 8, 0);
  for (std::size_t i = 0; i < len_; ++i)
    if ((words_[i >> 6] >> (i & 63)) & 1ULL) out[i >> 3] |= static_cast<std::uint8_t>(1U << (i & 7));
  return out;
}

BitMemory BitMemory::from_bytes(std::span<const std::uint8_t> bytes, std::size_t len) {
  if (bytes.size() != (len + 7) / 8)
    throw std::invalid_argument("byte payload size does not match bit length");
  BitMemory mem(len);
  for (std::size_t i = 0; i < len; ++i)
    if ((bytes[i >> 3] >> (i & 7)) & 1U) mem.set(i, true);
  // trailing pad bits must be zero
  for (std::size_t i = len; i < bytes.size() * 8; ++i)
    if ((bytes[i >> 3] >> (i & 7)) & 1U)
      throw std::invalid_argument("nonzero padding bits in packed payload");
  return mem;
}

}  // namespace bitprobe
