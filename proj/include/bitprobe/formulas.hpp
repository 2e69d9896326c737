#pragma once
// Closed-form block sizes used by the default constructors, and the
// reference lower-bound values reported by the bench tables.

#include <cstdint>
#include <optional>

namespace bitprobe {

/// lg = log base 2, evaluated in long double.
long double lg2(long double x);

/// Per-array size of the two-probe scheme: ceil(4 * m^(1 - 1/(4n+1))).
std::uint64_t two_probe_array_size(std::uint64_t m, std::uint64_t n);

/// Block size of the three-probe scheme: ceil(500 * sqrt(m * n * lg(2m/n))).
std::uint64_t three_probe_block_size(std::uint64_t m, std::uint64_t n);

/// Block size of the non-adaptive scheme (odd t >= 5):
/// ceil(60 * m^(2/(t-1)) * n^(1 - 2/(t-1)) * lg(2m/n)).
std::uint64_t nonadaptive_block_size(std::uint64_t m, std::uint64_t n, std::uint64_t t);

/// Block size of the composed adaptive scheme (odd t >= 5):
/// ceil(exp(e^(2t) - t) * m^(2/(t+1)) * n^(1 - 2/(t+1)) * lg m).
/// The leading constant overflows every machine float for t >= 5, so the
/// result is nullopt whenever it is not representable; callers then either
/// fall back to a characteristic vector or require an explicit override.
std::optional<std::uint64_t> adaptive_block_size(std::uint64_t m, std::uint64_t n,
                                                 std::uint64_t t);

/// Reference two-probe lower bound (1/11) * m^(1 - 1/floor(n/4)); requires n >= 4.
double two_probe_lower_bound(std::uint64_t m, std::uint64_t n);

/// Reference general lower bound (1/15) * m^((1/(t-1)) * (1 - 4^t/n)).
double multi_probe_lower_bound(std::uint64_t m, std::uint64_t n, std::uint64_t t);

}  // namespace bitprobe
