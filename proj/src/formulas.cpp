#include "bitprobe/formulas.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bitprobe {

long double lg2(long double x) { return std::log2(x); }

namespace {

std::uint64_t ceil_to_u64(long double v, const char* what) {
  if (!(v > 0) || v > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
    throw std::overflow_error(std::string(what) + ": value out of range");
  return static_cast<std::uint64_t>(std::ceil(v));
}

}  // namespace

std::uint64_t two_probe_array_size(std::uint64_t m, std::uint64_t n) {
  if (m < 2 || n < 1) throw std::invalid_argument("two_probe_array_size: need m >= 2, n >= 1");
  const long double expo = 1.0L - 1.0L / (4.0L * n + 1.0L);
  return ceil_to_u64(4.0L * std::pow(static_cast<long double>(m), expo), "two_probe_array_size");
}

std::uint64_t three_probe_block_size(std::uint64_t m, std::uint64_t n) {
  if (m < 2 || n < 1 || n > m)
    throw std::invalid_argument("three_probe_block_size: need m >= 2, 1 <= n <= m");
  const long double inner =
      static_cast<long double>(m) * n * lg2(2.0L * m / static_cast<long double>(n));
  return ceil_to_u64(500.0L * std::sqrt(inner), "three_probe_block_size");
}

std::uint64_t nonadaptive_block_size(std::uint64_t m, std::uint64_t n, std::uint64_t t) {
  if (t < 5 || t % 2 == 0) throw std::invalid_argument("nonadaptive_block_size: need odd t >= 5");
  if (m < 2 || n < 1 || n > m)
    throw std::invalid_argument("nonadaptive_block_size: need m >= 2, 1 <= n <= m");
  const long double md = m, nd = n;
  const long double v = 60.0L * std::pow(md, 2.0L / (t - 1)) *
                        std::pow(nd, 1.0L - 2.0L / (t - 1)) * lg2(2.0L * md / nd);
  return ceil_to_u64(v, "nonadaptive_block_size");
}

std::optional<std::uint64_t> adaptive_block_size(std::uint64_t m, std::uint64_t n,
                                                 std::uint64_t t) {
  if (t < 5 || t % 2 == 0) throw std::invalid_argument("adaptive_block_size: need odd t >= 5");
  if (m < 2 || n < 1 || n > m)
    throw std::invalid_argument("adaptive_block_size: need m >= 2, 1 <= n <= m");
  // ln of the value; the constant exp(e^(2t) - t) dominates everything.
  const long double md = m, nd = n;
  const long double ln_v = (std::exp(2.0L * t) - t) +
                           (2.0L / (t + 1)) * std::log(md) +
                           (1.0L - 2.0L / (t + 1)) * std::log(nd) + std::log(lg2(md));
  if (ln_v > 43.0L)  // e^43 > 2^62: not representable as a usable size
    return std::nullopt;
  return ceil_to_u64(std::exp(ln_v), "adaptive_block_size");
}

double two_probe_lower_bound(std::uint64_t m, std::uint64_t n) {
  if (n < 4) throw std::invalid_argument("two_probe_lower_bound: need n >= 4");
  const double p = static_cast<double>(n / 4);
  return std::pow(static_cast<double>(m), 1.0 - 1.0 / p) / 11.0;
}

double multi_probe_lower_bound(std::uint64_t m, std::uint64_t n, std::uint64_t t) {
  if (t < 2 || n < 1) throw std::invalid_argument("multi_probe_lower_bound: need t >= 2, n >= 1");
  const double expo =
      (1.0 / static_cast<double>(t - 1)) * (1.0 - std::pow(4.0, static_cast<double>(t)) / n);
  return std::pow(static_cast<double>(m), expo) / 15.0;
}

}  // namespace bitprobe
