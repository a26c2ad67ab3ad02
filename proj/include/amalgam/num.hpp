#pragma once

#include <cstdint>
#include <limits>

namespace amalgam {

// Saturating arithmetic for predicted group orders: the closing bound grows
// exponentially in the window length, so predictions clamp at the maximum
// instead of wrapping.  A saturated prediction can still be compared against
// an enumeration cap, which is always far below the clamp.
inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t sat_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    out = sat_mul(out, base);
    if (out == std::numeric_limits<std::uint64_t>::max()) return out;
  }
  return out;
}

}  // namespace amalgam
