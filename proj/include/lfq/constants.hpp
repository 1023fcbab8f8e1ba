#pragma once

#include <cstdint>

namespace lfq {

inline constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

/// zeta_A(2) = q / (q - 1).
inline long double zeta_A2(std::uint32_t q) { return static_cast<long double>(q) / (q - 1); }

}  // namespace lfq
