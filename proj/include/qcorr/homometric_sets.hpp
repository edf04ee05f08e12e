#pragma once

// The homometric pair A, B in Z/32.  Both are the exponent
// sets of
//   p_A(x) = (1 - x^16)/(1 - x) (1 - x^3 + x^9)(1 - x + x^3 - x^4 + x^6)
//   p_B(x) = (1 - x^16)/(1 - x) (1 - x^3 + x^9)(1 - x^2 + x^3 - x^5 + x^6)
// and have equal 2- and 3-point pattern counts but are not related by any
// x -> +-x + t.  The expansions are checked at compile time below.

#include <array>
#include <cstdint>

namespace qcorr::homometric {

inline constexpr std::int64_t kModulus = 32;

inline constexpr std::array<std::int64_t, 16> kSetA = {0, 7, 8, 9, 12, 15, 17, 18, 19, 20, 21, 22, 26, 27, 29, 30};
inline constexpr std::array<std::int64_t, 16> kSetB = {0, 1, 8, 9, 10, 12, 13, 15, 18, 19, 20, 21, 22, 23, 27, 30};

// Coefficients in increasing degree.
inline constexpr std::array<int, 16> kGeometric16 = {1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
inline constexpr std::array<int, 10> kCommonFactor = {1, 0, 0, -1, 0, 0, 0, 0, 0, 1};
inline constexpr std::array<int, 7> kFactorA = {1, -1, 0, 1, -1, 0, 1};
inline constexpr std::array<int, 7> kFactorB = {1, 0, -1, 1, 0, -1, 1};

template <std::size_t P, std::size_t Q>
constexpr std::array<int, P + Q - 1> poly_multiply(const std::array<int, P>& p, const std::array<int, Q>& q) {
  std::array<int, P + Q - 1> r{};
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < Q; ++j) r[i + j] += p[i] * q[j];
  return r;
}

constexpr auto expand_factored(const std::array<int, 7>& last) {
  return poly_multiply(poly_multiply(kGeometric16, kCommonFactor), last);
}

template <std::size_t D>
constexpr bool is_indicator_of(const std::array<int, D>& coeffs, const std::array<std::int64_t, 16>& set) {
  std::size_t next = 0;
  for (std::size_t i = 0; i < D; ++i) {
    if (coeffs[i] == 0) continue;
    if (coeffs[i] != 1 || next >= set.size() || set[next] != static_cast<std::int64_t>(i)) return false;
    ++next;
  }
  return next == set.size();
}

static_assert(is_indicator_of(expand_factored(kFactorA), kSetA), "p_A expansion does not reproduce A");
static_assert(is_indicator_of(expand_factored(kFactorB), kSetB), "p_B expansion does not reproduce B");

}  // namespace qcorr::homometric
