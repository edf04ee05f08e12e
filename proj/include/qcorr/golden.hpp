#pragma once

// Exact arithmetic in Z[tau] and Q(tau), tau = (1 + sqrt 5) / 2.
//
// tau^2 = tau + 1, tau' = 1 - tau = -1/tau.  Every element is stored as
// integer coordinates; floating values are derived on demand.

#include <cstdint>
#include <compare>
#include <functional>
#include <string>

namespace qcorr {

inline constexpr long double kTau = 1.618033988749894848204586834365638118L;
inline constexpr long double kTauConj = -0.618033988749894848204586834365638118L;
inline constexpr long double kSqrt5 = 2.236067977499789696409173668731276235L;

/// Sign of p + q*tau, computed exactly.
int golden_sign(__int128 p, __int128 q);

/// Element u + v*tau of the module Z + Z tau.
struct QuadLatticePoint {
  std::int64_t u = 0;
  std::int64_t v = 0;

  constexpr QuadLatticePoint operator+(QuadLatticePoint o) const { return {u + o.u, v + o.v}; }
  constexpr QuadLatticePoint operator-(QuadLatticePoint o) const { return {u - o.u, v - o.v}; }
  constexpr QuadLatticePoint operator-() const { return {-u, -v}; }
  constexpr bool operator==(const QuadLatticePoint&) const = default;

  /// Lexicographic on (u, v); used for deterministic table ordering.
  constexpr auto lex(const QuadLatticePoint& o) const {
    if (auto c = u <=> o.u; c != 0) return c;
    return v <=> o.v;
  }

  bool is_zero() const { return u == 0 && v == 0; }
  long double physical() const { return static_cast<long double>(u) + static_cast<long double>(v) * kTau; }
  long double conjugate() const { return static_cast<long double>(u) + static_cast<long double>(v) * kTauConj; }
};

/// Exact comparison of physical values.
inline int compare_physical(QuadLatticePoint a, QuadLatticePoint b) {
  return golden_sign(static_cast<__int128>(a.u) - b.u, static_cast<__int128>(a.v) - b.v);
}

struct PhysicalLess {
  bool operator()(QuadLatticePoint a, QuadLatticePoint b) const { return compare_physical(a, b) < 0; }
};

struct LexLess {
  bool operator()(QuadLatticePoint a, QuadLatticePoint b) const { return a.lex(b) < 0; }
};

struct QuadLatticePointHash {
  std::size_t operator()(QuadLatticePoint p) const noexcept {
    auto h = static_cast<std::uint64_t>(p.u) * 0x9E3779B97F4A7C15ull;
    h ^= static_cast<std::uint64_t>(p.v) + 0xC2B2AE3D27D4EB4Full + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

/// Element (a + b*tau) / d of Q(tau), kept reduced with d > 0.
/// Arithmetic throws std::overflow_error rather than wrapping.
class QuadRational {
 public:
  constexpr QuadRational() = default;
  QuadRational(std::int64_t a, std::int64_t b = 0, std::int64_t d = 1);
  static QuadRational tau() { return {0, 1, 1}; }
  static QuadRational from(QuadLatticePoint p) { return {p.u, p.v, 1}; }

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t d() const { return d_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  long double value() const;
  double to_double() const { return static_cast<double>(value()); }

  /// Galois conjugate tau -> tau'.
  QuadRational conjugate() const;

  QuadRational operator+(const QuadRational& o) const;
  QuadRational operator-(const QuadRational& o) const;
  QuadRational operator-() const;
  QuadRational operator*(const QuadRational& o) const;
  QuadRational operator/(const QuadRational& o) const;

  int sign() const;
  std::strong_ordering operator<=>(const QuadRational& o) const;
  bool operator==(const QuadRational& o) const = default;

  /// Canonical literal, e.g. "-1", "3/2", "-1+tau", "(1+2*tau)/5".
  std::string to_string() const;

 private:
  static QuadRational make(__int128 a, __int128 b, __int128 d);

  std::int64_t a_ = 0;
  std::int64_t b_ = 0;
  std::int64_t d_ = 1;
};

/// Star (conjugate) value of a lattice point as an exact field element.
inline QuadRational star_value(QuadLatticePoint p) { return QuadRational(p.u, p.v).conjugate(); }

/// Parses arithmetic over decimals and the symbol "tau" (+ - * / parentheses).
/// Throws ParameterError on malformed input or division by zero.
QuadRational parse_golden_expression(const std::string& text);

std::string to_string(QuadLatticePoint p);

}  // namespace qcorr
