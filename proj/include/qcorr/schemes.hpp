#pragma once

// Cut-and-project schemes with internal space R (Fibonacci), Z/N (periodic)
// or R x Z/N (combined), together with window geometry.
//
// Measures carry the scheme normalization, so the density of a model set
// equals the measure of its window with no extra prefactor:
//   Fibonacci    theta = Lebesgue / sqrt5
//   Periodic(N)  theta = counting / N
//   Combined(N)  theta = (Lebesgue / sqrt5) x (counting / N)

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcorr/golden.hpp"

namespace qcorr {

enum class SchemeKind { Fibonacci, Periodic, Combined };

struct Scheme {
  SchemeKind kind = SchemeKind::Fibonacci;
  std::int64_t modulus = 0;  // N for Periodic / Combined, 0 otherwise

  /// Divisor c with theta_H = (reference measure) / c.
  double normalization() const;
  bool has_real_part() const { return kind != SchemeKind::Periodic; }
  bool has_residue_part() const { return kind != SchemeKind::Fibonacci; }
  bool operator==(const Scheme&) const = default;
};

Scheme make_scheme(SchemeKind kind, std::optional<std::int64_t> modulus = std::nullopt);

/// "fibonacci", "periodic:32", "combined:32".
Scheme parse_scheme(const std::string& text);
std::string to_string(const Scheme& scheme);

// Internal points ----------------------------------------------------------

struct RealPoint {
  QuadRational y;
  bool operator==(const RealPoint&) const = default;
};

struct Residue {
  std::int64_t r = 0;
  std::int64_t modulus = 1;
  bool operator==(const Residue&) const = default;
};

struct ProductPoint {
  QuadRational y;
  std::int64_t r = 0;
  std::int64_t modulus = 1;
  bool operator==(const ProductPoint&) const = default;
};

using InternalPoint = std::variant<RealPoint, Residue, ProductPoint>;

Residue make_residue(std::int64_t r, std::int64_t modulus);
InternalPoint operator+(const InternalPoint& a, const InternalPoint& b);
InternalPoint operator-(const InternalPoint& a);

/// Star map L -> H.  The integer overload is only valid for Periodic schemes,
/// the lattice-point overload only for Fibonacci / Combined.
InternalPoint star(const Scheme& scheme, QuadLatticePoint p);
InternalPoint star(const Scheme& scheme, std::int64_t x);

// Windows ------------------------------------------------------------------

/// Half-open interval [lo, hi) with exact endpoints.
struct Interval {
  QuadRational lo;
  QuadRational hi;
  bool operator==(const Interval&) const = default;
};

/// Finite union of half-open intervals, kept sorted, disjoint and merged.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(std::vector<Interval> parts);
  static IntervalUnion single(QuadRational lo, QuadRational hi) { return IntervalUnion({{lo, hi}}); }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(const QuadRational& y) const;
  QuadRational length() const;
  /// Convex hull [min lo, max hi); requires nonempty.
  Interval hull() const;

  IntervalUnion translated(const QuadRational& t) const;
  IntervalUnion reflected() const;  // {-y : y in set}, kept half-open as [-hi, -lo)
  IntervalUnion intersect(const IntervalUnion& o) const;
  IntervalUnion unite(const IntervalUnion& o) const;

  bool operator==(const IntervalUnion&) const = default;

 private:
  std::vector<Interval> parts_;
};

/// Subset of Z/N.  May be empty (results of intersections).
class ResidueWindow {
 public:
  ResidueWindow() = default;
  ResidueWindow(std::int64_t modulus, std::vector<std::int64_t> elems);

  std::int64_t modulus() const { return modulus_; }
  const std::vector<std::int64_t>& elems() const { return elems_; }
  bool empty() const { return elems_.empty(); }
  bool contains(std::int64_t r) const;
  std::size_t size() const { return elems_.size(); }

  ResidueWindow translated(std::int64_t t) const;
  ResidueWindow intersect(const ResidueWindow& o) const;

  bool operator==(const ResidueWindow&) const = default;

 private:
  std::int64_t modulus_ = 1;
  std::vector<std::int64_t> elems_;
};

struct ProductWindow {
  IntervalUnion real;
  ResidueWindow residues;
  bool operator==(const ProductWindow&) const = default;
};

using Window = std::variant<IntervalUnion, ResidueWindow, ProductWindow>;

bool window_empty(const Window& w);
/// Throws ParameterError when the window kind does not fit the scheme.
void check_compatible(const Scheme& scheme, const Window& w);
bool window_contains(const Window& w, const InternalPoint& p);

double window_measure(const Scheme& scheme, const Window& w);
Window window_translate(const Window& w, const InternalPoint& t);
Window window_intersect(const Window& w1, const Window& w2);

/// Window literal grammar:
///   interval union   "[a,b)" joined with "u", e.g. "[0,1)u[1.5,2.25)"
///   residue set      "{0,7,8}@32"
///   product          "<interval union>x<residue set>"
///   empty            "empty"
/// Endpoints are expressions over decimals and "tau".  Aliases: "fib" is the
/// window [-1, 1/tau); "{A}" and "{B}" are the homometric pair mod 32.
Window parse_window(const std::string& text);
std::string to_string(const Window& w);

/// The empty window of the kind the scheme expects.
Window empty_window(const Scheme& scheme);

/// The window [-1, 1/tau) of the standard Fibonacci model set.
IntervalUnion fibonacci_window();

}  // namespace qcorr
