#pragma once

// Pattern frequencies and k-point correlation measures of model sets.
//
// The frequency of the pattern {0, x_1, ..., x_n} in Lambda(W) equals
//   theta(W  n  (-x_1* + W)  n ... n  (-x_n* + W))
// and is independent of the translation of Lambda.  The exact route uses
// this formula; the empirical route counts occurrences in a generated patch.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/golden.hpp"
#include "qcorr/pointsets.hpp"
#include "qcorr/schemes.hpp"

namespace qcorr {

/// The pattern {0, x_1, ..., x_n}; zeros and repeats are dropped and the
/// remaining points sorted by physical position.
class Pattern {
 public:
  Pattern() = default;
  explicit Pattern(std::vector<QuadLatticePoint> points);

  const std::vector<QuadLatticePoint>& points() const { return points_; }
  std::size_t order() const { return points_.size(); }
  /// Smallest and largest physical offset including the base point 0.
  long double min_offset() const;
  long double max_offset() const;

  bool operator==(const Pattern&) const = default;

 private:
  std::vector<QuadLatticePoint> points_;
};

/// "{0,tau,1+tau}" style literal: comma-separated golden expressions that must
/// evaluate to lattice points.  A leading 0 is optional.
Pattern parse_pattern(const std::string& text);

/// Exact frequency from the window formula.
double freq_exact(const Scheme& scheme, const Window& w, const Pattern& pattern);

/// count{ y in Lambda n C_R : y + x_j in Lambda for all j } / R, with C_R the
/// centred cube [-R/2, R/2).  The patch region must cover C_R widened by the
/// pattern extent; otherwise a ParameterError names the required region.
double freq_empirical(const PointSet& ps, const Pattern& pattern, double R);
std::int64_t count_occurrences(const PointSet& ps, const Pattern& pattern, double R);

using DifferenceTuple = std::vector<QuadLatticePoint>;

struct TupleLess {
  bool operator()(const DifferenceTuple& a, const DifferenceTuple& b) const;
};

/// Point masses of gamma^(order) restricted to tuples with every physical
/// coordinate in [-cutoff, cutoff].
struct CorrelationMeasure {
  Scheme scheme;
  int order = 2;
  double cutoff = 0;
  double density = 0;
  std::map<DifferenceTuple, double, TupleLess> entries;

  double at(const DifferenceTuple& t) const;
};

/// Budget on the number of tuples correlation_measure() evaluates.
inline constexpr std::int64_t kMaxCorrelationTuples = 20'000'000;

/// Enumerates all difference tuples within the cutoff (the differences form
/// the model set of W - W) and records those with nonzero frequency.
CorrelationMeasure correlation_measure(const Scheme& scheme, const Window& w, int order, double cutoff);

/// Lattice points x with |physical(x)| <= cutoff and x* in the hull of W - W.
std::vector<QuadLatticePoint> difference_candidates(const Scheme& scheme, const Window& w, double cutoff);

struct AlmostPeriod {
  QuadLatticePoint t;
  double estimate = 0;  // dens((t + Lambda) xor Lambda) on [-R, R]
};

/// Candidates whose estimated symmetric-difference density is below eps.
std::vector<AlmostPeriod> almost_periods(const Scheme& scheme, const Window& w, double eps,
                                         const std::vector<QuadLatticePoint>& candidates, double R);

/// Lattice points with physical value in (0, search_radius].  For the golden
/// schemes these are dense, so only points whose star shift is shorter than
/// the window hull are listed; every other translate moves the window off
/// itself and has estimate 2 * density.
std::vector<QuadLatticePoint> default_almost_period_candidates(const Scheme& scheme, const Window& w,
                                                               double search_radius);

struct CorrelationComparison {
  bool equal = true;
  std::optional<DifferenceTuple> witness;
  double left = 0;
  double right = 0;
  std::string report;
};

/// Supports must match and frequencies agree within tol (tol = 0 is exact).
CorrelationComparison correlations_equal(const CorrelationMeasure& c1, const CorrelationMeasure& c2, double tol);

/// CSV with columns diff_1..diff_n,frequency; rows in lexicographic tuple order.
void write_correlation_csv(std::ostream& out, const CorrelationMeasure& c);

std::string format_coordinate(const Scheme& scheme, QuadLatticePoint p);

}  // namespace qcorr
