#pragma once

// Exact pattern statistics of residue sets, rigid-motion equivalence, and the
// thinned Fibonacci sets built from a residue set.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/correlations.hpp"
#include "qcorr/pointsets.hpp"
#include "qcorr/schemes.hpp"

namespace qcorr {

/// Nonempty subset of Z/N.
class ResidueSet {
 public:
  ResidueSet(std::int64_t modulus, std::vector<std::int64_t> elems);

  std::int64_t modulus() const { return window_.modulus(); }
  const std::vector<std::int64_t>& elems() const { return window_.elems(); }
  std::size_t size() const { return window_.size(); }
  bool contains(std::int64_t r) const { return window_.contains(r); }
  const ResidueWindow& window() const { return window_; }

  /// x -> sign x + t applied elementwise.
  ResidueSet transformed(int sign, std::int64_t t) const;

  bool operator==(const ResidueSet&) const = default;

 private:
  ResidueWindow window_;
};

/// "A", "B" or a residue-set literal such as "{0,7,8}@32".
ResidueSet parse_residue_set(const std::string& text);
std::string to_string(const ResidueSet& s);

/// The pair A, B in Z/32.
std::pair<ResidueSet, ResidueSet> cyclotomic_pair();

using ResidueTuple = std::vector<std::int64_t>;

/// count(r_1..r_{n-1}) = #{t : t, t + r_1, ..., t + r_{n-1} all in S} for
/// every nondecreasing tuple 0 <= r_1 <= ... <= r_{n-1} < N.
struct PatternTable {
  std::int64_t modulus = 0;
  int order = 2;
  std::size_t set_size = 0;
  std::map<ResidueTuple, std::int64_t> counts;

  /// Count of an arbitrary tuple; entries are reduced and sorted first.
  std::int64_t count(ResidueTuple r) const;
  double frequency(const ResidueTuple& r) const { return static_cast<double>(count(r)) / static_cast<double>(modulus); }
  std::int64_t total() const;
};

PatternTable pattern_table(const ResidueSet& s, int order);

/// CSV with columns r_1..r_{n-1},count,frequency.
void write_pattern_csv(std::ostream& out, const PatternTable& t);

struct TableComparison {
  bool equal = true;
  std::optional<ResidueTuple> witness;  // first differing tuple
  std::int64_t left = 0;
  std::int64_t right = 0;
  std::size_t differing = 0;
};

TableComparison tables_equal(const PatternTable& t1, const PatternTable& t2);

struct RigidMotion {
  int sign = 1;
  std::int64_t shift = 0;
  bool operator==(const RigidMotion&) const = default;
};

/// First x -> +-x + t (sign + before -, then t ascending) carrying S onto T.
std::optional<RigidMotion> rigid_equivalent(const ResidueSet& s, const ResidueSet& t);

/// Model set of w x S in the combined scheme; cross-checked against the
/// plain Fibonacci patch filtered by u mod N in S.
PointSet thinned_model_set(const IntervalUnion& w, const ResidueSet& s, const Region& region);

/// The integer deck tables of S: I1(w) = #S n (w + S), I2(w1, w2) = #S n (w1 + S) n (w2 + S).
struct ResidueDeck {
  std::int64_t modulus = 0;
  std::vector<std::int64_t> I1;
  std::vector<std::int64_t> I2;  // row-major
  bool operator==(const ResidueDeck&) const = default;
};
ResidueDeck residue_deck(const ResidueSet& s);

/// Frequency of {0, x_1, ..., x_n} in the model set of w x S, as the product of
/// the real window overlap and the residue pattern frequency.
double product_frequency(const IntervalUnion& w, const ResidueSet& s, const Pattern& pattern);

struct ProductCorrelationRow {
  Pattern pattern;
  double exact_1 = 0;
  double exact_2 = 0;
  double empirical_1 = 0;
  double empirical_2 = 0;
};

struct ProductCorrelationReport {
  std::vector<ProductCorrelationRow> rows;
  double max_exact_difference = 0;
  /// max over rows and both sets of |empirical - exact| - (rel * exact + abs);
  /// nonpositive when every row is within the allowance
  double worst_empirical_excess = -std::numeric_limits<double>::infinity();
  /// max over rows and both sets of |empirical - exact| / exact
  double max_empirical_relative = 0;
  /// max over rows of |empirical_1 - empirical_2| / exact
  double max_empirical_gap = 0;
  bool exact_equal(double tol) const { return max_exact_difference <= tol; }
};

/// Exact (product formula) and empirical (patch of radius R/2) frequencies of
/// each pattern for the thinned sets of S1 and S2.  rel and abs define the
/// empirical allowance rel * exact + abs recorded in worst_empirical_excess.
ProductCorrelationReport product_correlation_check(const IntervalUnion& w, const ResidueSet& s1, const ResidueSet& s2,
                                                   const std::vector<Pattern>& patterns, double R = 1e4,
                                                   double rel = 0.02, double abs = 1e-3);

/// 3-point patterns {0, x, y} with |x|, |y| <= cutoff whose real overlap is
/// nonempty and whose residue tuple has a nonzero count for S.
std::vector<Pattern> product_patterns(const IntervalUnion& w, const ResidueSet& s, double cutoff);

/// Multiset of exact gaps between successive points.
std::map<QuadLatticePoint, std::int64_t, LexLess> gap_multiset(const PointSet& ps);

}  // namespace qcorr
