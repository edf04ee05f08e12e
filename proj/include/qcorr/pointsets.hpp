#pragma once

// Finite patches of model sets, enumerated exactly from the lattice.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/golden.hpp"
#include "qcorr/schemes.hpp"

namespace qcorr {

/// Closed interval [lo, hi] of the physical line.
struct Region {
  QuadRational lo;
  QuadRational hi;

  QuadRational length() const { return hi - lo; }
  bool contains(QuadLatticePoint p) const;
  bool contains(const Region& o) const { return lo <= o.lo && o.hi <= hi; }
  Region translated(QuadLatticePoint t) const;
  bool operator==(const Region&) const = default;
};

/// Region from floating bounds, rounded to multiples of 1e-6.
Region make_region(double lo, double hi);

/// A patch of the model set Lambda(window) on a region.  Periodic schemes
/// store integers as u with v = 0.  Points are sorted by physical position.
class PointSet {
 public:
  PointSet(Scheme scheme, Window window, Region region, std::vector<QuadLatticePoint> points);

  const Scheme& scheme() const { return scheme_; }
  const Window& window() const { return window_; }
  const Region& region() const { return region_; }
  const std::vector<QuadLatticePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  /// Points per unit length of the generating region.
  double density() const;

  bool operator==(const PointSet&) const = default;

 private:
  Scheme scheme_;
  Window window_;
  Region region_;
  std::vector<QuadLatticePoint> points_;
};

/// Upper bound on enumerated lattice rows before generate() gives up.
inline constexpr std::int64_t kMaxEnumerationRows = 50'000'000;

/// Every lattice point x with physical(x) in region and star(x) in w.
PointSet generate(const Scheme& scheme, const Window& w, const Region& region);

/// generate() on region - t, then shifted by t: the patch of t + Lambda on region.
PointSet generate_translate(const Scheme& scheme, const Window& w, const Region& region, QuadLatticePoint t);

/// Successive differences of physical positions.
std::vector<double> gap_sequence(const PointSet& ps);

/// Successive differences as exact lattice elements.
std::vector<QuadLatticePoint> gap_elements(const PointSet& ps);

/// Gaps counted as absent integer sites between successive points (periodic
/// schemes).  With cyclic = true the set must lie in one period and the wrap
/// term across the period boundary is returned separately.
struct AbsentSiteGaps {
  std::vector<std::int64_t> gaps;
  std::optional<std::int64_t> wrap;
};
AbsentSiteGaps absent_site_gaps(const PointSet& ps, bool cyclic);

/// card(p xor q) / length(region); both patches must share their region.
double symmetric_difference_density(const PointSet& p, const PointSet& q);

/// Text format: header "# qcorr-pointset scheme=<s> window=<w> region=[lo,hi]",
/// then one point per line, "u v" or "n" for periodic schemes.
void write_pointset(std::ostream& out, const PointSet& ps);
PointSet read_pointset(std::istream& in);

}  // namespace qcorr
