#pragma once

// Dual lattices, window Fourier transforms and pure-point diffraction.
//
// The Bragg intensity at a dual point k is |FT(1_W)(-k*)|^2, with the window
// transform taken against theta_H, so the peak at k = 0 is density^2.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qcorr/golden.hpp"
#include "qcorr/schemes.hpp"

namespace qcorr {

/// Integer label of a dual-module point.
///   Fibonacci:   k = (m + n tau) / sqrt5,      k* = -(m + n tau') / sqrt5
///   Periodic(N): k = m / N,                    k* = -m mod N
///   Combined(N): k = (m + n tau) / (N sqrt5),  k* = (-(m + n tau') / (N sqrt5), m mod N),
///                with m + n = 0 mod N
struct DualPoint {
  std::int64_t m = 0;
  std::int64_t n = 0;
  bool operator==(const DualPoint&) const = default;
};

/// Point of the internal dual group: real frequency kappa and/or character b.
struct InternalDual {
  double kappa = 0;
  std::int64_t b = 0;
  bool operator==(const InternalDual&) const = default;
};

class DualLattice {
 public:
  explicit DualLattice(Scheme scheme) : scheme_(scheme) {}

  const Scheme& scheme() const { return scheme_; }
  /// Generators of the dual module.
  std::vector<DualPoint> basis() const;
  bool contains(DualPoint k) const;
  double physical(DualPoint k) const;
  InternalDual star(DualPoint k) const;
  /// k.x + k*.x* (mod nothing); an integer for every lattice point x.
  double pairing(DualPoint k, QuadLatticePoint x) const;

 private:
  Scheme scheme_;
};

DualLattice dual_lattice(const Scheme& scheme);

/// Lebesgue transform  int_W exp(-2 pi i kappa y) dy  of an interval union.
std::complex<double> interval_ft(const IntervalUnion& w, double kappa);

/// Transform of the window against theta_H, evaluated at an internal dual point.
std::complex<double> window_ft(const Scheme& scheme, const Window& w, const InternalDual& kstar);

struct Peak {
  DualPoint label;
  double k = 0;
  double intensity = 0;
};

struct Spectrum {
  Scheme scheme;
  std::string window;
  std::vector<Peak> peaks;  // ordered by k, then label
};

struct DiffractionOptions {
  bool include_zeros = false;
  /// Intensities at or below this count as extinct.
  double zero_tol = 1e-20;
  /// Golden schemes have a dense dual module; peaks below this intensity are
  /// not enumerated.
  double floor = 1e-6;
};

double intensity(const Scheme& scheme, const Window& w, DualPoint k);

/// All dual points with |k| <= kmax (and, for golden schemes, intensity >= floor).
Spectrum diffraction(const Scheme& scheme, const Window& w, double kmax, const DiffractionOptions& opts = {});

/// Suggested extinction threshold: 1e-6 times the window measure.
double default_extinction_eps(const Scheme& scheme, const Window& w);

struct Extinctions {
  std::vector<InternalDual> zeros;
  bool contains_origin = false;
};

/// Sample points where |window_ft| < eps.
Extinctions extinction_set(const Scheme& scheme, const Window& w, const std::vector<InternalDual>& sample, double eps);

/// Decides exactly whether  sum_a conj(chi_a(b)) 1_{W_a}  vanishes identically,
/// where chi_a(b) = exp(2 pi i a b / N).  The line is cut at every endpoint and
/// on each piece the character sum over the covering a is tested with the N-th
/// cyclotomic polynomial.
bool zero_condition(const std::map<std::int64_t, IntervalUnion>& windows, std::int64_t b, std::int64_t modulus);

/// Same condition when every W_a equals one common interval union.
bool zero_condition(const ResidueWindow& residues, const IntervalUnion& common, std::int64_t b);

void write_spectrum_csv(std::ostream& out, const Spectrum& s);

/// Stick plot over one period b = 0..N with tick labels b (meaning k = b/N).
void write_periodic_svg(std::ostream& out, const Spectrum& s);

}  // namespace qcorr
