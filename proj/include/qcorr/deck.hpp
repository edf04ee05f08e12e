#pragma once

// Deck functions of a window sampled on a periodized grid.
//
// The internal line is replaced by a circle of circumference 2 L_half cut into
// M cells of width h = 2 L_half / M; index j stands for j h, indices at or
// above M/2 for negative positions.  On the grid
//   I1(w)      = h #{t : f(t) f(t - w)}
//   I2(w1, w2) = h #{t : f(t) f(t - w1) f(t - w2)}
// and with F = h DFT(f) the transforms satisfy
//   I1hat = |F|^2,   I2hat(k1, k2) = conj F(k1) conj F(k2) F(k1 + k2).
// As long as the support of f is shorter than L_half / 2 the circular
// correlations coincide with the correlations on the line.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "qcorr/schemes.hpp"

namespace qcorr {

inline constexpr std::size_t kDefaultGridSize = 512;
inline constexpr double kDefaultHalfLength = 8.0;
/// Grids above this size need DeckOptions::allow_large (I2 is stored densely).
inline constexpr std::size_t kMaxDefaultGridSize = 512;

struct DeckGrid {
  std::size_t M = 0;
  double L_half = 0;
  std::vector<double> f;  // empty when the deck was built from tables alone
  std::vector<double> I1;
  std::vector<double> I2;  // row-major, I2[w1 * M + w2]
  std::vector<std::complex<double>> F;  // empty without f
  std::vector<std::complex<double>> I1hat;
  std::vector<std::complex<double>> I2hat;

  double cell() const { return 2 * L_half / static_cast<double>(M); }
  double position(std::size_t j) const;
  bool has_indicator() const { return !f.empty(); }
  double i2(std::size_t w1, std::size_t w2) const { return I2[w1 * M + w2]; }
  std::complex<double> i2hat(std::size_t k1, std::size_t k2) const { return I2hat[k1 * M + k2]; }
};

struct DeckOptions {
  bool allow_large = false;
  bool verify = true;
  double residual_tol = 1e-8;
};

/// f[j] = 1 iff the cell position j h lies in w.
std::vector<double> sample_indicator(const IntervalUnion& w, std::size_t M, double L_half);

/// Length of the shortest circular arc holding every nonzero cell.
double support_diameter(const std::vector<double>& f, double L_half);

/// Deck tables and transforms of a {0,1} grid function; checks the grid
/// invariants (and the factorization of I2hat) before returning.
DeckGrid deck_functions(const std::vector<double>& f, std::size_t M, double L_half, const DeckOptions& opts = {});

/// Transforms of given tables; the indicator and F stay unknown.
DeckGrid deck_from_tables(std::size_t M, double L_half, std::vector<double> I1, std::vector<double> I2,
                          const DeckOptions& opts = {});

/// max |I2hat - conj F conj F F| / max |I2hat| over the full grid.
double factorization_residual(const DeckGrid& deck);

/// JSON: {"M", "L_half", "I1": [...], "I2": [...row-major...]}.  Only tables
/// are stored; reading recomputes the transforms.
void write_deck_json(std::ostream& out, const DeckGrid& deck);
DeckGrid read_deck_json(std::istream& in, const DeckOptions& opts = {});

}  // namespace qcorr
