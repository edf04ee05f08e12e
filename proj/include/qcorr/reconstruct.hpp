#pragma once

// Recovery of a window, up to translation, from its deck data.
//
// Only |F| = sqrt(I1hat) and I2hat are used.  The phase quotient
//   psi(k1, k2) = I2hat(k1, k2) / (|F(k1)| |F(k2)| |F(k1 + k2)|)
// relates the unknown phase phi = F / |F| at three frequencies,
//   phi(k1 + k2) = phi(k1) phi(k2) psi(k1, k2),
// and phi is propagated outward from phi(0) = 1.  Any solution differs from
// the true phase by a character, i.e. the window comes back translated.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcorr/deck.hpp"
#include "qcorr/schemes.hpp"

namespace qcorr {

struct PhaseQuotient {
  std::size_t M = 0;
  double eps_zero = 0;
  std::vector<double> absF;
  std::vector<std::uint8_t> in_D;  // |F(k)| >= eps_zero
  std::vector<std::complex<double>> psi;  // row-major; zero off D2

  bool defined(std::size_t k1, std::size_t k2) const {
    return in_D[k1] && in_D[k2] && in_D[(k1 + k2) % M];
  }
  std::complex<double> at(std::size_t k1, std::size_t k2) const { return psi[k1 * M + k2]; }
  std::size_t d_count() const;
};

/// 1e-4 times the largest |F|.
double default_eps_zero(const DeckGrid& deck);

PhaseQuotient phase_quotient(const DeckGrid& deck, double eps_zero);

/// Number of consecutive frequencies 1, 2, ... lying in D on both sides of 0:
/// a grid estimate of the radius of the zero-free cube around the origin.
std::size_t zero_free_radius(const PhaseQuotient& q);

struct PhaseField {
  std::size_t M = 0;
  double eps_zero = 0;
  std::vector<std::complex<double>> phi;
  std::vector<std::uint8_t> known;
  std::size_t d_count = 0;

  /// Frequencies in D whose phase stayed undetermined.
  std::size_t unknown_count() const;
};

/// Breadth-first solution of phi(k1 + k2) = phi(k1) phi(k2) psi(k1, k2) over
/// k = 1 .. M/2, mirrored to negative frequencies by phi(-k) = conj phi(k).
/// Each k takes the decomposition k1 + k2 (k1 <= k2, both known) maximizing
/// min(|F(k1)|, |F(k2)|), looking first at k1 within the zero-free radius.
/// The first frequency without any decomposition seeds the translation gauge;
/// that gauge is afterwards snapped to a whole number of cells using the
/// relations that wrap around the grid.
PhaseField propagate_phase(const PhaseQuotient& q);

/// max |phi(k1 + k2) - phi(k1) phi(k2) psi(k1, k2)| over known (k1, k2) in D2.
double phase_residual(const PhaseQuotient& q, const PhaseField& phase);

struct RecoveredWindow {
  std::vector<double> values;  // real part of the inverse transform
  std::vector<std::uint8_t> indicator;
  std::size_t uncertain_cells = 0;  // values in [0.35, 0.65]
};

struct ReconstructionOptions {
  double min_known_fraction = 0.9;
  double threshold = 0.5;
};

class ReconstructionError : public std::runtime_error {
 public:
  ReconstructionError(const std::string& what, RecoveredWindow partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RecoveredWindow& partial() const { return partial_; }

 private:
  RecoveredWindow partial_;
};

/// Inverse transform of |F| phi with unknown frequencies set to zero,
/// thresholded.  Throws ReconstructionError when too little of D is known.
RecoveredWindow reconstruct_window(const PhaseQuotient& q, const PhaseField& phase, double cell,
                                   const ReconstructionOptions& opts = {});

struct Alignment {
  std::size_t shift = 0;  // g[j] = f[j - shift] fits best
  double mismatch = 0;    // differing cells at that shift over (#f + #g)
};

/// Circular shift of f closest to g; ties go to the smallest shift.  The
/// mismatch is normalized by the occupied cells, not the grid size, so it does
/// not depend on how much empty padding the grid carries.
Alignment align_up_to_translation(const std::vector<std::uint8_t>& f, const std::vector<std::uint8_t>& g);

std::vector<std::uint8_t> to_indicator(const std::vector<double>& f);

/// f(-x) on the grid.
std::vector<std::uint8_t> reflect(const std::vector<std::uint8_t>& f);

struct ReconstructionReport {
  std::size_t M = 0;
  double L_half = 0;
  double eps_zero = 0;
  std::size_t unknown_count = 0;
  std::optional<std::size_t> shift;     // present when a reference was given
  std::optional<double> mismatch;
  std::size_t uncertain_cells = 0;
  std::vector<std::uint8_t> indicator;
  std::vector<double> positions;

  std::string to_json() const;
};

/// Full pipeline on deck data; the reference indicator, if any, is only used
/// for the final alignment.
ReconstructionReport reconstruct_from_deck(const DeckGrid& deck, const std::vector<std::uint8_t>* reference = nullptr,
                                           std::optional<double> eps_zero = std::nullopt,
                                           const ReconstructionOptions& opts = {});

/// Samples w, computes its deck, keeps only the tables, reconstructs and
/// aligns against the sampled window.
ReconstructionReport self_test(const IntervalUnion& w, std::size_t M = kDefaultGridSize,
                               double L_half = kDefaultHalfLength, const DeckOptions& deck_opts = {},
                               const ReconstructionOptions& opts = {});

}  // namespace qcorr
