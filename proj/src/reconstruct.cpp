#include "qcorr/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "fft.hpp"
#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

std::vector<double> moduli(const DeckGrid& deck) {
  std::vector<double> a(deck.M);
  for (std::size_t k = 0; k < deck.M; ++k) a[k] = std::sqrt(std::max(0.0, deck.I1hat[k].real()));
  return a;
}

}  // namespace

std::size_t PhaseQuotient::d_count() const {
  return static_cast<std::size_t>(std::count(in_D.begin(), in_D.end(), std::uint8_t{1}));
}

std::size_t PhaseField::unknown_count() const {
  std::size_t n = 0;
  for (std::size_t k = 0; k < M; ++k) n += known[k] ? 0 : 1;
  return n - (M - d_count);
}

double default_eps_zero(const DeckGrid& deck) {
  const auto a = moduli(deck);
  return 1e-4 * *std::max_element(a.begin(), a.end());
}

PhaseQuotient phase_quotient(const DeckGrid& deck, double eps_zero) {
  if (!(eps_zero > 0)) throw ParameterError("eps_zero must be positive");
  PhaseQuotient q;
  q.M = deck.M;
  q.eps_zero = eps_zero;
  q.absF = moduli(deck);
  q.in_D.resize(q.M);
  for (std::size_t k = 0; k < q.M; ++k) q.in_D[k] = q.absF[k] >= eps_zero ? 1 : 0;
  if (!q.in_D[0]) throw DegenerateInputError("the zero frequency is below eps_zero");
  if (q.d_count() < 2) throw DegenerateInputError("no frequency besides 0 lies above eps_zero");
  const auto M = q.M;
  q.psi.assign(M * M, {0.0, 0.0});
  for (std::size_t k1 = 0; k1 < M; ++k1) {
    if (!q.in_D[k1]) continue;
    for (std::size_t k2 = 0; k2 < M; ++k2) {
      if (!q.defined(k1, k2)) continue;
      q.psi[k1 * M + k2] = deck.i2hat(k1, k2) / (q.absF[k1] * q.absF[k2] * q.absF[(k1 + k2) % M]);
    }
  }
  return q;
}

std::size_t zero_free_radius(const PhaseQuotient& q) {
  std::size_t r = 0;
  while (r + 1 < q.M / 2 && q.in_D[r + 1] && q.in_D[q.M - r - 1]) ++r;
  return r;
}

PhaseField propagate_phase(const PhaseQuotient& q) {
  const auto M = q.M;
  const auto half = M / 2;
  PhaseField p;
  p.M = M;
  p.eps_zero = q.eps_zero;
  p.d_count = q.d_count();
  p.phi.assign(M, {0.0, 0.0});
  p.known.assign(M, 0);
  p.phi[0] = 1;
  p.known[0] = 1;

  const auto r0 = std::max<std::size_t>(zero_free_radius(q), 1);
  bool seeded = false;
  for (std::size_t k = 1; k <= half; ++k) {
    if (!q.in_D[k]) continue;
    // best decomposition, first with k1 inside the zero-free cube, then anywhere
    std::size_t best = 0;
    double best_weight = -1;
    for (int pass = 0; pass < 2 && best == 0; ++pass) {
      const auto k1_max = pass == 0 ? std::min(r0, k / 2) : k / 2;
      for (std::size_t k1 = 1; k1 <= k1_max; ++k1) {
        const auto k2 = k - k1;
        if (!p.known[k1] || !p.known[k2] || !q.defined(k1, k2)) continue;
        const double weight = std::min(q.absF[k1], q.absF[k2]);
        if (weight > best_weight) {
          best_weight = weight;
          best = k1;
        }
      }
    }
    if (best != 0) {
      const auto v = p.phi[best] * p.phi[k - best] * q.at(best, k - best);
      p.phi[k] = v / std::abs(v);
    } else if (!seeded) {
      p.phi[k] = 1;
      seeded = true;
    } else {
      continue;
    }
    p.known[k] = 1;
    if (k != M - k) {
      p.phi[M - k] = std::conj(p.phi[k]);
      p.known[M - k] = 1;
    }
  }

  // Relations wrapping past M/2 measure how far the seeded gauge is from a
  // whole-cell translation: each should be exp(2 pi i delta) with the same delta.
  std::complex<double> drift = 0;
  for (std::size_t k1 = 1; k1 <= half; ++k1) {
    if (!p.known[k1]) continue;
    for (std::size_t k2 = k1; k2 <= half; ++k2) {
      const auto s = k1 + k2;
      if (s <= half || s >= M || !p.known[k2] || !p.known[s] || !q.defined(k1, k2)) continue;
      const double weight = std::min({q.absF[k1], q.absF[k2], q.absF[s]});
      drift += weight * p.phi[k1] * p.phi[k2] * q.at(k1, k2) / p.phi[s];
    }
  }
  if (std::abs(drift) > 0) {
    const double theta = std::arg(drift) / static_cast<double>(M);
    for (std::size_t k = 1; k <= half; ++k) {
      if (!p.known[k]) continue;
      p.phi[k] *= std::polar(1.0, -theta * static_cast<double>(k));
      if (k != M - k) p.phi[M - k] = std::conj(p.phi[k]);
    }
  }
  return p;
}

double phase_residual(const PhaseQuotient& q, const PhaseField& phase) {
  const auto M = q.M;
  double worst = 0;
  for (std::size_t k1 = 0; k1 < M; ++k1) {
    if (!phase.known[k1]) continue;
    for (std::size_t k2 = 0; k2 < M; ++k2) {
      const auto s = (k1 + k2) % M;
      if (!phase.known[k2] || !phase.known[s] || !q.defined(k1, k2)) continue;
      worst = std::max(worst, std::abs(phase.phi[s] - phase.phi[k1] * phase.phi[k2] * q.at(k1, k2)));
    }
  }
  return worst;
}

RecoveredWindow reconstruct_window(const PhaseQuotient& q, const PhaseField& phase, double cell,
                                   const ReconstructionOptions& opts) {
  const auto M = q.M;
  std::vector<detail::cplx> spectrum(M);
  for (std::size_t k = 0; k < M; ++k) {
    if (phase.known[k]) spectrum[k] = static_cast<long double>(q.absF[k]) * detail::cplx(phase.phi[k]);
  }
  const auto g = detail::dft(spectrum, detail::Direction::Backward);
  RecoveredWindow out;
  out.values.resize(M);
  out.indicator.resize(M);
  const long double scale = 1.0L / (static_cast<long double>(M) * cell);
  for (std::size_t j = 0; j < M; ++j) {
    const double v = static_cast<double>(g[j].real() * scale);
    out.values[j] = v;
    out.indicator[j] = v >= opts.threshold ? 1 : 0;
    if (v >= 0.35 && v <= 0.65) ++out.uncertain_cells;
  }
  const auto known_in_D = phase.d_count - phase.unknown_count();
  const double fraction = phase.d_count ? static_cast<double>(known_in_D) / static_cast<double>(phase.d_count) : 0;
  if (fraction < opts.min_known_fraction) {
    throw ReconstructionError(fmt::format("phase known on {:.1f}% of D, below the required {:.1f}%", 100 * fraction,
                                          100 * opts.min_known_fraction),
                              std::move(out));
  }
  return out;
}

Alignment align_up_to_translation(const std::vector<std::uint8_t>& f, const std::vector<std::uint8_t>& g) {
  if (f.size() != g.size()) throw ParameterError("grids differ in size");
  const auto M = f.size();
  if (M == 0) return {};
  const auto occupied = std::count(f.begin(), f.end(), std::uint8_t{1}) + std::count(g.begin(), g.end(), std::uint8_t{1});
  if (occupied == 0) return {};
  std::size_t best_shift = 0, best_diff = M + 1;
  for (std::size_t s = 0; s < M; ++s) {
    std::size_t diff = 0;
    for (std::size_t j = 0; j < M; ++j) diff += (g[j] != f[(j + M - s) % M]) ? 1 : 0;
    if (diff < best_diff) {
      best_diff = diff;
      best_shift = s;
    }
  }
  return {best_shift, static_cast<double>(best_diff) / static_cast<double>(occupied)};
}

std::vector<std::uint8_t> to_indicator(const std::vector<double>& f) {
  std::vector<std::uint8_t> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] >= 0.5 ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> reflect(const std::vector<std::uint8_t>& f) {
  const auto M = f.size();
  std::vector<std::uint8_t> out(M);
  for (std::size_t j = 0; j < M; ++j) out[j] = f[(M - j) % M];
  return out;
}

std::string ReconstructionReport::to_json() const {
  nlohmann::ordered_json j;
  j["M"] = M;
  j["L_half"] = L_half;
  j["eps_zero"] = eps_zero;
  j["unknown_count"] = unknown_count;
  j["shift"] = shift ? nlohmann::ordered_json(*shift) : nlohmann::ordered_json(nullptr);
  j["mismatch"] = mismatch ? nlohmann::ordered_json(*mismatch) : nlohmann::ordered_json(nullptr);
  j["uncertain_cells"] = uncertain_cells;
  return j.dump(2);
}

ReconstructionReport reconstruct_from_deck(const DeckGrid& deck, const std::vector<std::uint8_t>* reference,
                                           std::optional<double> eps_zero, const ReconstructionOptions& opts) {
  const double eps = eps_zero.value_or(default_eps_zero(deck));
  const auto q = phase_quotient(deck, eps);
  const auto phase = propagate_phase(q);
  const auto window = reconstruct_window(q, phase, deck.cell(), opts);

  ReconstructionReport r;
  r.M = deck.M;
  r.L_half = deck.L_half;
  r.eps_zero = eps;
  r.unknown_count = phase.unknown_count();
  r.uncertain_cells = window.uncertain_cells;
  r.indicator = window.indicator;
  r.positions.resize(deck.M);
  for (std::size_t j = 0; j < deck.M; ++j) r.positions[j] = deck.position(j);
  if (reference) {
    const auto a = align_up_to_translation(*reference, window.indicator);
    r.shift = a.shift;
    r.mismatch = a.mismatch;
  }
  return r;
}

ReconstructionReport self_test(const IntervalUnion& w, std::size_t M, double L_half, const DeckOptions& deck_opts,
                               const ReconstructionOptions& opts) {
  const auto f = sample_indicator(w, M, L_half);
  const auto reference = to_indicator(f);
  DeckGrid tables_only;
  {
    auto full = deck_functions(f, M, L_half, deck_opts);
    tables_only = deck_from_tables(M, L_half, std::move(full.I1), std::move(full.I2), deck_opts);
  }
  return reconstruct_from_deck(tables_only, &reference, std::nullopt, opts);
}

}  // namespace qcorr
