#include "qcorr/deck.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "fft.hpp"
#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

using detail::cplx;

void check_grid(std::size_t M, double L_half, const DeckOptions& opts) {
  if (M < 4 || M % 2 != 0) throw ParameterError("grid size must be even and at least 4");
  if (M > kMaxDefaultGridSize && !opts.allow_large) {
    throw ResourceError(fmt::format("grid size {} exceeds {} (the M x M table needs an explicit opt-in)", M,
                                    kMaxDefaultGridSize));
  }
  if (!(L_half > 0) || !std::isfinite(L_half)) throw ParameterError("L_half must be positive and finite");
}

std::vector<std::complex<double>> narrow(const std::vector<cplx>& x, long double scale) {
  std::vector<std::complex<double>> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = {static_cast<double>(x[i].real() * scale), static_cast<double>(x[i].imag() * scale)};
  }
  return out;
}

std::vector<cplx> widen(const std::vector<double>& x) { return {x.begin(), x.end()}; }

}  // namespace

double DeckGrid::position(std::size_t j) const {
  const auto signed_index = j < M / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(M);
  return signed_index * cell();
}

std::vector<double> sample_indicator(const IntervalUnion& w, std::size_t M, double L_half) {
  check_grid(M, L_half, {.allow_large = true});
  DeckGrid grid;
  grid.M = M;
  grid.L_half = L_half;
  std::vector<double> f(M, 0.0);
  for (std::size_t j = 0; j < M; ++j) {
    const long double x = grid.position(j);
    for (const auto& iv : w.parts()) {
      if (iv.lo.value() <= x && x < iv.hi.value()) {
        f[j] = 1.0;
        break;
      }
    }
  }
  return f;
}

double support_diameter(const std::vector<double>& f, double L_half) {
  const auto M = f.size();
  std::vector<std::size_t> ones;
  for (std::size_t j = 0; j < M; ++j)
    if (f[j] != 0) ones.push_back(j);
  if (ones.empty()) return 0;
  // the complement of the widest circular run of empty cells
  std::size_t widest_gap = M - 1 - ones.back() + ones.front();
  for (std::size_t i = 1; i < ones.size(); ++i) widest_gap = std::max(widest_gap, ones[i] - ones[i - 1] - 1);
  return static_cast<double>(M - widest_gap) * 2 * L_half / static_cast<double>(M);
}

DeckGrid deck_from_tables(std::size_t M, double L_half, std::vector<double> I1, std::vector<double> I2,
                          const DeckOptions& opts) {
  check_grid(M, L_half, opts);
  if (I1.size() != M || I2.size() != M * M) throw ParameterError("deck tables have the wrong size");
  DeckGrid d;
  d.M = M;
  d.L_half = L_half;
  d.I1 = std::move(I1);
  d.I2 = std::move(I2);
  const long double h = d.cell();
  d.I1hat = narrow(detail::dft(widen(d.I1)), h);
  d.I2hat = narrow(detail::dft2(widen(d.I2), M), h * h);

  if (opts.verify) {
    for (std::size_t w = 0; w < M; ++w) {
      if (d.I1[w] != d.I1[(M - w) % M]) throw VerificationError(fmt::format("I1 is not even at w = {}", w));
    }
    for (std::size_t k = 0; k < M; ++k) {
      const auto v = d.I1hat[k];
      if (v.real() < -1e-10 || std::abs(v.imag()) > 1e-10) {
        throw VerificationError(fmt::format("I1hat({}) = {} + {}i is not a nonnegative real", k, v.real(), v.imag()));
      }
    }
  }
  return d;
}

DeckGrid deck_functions(const std::vector<double>& f, std::size_t M, double L_half, const DeckOptions& opts) {
  check_grid(M, L_half, opts);
  if (f.size() != M) throw ParameterError("indicator size differs from the grid size");
  std::vector<std::size_t> ones;
  for (std::size_t j = 0; j < M; ++j) {
    if (f[j] != 0 && f[j] != 1) throw ParameterError("grid indicator must take values in {0, 1}");
    if (f[j] == 1) ones.push_back(j);
  }
  if (ones.empty()) throw DegenerateInputError("the sampled window is empty");
  const double diameter = support_diameter(f, L_half);
  if (!(diameter < L_half / 2)) {
    throw ParameterError(fmt::format("window support {:.6g} is not shorter than L_half/2 = {:.6g}; raise L_half",
                                     diameter, L_half / 2));
  }

  const double h = 2 * L_half / static_cast<double>(M);
  std::vector<std::int64_t> c1(M, 0), c2(M * M, 0);
  for (auto t : ones) {
    for (auto a : ones) {
      const auto w1 = (t + M - a) % M;
      ++c1[w1];
      for (auto b : ones) ++c2[w1 * M + (t + M - b) % M];
    }
  }
  std::vector<double> I1(M), I2(M * M);
  for (std::size_t i = 0; i < M; ++i) I1[i] = h * static_cast<double>(c1[i]);
  for (std::size_t i = 0; i < M * M; ++i) I2[i] = h * static_cast<double>(c2[i]);

  auto d = deck_from_tables(M, L_half, std::move(I1), std::move(I2), opts);
  d.f = f;
  d.F = narrow(detail::dft(widen(f)), h);
  if (opts.verify) {
    const double r = factorization_residual(d);
    if (!(r < opts.residual_tol)) {
      throw VerificationError(fmt::format("I2hat factorization residual {:.3g} exceeds {:.3g}", r, opts.residual_tol));
    }
  }
  return d;
}

double factorization_residual(const DeckGrid& d) {
  if (!d.has_indicator()) throw ParameterError("the factorization needs the indicator transform");
  const auto M = d.M;
  double worst = 0, scale = 0;
  for (std::size_t k1 = 0; k1 < M; ++k1) {
    for (std::size_t k2 = 0; k2 < M; ++k2) {
      const auto lhs = d.i2hat(k1, k2);
      const auto rhs = std::conj(d.F[k1]) * std::conj(d.F[k2]) * d.F[(k1 + k2) % M];
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max(scale, std::abs(lhs));
    }
  }
  return scale > 0 ? worst / scale : worst;
}

void write_deck_json(std::ostream& out, const DeckGrid& d) {
  nlohmann::json j;
  j["M"] = d.M;
  j["L_half"] = d.L_half;
  j["I1"] = d.I1;
  j["I2"] = d.I2;
  out << j.dump() << '\n';
}

DeckGrid read_deck_json(std::istream& in, const DeckOptions& opts) {
  nlohmann::json j;
  try {
    in >> j;
    return deck_from_tables(j.at("M").get<std::size_t>(), j.at("L_half").get<double>(),
                            j.at("I1").get<std::vector<double>>(), j.at("I2").get<std::vector<double>>(), opts);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(fmt::format("malformed deck file: {}", e.what()));
  }
}

}  // namespace qcorr
