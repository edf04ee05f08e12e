#include "qcorr/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "qcorr/errors.hpp"
#include "qcorr/polynomial.hpp"

namespace qcorr {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;

std::int64_t reduce(std::int64_t x, std::int64_t n) {
  auto r = x % n;
  return r < 0 ? r + n : r;
}

// sum_{a in S} exp(-2 pi i a b / N) / N
std::complex<double> residue_ft(const ResidueWindow& s, std::int64_t b) {
  const auto n = s.modulus();
  std::complex<long double> sum = 0;
  for (auto a : s.elems()) {
    const auto phase = -2 * kPi * static_cast<long double>(reduce(a * reduce(b, n), n)) / static_cast<long double>(n);
    sum += std::polar(1.0L, phase);
  }
  sum /= static_cast<long double>(n);
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

InternalDual negate(const Scheme& scheme, InternalDual d) {
  return {-d.kappa, scheme.has_residue_part() ? reduce(-d.b, scheme.modulus) : 0};
}

}  // namespace

// Dual lattice ------------------------------------------------------------------------

std::vector<DualPoint> DualLattice::basis() const {
  switch (scheme_.kind) {
    case SchemeKind::Fibonacci:
      return {{1, 0}, {0, 1}};
    case SchemeKind::Periodic:
      return {{1, 0}};
    case SchemeKind::Combined:
      return {{1, -1}, {scheme_.modulus, 0}};
  }
  return {};
}

bool DualLattice::contains(DualPoint k) const {
  switch (scheme_.kind) {
    case SchemeKind::Fibonacci:
      return true;
    case SchemeKind::Periodic:
      return k.n == 0;
    case SchemeKind::Combined:
      return reduce(k.m + k.n, scheme_.modulus) == 0;
  }
  return false;
}

double DualLattice::physical(DualPoint k) const {
  const long double golden = static_cast<long double>(k.m) + static_cast<long double>(k.n) * kTau;
  switch (scheme_.kind) {
    case SchemeKind::Fibonacci:
      return static_cast<double>(golden / kSqrt5);
    case SchemeKind::Periodic:
      return static_cast<double>(static_cast<long double>(k.m) / static_cast<long double>(scheme_.modulus));
    case SchemeKind::Combined:
      return static_cast<double>(golden / (kSqrt5 * static_cast<long double>(scheme_.modulus)));
  }
  return 0;
}

InternalDual DualLattice::star(DualPoint k) const {
  if (!contains(k)) throw ParameterError(fmt::format("({}, {}) is not in the dual module", k.m, k.n));
  const long double conj = static_cast<long double>(k.m) + static_cast<long double>(k.n) * kTauConj;
  switch (scheme_.kind) {
    case SchemeKind::Fibonacci:
      return {static_cast<double>(-conj / kSqrt5), 0};
    case SchemeKind::Periodic:
      return {0, reduce(-k.m, scheme_.modulus)};
    case SchemeKind::Combined:
      return {static_cast<double>(-conj / (kSqrt5 * static_cast<long double>(scheme_.modulus))),
              reduce(k.m, scheme_.modulus)};
  }
  return {};
}

double DualLattice::pairing(DualPoint k, QuadLatticePoint x) const {
  const auto ks = star(k);
  long double value = static_cast<long double>(physical(k)) * x.physical();
  switch (scheme_.kind) {
    case SchemeKind::Fibonacci:
      value += static_cast<long double>(ks.kappa) * x.conjugate();
      break;
    case SchemeKind::Periodic:
      if (x.v != 0) throw ParameterError("periodic lattice points are integers");
      value += static_cast<long double>(ks.b * reduce(x.u, scheme_.modulus)) / static_cast<long double>(scheme_.modulus);
      break;
    case SchemeKind::Combined:
      value += static_cast<long double>(ks.kappa) * x.conjugate();
      value += static_cast<long double>(ks.b * reduce(x.u, scheme_.modulus)) / static_cast<long double>(scheme_.modulus);
      break;
  }
  return static_cast<double>(value);
}

DualLattice dual_lattice(const Scheme& scheme) { return DualLattice(scheme); }

// Window transforms ---------------------------------------------------------------------

std::complex<double> interval_ft(const IntervalUnion& w, double kappa) {
  std::complex<long double> sum = 0;
  const long double k = kappa;
  for (const auto& iv : w.parts()) {
    const long double a = iv.lo.value(), b = iv.hi.value();
    const long double len = b - a;
    const long double x = kPi * k * len;
    const long double sinc = std::abs(x) < 1e-12L ? 1.0L : std::sin(x) / x;
    sum += std::polar(len * sinc, -kPi * k * (a + b));
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

std::complex<double> window_ft(const Scheme& scheme, const Window& w, const InternalDual& kstar) {
  check_compatible(scheme, w);
  const double c = static_cast<double>(kSqrt5);
  if (auto* iu = std::get_if<IntervalUnion>(&w)) return interval_ft(*iu, kstar.kappa) / c;
  if (auto* rw = std::get_if<ResidueWindow>(&w)) return residue_ft(*rw, kstar.b);
  const auto& pw = std::get<ProductWindow>(w);
  return interval_ft(pw.real, kstar.kappa) / c * residue_ft(pw.residues, kstar.b);
}

double intensity(const Scheme& scheme, const Window& w, DualPoint k) {
  const auto lattice = dual_lattice(scheme);
  return std::norm(window_ft(scheme, w, negate(scheme, lattice.star(k))));
}

// Diffraction -------------------------------------------------------------------------------

Spectrum diffraction(const Scheme& scheme, const Window& w, double kmax, const DiffractionOptions& opts) {
  check_compatible(scheme, w);
  if (!(kmax >= 0) || !std::isfinite(kmax)) throw ParameterError("kmax must be finite and nonnegative");
  const auto lattice = dual_lattice(scheme);
  Spectrum out{scheme, to_string(w), {}};
  auto consider = [&](DualPoint label) {
    const double k = lattice.physical(label);
    if (std::abs(k) > kmax * (1 + 1e-12) + 1e-15) return;
    const double value = intensity(scheme, w, label);
    if (!opts.include_zeros && value <= opts.zero_tol) return;
    if (scheme.kind != SchemeKind::Periodic && value < opts.floor && !(opts.include_zeros && value <= opts.zero_tol)) return;
    out.peaks.push_back({label, k, value});
  };

  if (scheme.kind == SchemeKind::Periodic) {
    const long double n = static_cast<long double>(scheme.modulus);
    const auto lo = static_cast<std::int64_t>(std::ceil(-kmax * n - 1e-9L));
    const auto hi = static_cast<std::int64_t>(std::floor(kmax * n + 1e-9L));
    for (auto m = lo; m <= hi; ++m) consider({m, 0});
  } else {
    if (!(opts.floor > 0)) throw ParameterError("golden schemes need a positive intensity floor");
    const auto& real = scheme.kind == SchemeKind::Fibonacci ? std::get<IntervalUnion>(w) : std::get<ProductWindow>(w).real;
    // |FT| <= parts / (pi |kappa| sqrt5) bounds the internal frequencies worth visiting.
    const long double parts = static_cast<long double>(std::max<std::size_t>(real.parts().size(), 1));
    const long double kappa_max = parts / (kPi * kSqrt5 * std::sqrt(static_cast<long double>(opts.floor))) + 1;
    const long double scale = scheme.kind == SchemeKind::Combined ? static_cast<long double>(scheme.modulus) : 1.0L;
    // n = scale (k + kappa);  m = scale sqrt5 k - n tau = -scale sqrt5 kappa - n tau'
    const auto n_lo = static_cast<std::int64_t>(std::floor(-scale * (kmax + kappa_max)));
    const auto n_hi = static_cast<std::int64_t>(std::ceil(scale * (kmax + kappa_max)));
    for (auto n = n_lo; n <= n_hi; ++n) {
      const long double nt = static_cast<long double>(n) * kTau;
      const long double nc = static_cast<long double>(n) * kTauConj;
      const long double m_lo = std::max(-scale * kSqrt5 * kmax - nt, -scale * kSqrt5 * kappa_max - nc);
      const long double m_hi = std::min(scale * kSqrt5 * kmax - nt, scale * kSqrt5 * kappa_max - nc);
      if (m_lo > m_hi + 1) continue;
      auto m = static_cast<std::int64_t>(std::floor(m_lo)) - 1;
      const auto m_last = static_cast<std::int64_t>(std::ceil(m_hi)) + 1;
      if (scheme.kind == SchemeKind::Combined) {
        m += reduce(-n - m, scheme.modulus);  // first m with m + n = 0 mod N
        for (; m <= m_last; m += scheme.modulus) consider({m, n});
      } else {
        for (; m <= m_last; ++m) consider({m, n});
      }
    }
  }
  std::sort(out.peaks.begin(), out.peaks.end(), [](const Peak& a, const Peak& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.label.m != b.label.m) return a.label.m < b.label.m;
    return a.label.n < b.label.n;
  });
  return out;
}

double default_extinction_eps(const Scheme& scheme, const Window& w) { return 1e-6 * window_measure(scheme, w); }

Extinctions extinction_set(const Scheme& scheme, const Window& w, const std::vector<InternalDual>& sample, double eps) {
  if (!(eps > 0)) throw ParameterError("extinction threshold must be positive");
  if (!(window_measure(scheme, w) > 0)) throw ParameterError("extinction set of a null window is undefined");
  Extinctions out;
  for (const auto& k : sample) {
    if (std::abs(window_ft(scheme, w, k)) < eps) out.zeros.push_back(k);
  }
  out.contains_origin = std::abs(window_ft(scheme, w, InternalDual{})) < eps;
  return out;
}

// Zero condition ------------------------------------------------------------------------------

bool zero_condition(const std::map<std::int64_t, IntervalUnion>& windows, std::int64_t b, std::int64_t modulus) {
  if (modulus < 1) throw ParameterError("modulus must be positive");
  std::vector<std::pair<std::int64_t, const IntervalUnion*>> pieces;
  std::vector<QuadRational> cuts;
  for (const auto& [a, w] : windows) {
    pieces.emplace_back(reduce(a, modulus), &w);
    for (const auto& iv : w.parts()) {
      cuts.push_back(iv.lo);
      cuts.push_back(iv.hi);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  const QuadRational two(2);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto mid = (cuts[i] + cuts[i + 1]) / two;
    IntPoly sum(static_cast<std::size_t>(modulus), 0);
    bool covered = false;
    for (const auto& [a, w] : pieces) {
      if (!w->contains(mid)) continue;
      // conj(chi_a(b)) = zeta^(-a b)
      sum[static_cast<std::size_t>(reduce(-a * reduce(b, modulus), modulus))] += 1;
      covered = true;
    }
    if (covered && !vanishes_at_primitive_root(sum, modulus)) return false;
  }
  return true;
}

bool zero_condition(const ResidueWindow& residues, const IntervalUnion& common, std::int64_t b) {
  std::map<std::int64_t, IntervalUnion> windows;
  for (auto a : residues.elems()) windows.emplace(a, common);
  return zero_condition(windows, b, residues.modulus());
}

// Output ----------------------------------------------------------------------------------------

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  const bool periodic = s.scheme.kind == SchemeKind::Periodic;
  out << (periodic ? "b,k,intensity\n" : "m,n,k,intensity\n");
  for (const auto& p : s.peaks) {
    if (periodic) {
      out << fmt::format("{},{:.15g},{:.15g}\n", p.label.m, p.k, p.intensity);
    } else {
      out << fmt::format("{},{},{:.15g},{:.15g}\n", p.label.m, p.label.n, p.k, p.intensity);
    }
  }
}

void write_periodic_svg(std::ostream& out, const Spectrum& s) {
  if (s.scheme.kind != SchemeKind::Periodic) throw ParameterError("the stick plot is drawn for periodic spectra");
  const auto n = s.scheme.modulus;
  constexpr double width = 800, height = 400, left = 60, right = 20, top = 30, bottom = 50;
  const double plot_w = width - left - right, plot_h = height - top - bottom;
  double peak = 0;
  for (const auto& p : s.peaks) peak = std::max(peak, p.intensity);
  if (peak <= 0) peak = 1;
  auto x_of = [&](double b) { return left + plot_w * b / static_cast<double>(n); };
  auto y_of = [&](double v) { return top + plot_h * (1 - v / peak); };

  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
                     width, height, width, height);
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << fmt::format("<text x=\"{}\" y=\"18\" font-family=\"sans-serif\" font-size=\"13\">diffraction of {} over one period</text>\n",
                     left, s.window);
  out << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left,
                     y_of(0), left + plot_w, y_of(0));
  out << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", left, top,
                     left, y_of(0));
  const auto label_step = std::max<std::int64_t>(1, n / 8);
  for (std::int64_t b = 0; b <= n; ++b) {
    const double x = x_of(static_cast<double>(b));
    const double tick = b % label_step == 0 ? 6 : 3;
    out << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\"/>\n", x, y_of(0),
                       x, y_of(0) + tick);
    if (b % label_step == 0) {
      out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                         x, y_of(0) + 20, b);
    }
  }
  out << fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">k (in units of 1/{})</text>\n",
                     left + plot_w / 2, height - 8, n);
  out << fmt::format("<text x=\"12\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\">{:.3g}</text>\n", y_of(peak) + 4,
                     peak);
  for (const auto& p : s.peaks) {
    const double b = static_cast<double>(p.label.m);
    if (b < 0 || b > static_cast<double>(n)) continue;
    out << fmt::format("<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"#1f4e9c\" stroke-width=\"3\"/>\n",
                       x_of(b), y_of(0), x_of(b), y_of(p.intensity));
  }
  out << "</svg>\n";
}

}  // namespace qcorr
