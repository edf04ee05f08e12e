#include "qcorr/pointsets.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "qcorr/errors.hpp"

namespace qcorr {

bool Region::contains(QuadLatticePoint p) const {
  const auto x = QuadRational::from(p);
  return lo <= x && x <= hi;
}

Region make_region(double lo, double hi) {
  constexpr std::int64_t kScale = 1'000'000;
  if (!std::isfinite(lo) || !std::isfinite(hi) || std::abs(lo) > 1e9 || std::abs(hi) > 1e9) {
    throw ParameterError("region bounds must be finite and at most 1e9 in magnitude");
  }
  return {QuadRational(std::llround(lo * kScale), 0, kScale), QuadRational(std::llround(hi * kScale), 0, kScale)};
}

Region Region::translated(QuadLatticePoint t) const {
  const auto s = QuadRational::from(t);
  return {lo + s, hi + s};
}

PointSet::PointSet(Scheme scheme, Window window, Region region, std::vector<QuadLatticePoint> points)
    : scheme_(scheme), window_(std::move(window)), region_(region), points_(std::move(points)) {
  check_compatible(scheme_, window_);
  if (!(region_.lo < region_.hi)) throw ParameterError("point-set region must satisfy lo < hi");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto p = points_[i];
    if (i > 0 && compare_physical(points_[i - 1], p) >= 0) throw ParameterError("point-set positions must increase");
    if (!region_.contains(p)) throw ParameterError(fmt::format("point {} lies outside the region", to_string(p)));
    const bool periodic = scheme_.kind == SchemeKind::Periodic;
    if (periodic && p.v != 0) throw ParameterError("periodic point sets hold integers only");
    const auto s = periodic ? star(scheme_, p.u) : star(scheme_, p);
    if (!window_contains(window_, s)) {
      throw ParameterError(fmt::format("point {} has its star outside the window", to_string(p)));
    }
  }
}

double PointSet::density() const {
  return static_cast<double>(points_.size()) / region_.length().to_double();
}

namespace {

std::int64_t checked_rows(long double lo, long double hi) {
  const long double rows = hi - lo + 1;
  if (!(rows < static_cast<long double>(kMaxEnumerationRows))) {
    throw ResourceError(fmt::format("enumeration needs {:.3g} lattice rows (limit {}); shrink the region",
                                    static_cast<double>(rows), kMaxEnumerationRows));
  }
  return static_cast<std::int64_t>(rows);
}

std::vector<QuadLatticePoint> enumerate_golden(const IntervalUnion& real,
                                               const ResidueWindow* residues, const Region& region) {
  std::vector<QuadLatticePoint> out;
  if (real.empty() || (residues && residues->empty())) return out;
  const auto hull = real.hull();
  const long double wlo = hull.lo.value(), whi = hull.hi.value();
  const long double lo = region.lo.value(), hi = region.hi.value();
  // x - x' = v sqrt5 with x in region and x' in the window hull.
  const auto v_min = static_cast<std::int64_t>(std::floor((lo - whi) / kSqrt5)) - 1;
  const auto v_max = static_cast<std::int64_t>(std::ceil((hi - wlo) / kSqrt5)) + 1;
  checked_rows(static_cast<long double>(v_min), static_cast<long double>(v_max));
  for (std::int64_t v = v_min; v <= v_max; ++v) {
    const long double vt = static_cast<long double>(v) * kTau;
    const long double vc = static_cast<long double>(v) * kTauConj;
    const long double u_lo = std::max(wlo - vc, lo - vt);
    const long double u_hi = std::min(whi - vc, hi - vt);
    if (u_lo > u_hi + 1) continue;
    const auto u_first = static_cast<std::int64_t>(std::floor(u_lo)) - 1;
    const auto u_last = static_cast<std::int64_t>(std::ceil(u_hi)) + 1;
    for (std::int64_t u = u_first; u <= u_last; ++u) {
      const QuadLatticePoint p{u, v};
      if (residues && !residues->contains(u)) continue;
      if (!region.contains(p)) continue;
      if (!real.contains(star_value(p))) continue;
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), PhysicalLess{});
  return out;
}

std::vector<QuadLatticePoint> enumerate_periodic(const ResidueWindow& residues, const Region& region) {
  std::vector<QuadLatticePoint> out;
  if (residues.empty()) return out;
  const auto first = static_cast<std::int64_t>(std::floor(region.lo.value())) - 1;
  const auto last = static_cast<std::int64_t>(std::ceil(region.hi.value())) + 1;
  checked_rows(static_cast<long double>(first), static_cast<long double>(last));
  for (std::int64_t n = first; n <= last; ++n) {
    if (residues.contains(n) && region.contains(QuadLatticePoint{n, 0})) out.push_back({n, 0});
  }
  return out;
}

}  // namespace

PointSet generate(const Scheme& scheme, const Window& w, const Region& region) {
  check_compatible(scheme, w);
  if (!(region.lo < region.hi)) throw ParameterError("region must satisfy lo < hi");
  std::vector<QuadLatticePoint> points;
  switch (scheme.kind) {
    case SchemeKind::Fibonacci:
      points = enumerate_golden(std::get<IntervalUnion>(w), nullptr, region);
      break;
    case SchemeKind::Combined: {
      const auto& pw = std::get<ProductWindow>(w);
      points = enumerate_golden(pw.real, &pw.residues, region);
      break;
    }
    case SchemeKind::Periodic:
      points = enumerate_periodic(std::get<ResidueWindow>(w), region);
      break;
  }
  return PointSet(scheme, w, region, std::move(points));
}

PointSet generate_translate(const Scheme& scheme, const Window& w, const Region& region, QuadLatticePoint t) {
  if (scheme.kind == SchemeKind::Periodic && t.v != 0) throw ParameterError("periodic translations must be integers");
  const auto base = generate(scheme, w, region.translated(-t));
  // t + Lambda(w) = Lambda(star(t) + w)
  const auto s = scheme.kind == SchemeKind::Periodic ? star(scheme, t.u) : star(scheme, t);
  std::vector<QuadLatticePoint> shifted;
  shifted.reserve(base.size());
  for (const auto& p : base.points()) shifted.push_back(p + t);
  return PointSet(scheme, window_translate(w, s), region, std::move(shifted));
}

std::vector<double> gap_sequence(const PointSet& ps) {
  std::vector<double> gaps;
  for (const auto& g : gap_elements(ps)) gaps.push_back(static_cast<double>(g.physical()));
  return gaps;
}

std::vector<QuadLatticePoint> gap_elements(const PointSet& ps) {
  if (ps.size() < 2) throw ParameterError("gap sequence needs at least two points");
  std::vector<QuadLatticePoint> gaps;
  gaps.reserve(ps.size() - 1);
  const auto& pts = ps.points();
  for (std::size_t i = 1; i < pts.size(); ++i) gaps.push_back(pts[i] - pts[i - 1]);
  return gaps;
}

AbsentSiteGaps absent_site_gaps(const PointSet& ps, bool cyclic) {
  if (ps.scheme().kind != SchemeKind::Periodic) throw ParameterError("absent-site gaps need a periodic scheme");
  if (ps.size() < 2) throw ParameterError("gap sequence needs at least two points");
  AbsentSiteGaps out;
  const auto& pts = ps.points();
  for (std::size_t i = 1; i < pts.size(); ++i) out.gaps.push_back(pts[i].u - pts[i - 1].u - 1);
  if (cyclic) {
    const auto n = ps.scheme().modulus;
    if (pts.back().u - pts.front().u >= n) throw ParameterError("cyclic gaps need a patch within one period");
    out.wrap = pts.front().u + n - pts.back().u - 1;
  }
  return out;
}

double symmetric_difference_density(const PointSet& p, const PointSet& q) {
  if (!(p.region() == q.region())) throw ParameterError("symmetric difference needs patches on the same region");
  std::size_t common = 0;
  const auto& a = p.points();
  const auto& b = q.points();
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const int c = compare_physical(a[i], b[j]);
    if (c == 0) {
      ++common;
      ++i;
      ++j;
    } else if (c < 0) {
      ++i;
    } else {
      ++j;
    }
  }
  const auto sym = a.size() + b.size() - 2 * common;
  return static_cast<double>(sym) / p.region().length().to_double();
}

void write_pointset(std::ostream& out, const PointSet& ps) {
  out << fmt::format("# qcorr-pointset scheme={} window={} region=[{},{}]\n", to_string(ps.scheme()),
                     to_string(ps.window()), ps.region().lo.to_string(), ps.region().hi.to_string());
  const bool periodic = ps.scheme().kind == SchemeKind::Periodic;
  for (const auto& p : ps.points()) {
    if (periodic) {
      out << p.u << '\n';
    } else {
      out << p.u << ' ' << p.v << '\n';
    }
  }
}

PointSet read_pointset(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw ParameterError("empty point-set file");
  std::istringstream hs(header);
  std::string hash, tag;
  hs >> hash >> tag;
  if (hash != "#" || tag != "qcorr-pointset") throw ParameterError("missing point-set header");
  std::optional<Scheme> scheme;
  std::optional<Window> window;
  std::optional<Region> region;
  std::string field;
  while (hs >> field) {
    const auto eq = field.find('=');
    if (eq == std::string::npos) throw ParameterError(fmt::format("bad header field '{}'", field));
    const auto key = field.substr(0, eq);
    const auto value = field.substr(eq + 1);
    if (key == "scheme") {
      scheme = parse_scheme(value);
    } else if (key == "window") {
      window = parse_window(value);
    } else if (key == "region") {
      const auto comma = value.find(',');
      if (value.size() < 5 || value.front() != '[' || value.back() != ']' || comma == std::string::npos) {
        throw ParameterError(fmt::format("bad region '{}'", value));
      }
      region = Region{parse_golden_expression(value.substr(1, comma - 1)),
                      parse_golden_expression(value.substr(comma + 1, value.size() - comma - 2))};
    } else {
      throw ParameterError(fmt::format("unknown header field '{}'", key));
    }
  }
  if (!scheme || !window || !region) throw ParameterError("point-set header needs scheme, window and region");
  const bool periodic = scheme->kind == SchemeKind::Periodic;
  std::vector<QuadLatticePoint> points;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    QuadLatticePoint p;
    if (!(ls >> p.u)) throw ParameterError(fmt::format("bad point line '{}'", line));
    if (!periodic && !(ls >> p.v)) throw ParameterError(fmt::format("bad point line '{}'", line));
    std::string extra;
    if (ls >> extra) throw ParameterError(fmt::format("bad point line '{}'", line));
    points.push_back(p);
  }
  return PointSet(*scheme, *window, *region, std::move(points));
}

}  // namespace qcorr
