#include "qcorr/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "qcorr/errors.hpp"
#include "qcorr/parallel.hpp"

namespace qcorr {

namespace {

InternalPoint star_of(const Scheme& scheme, QuadLatticePoint x) {
  if (scheme.kind == SchemeKind::Periodic) {
    if (x.v != 0) throw ParameterError(fmt::format("{} is not in the periodic lattice Z", to_string(x)));
    return star(scheme, x.u);
  }
  return star(scheme, x);
}

ResidueWindow full_residues(const Scheme& scheme) {
  std::vector<std::int64_t> all(static_cast<std::size_t>(scheme.modulus));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::int64_t>(i);
  return {scheme.modulus, std::move(all)};
}

const IntervalUnion* real_part(const Window& w) {
  if (auto* iu = std::get_if<IntervalUnion>(&w)) return iu;
  if (auto* pw = std::get_if<ProductWindow>(&w)) return &pw->real;
  return nullptr;
}

}  // namespace

// Patterns ---------------------------------------------------------------------

Pattern::Pattern(std::vector<QuadLatticePoint> points) {
  std::erase_if(points, [](QuadLatticePoint p) { return p.is_zero(); });
  std::sort(points.begin(), points.end(), PhysicalLess{});
  points.erase(std::unique(points.begin(), points.end()), points.end());
  points_ = std::move(points);
}

long double Pattern::min_offset() const { return points_.empty() ? 0.0L : std::min(0.0L, points_.front().physical()); }

long double Pattern::max_offset() const { return points_.empty() ? 0.0L : std::max(0.0L, points_.back().physical()); }

Pattern parse_pattern(const std::string& text) {
  std::string body = text;
  std::erase_if(body, [](char c) { return c == ' ' || c == '\t'; });
  if (!body.empty() && body.front() == '{') {
    if (body.back() != '}') throw ParameterError(fmt::format("bad pattern '{}'", text));
    body = body.substr(1, body.size() - 2);
  }
  std::vector<QuadLatticePoint> points;
  int parens = 0;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) throw ParameterError(fmt::format("bad pattern '{}': empty entry", text));
    const auto q = parse_golden_expression(cur);
    if (q.d() != 1) throw ParameterError(fmt::format("pattern entry '{}' is not a lattice point", cur));
    points.push_back({q.a(), q.b()});
    cur.clear();
  };
  for (char c : body) {
    if (c == '(') ++parens;
    if (c == ')') --parens;
    if (c == ',' && parens == 0) {
      flush();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !points.empty()) flush();
  return Pattern(std::move(points));
}

// Frequencies -------------------------------------------------------------------

double freq_exact(const Scheme& scheme, const Window& w, const Pattern& pattern) {
  check_compatible(scheme, w);
  Window acc = w;
  for (const auto& x : pattern.points()) {
    if (window_empty(acc)) break;
    acc = window_intersect(acc, window_translate(w, -star_of(scheme, x)));
  }
  return window_measure(scheme, acc);
}

std::int64_t count_occurrences(const PointSet& ps, const Pattern& pattern, double R) {
  if (!(R > 0) || !std::isfinite(R)) throw ParameterError("averaging radius R must be positive");
  for (const auto& x : pattern.points()) star_of(ps.scheme(), x);
  if (ps.empty()) return 0;
  const long double half = static_cast<long double>(R) / 2;
  const long double need_lo = -half + pattern.min_offset();
  const long double need_hi = half + pattern.max_offset();
  if (ps.region().lo.value() > need_lo || ps.region().hi.value() < need_hi) {
    throw ParameterError(fmt::format("patch region [{:.6g},{:.6g}] too small: R = {} with this pattern needs [{:.6g},{:.6g}]",
                                     ps.region().lo.to_double(), ps.region().hi.to_double(), R,
                                     static_cast<double>(need_lo), static_cast<double>(need_hi)));
  }
  const std::unordered_set<QuadLatticePoint, QuadLatticePointHash> lookup(ps.points().begin(), ps.points().end());
  std::int64_t count = 0;
  for (const auto& y : ps.points()) {
    const auto pos = y.physical();
    if (pos < -half || pos >= half) continue;
    const bool hit = std::all_of(pattern.points().begin(), pattern.points().end(),
                                 [&](QuadLatticePoint x) { return lookup.contains(y + x); });
    if (hit) ++count;
  }
  return count;
}

double freq_empirical(const PointSet& ps, const Pattern& pattern, double R) {
  return static_cast<double>(count_occurrences(ps, pattern, R)) / R;
}

// Correlation measures ----------------------------------------------------------------

bool TupleLess::operator()(const DifferenceTuple& a, const DifferenceTuple& b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](QuadLatticePoint x, QuadLatticePoint y) { return x.lex(y) < 0; });
}

double CorrelationMeasure::at(const DifferenceTuple& t) const {
  const auto it = entries.find(t);
  return it == entries.end() ? 0.0 : it->second;
}

std::vector<QuadLatticePoint> difference_candidates(const Scheme& scheme, const Window& w, double cutoff) {
  check_compatible(scheme, w);
  if (!(cutoff >= 0) || !std::isfinite(cutoff)) throw ParameterError("cutoff must be finite and nonnegative");
  if (window_empty(w)) return {};
  Window diff;
  if (scheme.kind == SchemeKind::Periodic) {
    diff = full_residues(scheme);
  } else {
    const auto hull = real_part(w)->hull();
    const auto width = hull.hi - hull.lo;
    auto real = IntervalUnion::single(-width, width);
    diff = scheme.kind == SchemeKind::Fibonacci ? Window{real} : Window{ProductWindow{real, full_residues(scheme)}};
  }
  const auto bound = std::ceil(cutoff) + 1;
  const auto patch = generate(scheme, diff, make_region(-bound, bound));
  std::vector<QuadLatticePoint> out;
  for (const auto& p : patch.points()) {
    if (std::abs(p.physical()) <= static_cast<long double>(cutoff)) out.push_back(p);
  }
  return out;
}

CorrelationMeasure correlation_measure(const Scheme& scheme, const Window& w, int order, double cutoff) {
  if (order < 2 || order > 4) throw ParameterError(fmt::format("correlation order must be 2, 3 or 4, got {}", order));
  const auto diffs = difference_candidates(scheme, w, cutoff);
  const int arity = order - 1;
  const auto base = static_cast<std::int64_t>(diffs.size());
  long double total = 1;
  for (int i = 0; i < arity; ++i) total *= static_cast<long double>(base);
  if (total > static_cast<long double>(kMaxCorrelationTuples)) {
    throw ResourceError(fmt::format("order-{} measure at cutoff {} needs {:.3g} tuples (limit {})", order, cutoff,
                                    static_cast<double>(total), kMaxCorrelationTuples));
  }

  CorrelationMeasure out{scheme, order, cutoff, window_measure(scheme, w), {}};
  if (base == 0) return out;

  // Each worker owns the tuples whose first coordinate is diffs[i].
  std::vector<std::vector<std::pair<DifferenceTuple, double>>> rows(diffs.size());
  parallel_for(diffs.size(), [&](std::size_t i) {
    DifferenceTuple tuple(static_cast<std::size_t>(arity));
    tuple[0] = diffs[i];
    const auto inner = static_cast<std::int64_t>(std::llround(total)) / base;
    for (std::int64_t rest = 0; rest < inner; ++rest) {
      auto r = rest;
      for (int j = arity - 1; j >= 1; --j) {
        tuple[static_cast<std::size_t>(j)] = diffs[static_cast<std::size_t>(r % base)];
        r /= base;
      }
      const double f = freq_exact(scheme, w, Pattern(tuple));
      if (f > 0) rows[i].emplace_back(tuple, f);
    }
  });
  for (auto& row : rows) {
    for (auto& [tuple, f] : row) out.entries.emplace(std::move(tuple), f);
  }
  return out;
}

// Almost periods ------------------------------------------------------------------------

std::vector<AlmostPeriod> almost_periods(const Scheme& scheme, const Window& w, double eps,
                                         const std::vector<QuadLatticePoint>& candidates, double R) {
  const double density = window_measure(scheme, w);
  if (!(eps > 0 && eps < 2 * density)) throw ParameterError("eps must lie in (0, 2 * density)");
  if (!(R > 0)) throw ParameterError("R must be positive");
  const auto region = make_region(-R, R);
  const auto base = generate(scheme, w, region);
  std::vector<AlmostPeriod> found;
  for (const auto& t : candidates) {
    const auto moved = generate_translate(scheme, w, region, t);
    const double estimate = symmetric_difference_density(base, moved);
    if (estimate < eps) found.push_back({t, estimate});
  }
  return found;
}

std::vector<QuadLatticePoint> default_almost_period_candidates(const Scheme& scheme, const Window& w,
                                                               double search_radius) {
  check_compatible(scheme, w);
  if (!(search_radius > 0)) throw ParameterError("search radius must be positive");
  std::vector<QuadLatticePoint> out;
  if (scheme.kind == SchemeKind::Periodic) {
    for (std::int64_t n = 1; n <= static_cast<std::int64_t>(std::floor(search_radius)); ++n) out.push_back({n, 0});
    return out;
  }
  if (window_empty(w)) return out;
  const auto hull = real_part(w)->hull();
  const auto width = hull.hi - hull.lo;
  const auto near = IntervalUnion::single(-width, width);
  const auto patch = generate(make_scheme(SchemeKind::Fibonacci), near, make_region(0, search_radius));
  for (const auto& p : patch.points()) {
    if (p.physical() > 0) out.push_back(p);
  }
  return out;
}

// Comparison and output --------------------------------------------------------------------

std::string format_coordinate(const Scheme& scheme, QuadLatticePoint p) {
  if (scheme.kind == SchemeKind::Periodic) return fmt::format("{}", p.u);
  return to_string(p);
}

namespace {

std::string tuple_string(const Scheme& scheme, const DifferenceTuple& t) {
  std::vector<std::string> parts;
  for (const auto& p : t) parts.push_back(format_coordinate(scheme, p));
  return fmt::format("({})", fmt::join(parts, ", "));
}

}  // namespace

CorrelationComparison correlations_equal(const CorrelationMeasure& c1, const CorrelationMeasure& c2, double tol) {
  if (c1.order != c2.order) throw ParameterError("cannot compare correlation measures of different order");
  if (c1.cutoff != c2.cutoff) throw ParameterError("cannot compare correlation measures with different cutoffs");
  if (!(tol >= 0)) throw ParameterError("tolerance must be nonnegative");
  CorrelationComparison out;
  auto report = [&](const DifferenceTuple& t, double a, double b, const char* why) {
    out.equal = false;
    out.witness = t;
    out.left = a;
    out.right = b;
    out.report = fmt::format("{} at {}: {:.15g} vs {:.15g}", why, tuple_string(c1.scheme, t), a, b);
  };
  auto i = c1.entries.begin();
  auto j = c2.entries.begin();
  const TupleLess less;
  while (i != c1.entries.end() || j != c2.entries.end()) {
    if (j == c2.entries.end() || (i != c1.entries.end() && less(i->first, j->first))) {
      report(i->first, i->second, 0.0, "support differs");
      return out;
    }
    if (i == c1.entries.end() || less(j->first, i->first)) {
      report(j->first, 0.0, j->second, "support differs");
      return out;
    }
    if (std::abs(i->second - j->second) > tol) {
      report(i->first, i->second, j->second, "frequency differs");
      return out;
    }
    ++i;
    ++j;
  }
  out.report = fmt::format("EQUAL ({} tuples, order {}, cutoff {}, tol {:g})", c1.entries.size(), c1.order, c1.cutoff, tol);
  return out;
}

void write_correlation_csv(std::ostream& out, const CorrelationMeasure& c) {
  for (int j = 1; j < c.order; ++j) out << "diff_" << j << ',';
  out << "frequency\n";
  for (const auto& [tuple, f] : c.entries) {
    for (const auto& p : tuple) out << format_coordinate(c.scheme, p) << ',';
    out << fmt::format("{:.15g}\n", f);
  }
}

}  // namespace qcorr
