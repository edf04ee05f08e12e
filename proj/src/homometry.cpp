#include "qcorr/homometry.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "qcorr/errors.hpp"
#include "qcorr/homometric_sets.hpp"

namespace qcorr {

namespace {

std::int64_t reduce(std::int64_t x, std::int64_t n) {
  const auto r = x % n;
  return r < 0 ? r + n : r;
}

// Every nondecreasing tuple of length len over [0, n).
void for_each_tuple(std::int64_t n, std::size_t len, const auto& body) {
  ResidueTuple r(len, 0);
  if (len == 0) {
    body(r);
    return;
  }
  while (true) {
    body(r);
    std::size_t i = len;
    while (i > 0 && r[i - 1] == n - 1) --i;
    if (i == 0) return;
    const auto v = r[i - 1] + 1;
    for (auto j = i - 1; j < len; ++j) r[j] = v;
  }
}

std::int64_t tuple_count(const ResidueSet& s, const ResidueTuple& r) {
  std::int64_t c = 0;
  for (auto t : s.elems()) {
    if (std::all_of(r.begin(), r.end(), [&](std::int64_t x) { return s.contains(t + x); })) ++c;
  }
  return c;
}

}  // namespace

ResidueSet::ResidueSet(std::int64_t modulus, std::vector<std::int64_t> elems) : window_(modulus, std::move(elems)) {
  if (window_.empty()) throw ParameterError("a residue set must be nonempty");
}

ResidueSet ResidueSet::transformed(int sign, std::int64_t t) const {
  std::vector<std::int64_t> out;
  out.reserve(size());
  for (auto a : elems()) out.push_back(sign * a + t);
  return ResidueSet(modulus(), std::move(out));
}

ResidueSet parse_residue_set(const std::string& text) {
  if (text == "A") return cyclotomic_pair().first;
  if (text == "B") return cyclotomic_pair().second;
  const auto w = parse_window(text);
  const auto* r = std::get_if<ResidueWindow>(&w);
  if (!r) throw ParameterError(fmt::format("'{}' is not a residue set", text));
  return ResidueSet(r->modulus(), r->elems());
}

std::string to_string(const ResidueSet& s) { return to_string(Window{s.window()}); }

std::pair<ResidueSet, ResidueSet> cyclotomic_pair() {
  using namespace homometric;
  return {ResidueSet(kModulus, {kSetA.begin(), kSetA.end()}), ResidueSet(kModulus, {kSetB.begin(), kSetB.end()})};
}

std::int64_t PatternTable::count(ResidueTuple r) const {
  if (r.size() + 1 != static_cast<std::size_t>(order)) throw ParameterError("tuple length does not match the order");
  for (auto& x : r) x = reduce(x, modulus);
  std::sort(r.begin(), r.end());
  return counts.at(r);
}

std::int64_t PatternTable::total() const {
  std::int64_t sum = 0;
  for (const auto& [r, c] : counts) sum += c;
  return sum;
}

PatternTable pattern_table(const ResidueSet& s, int order) {
  if (order < 2 || order > 4) throw ParameterError("pattern order must be 2, 3 or 4");
  PatternTable t;
  t.modulus = s.modulus();
  t.order = order;
  t.set_size = s.size();
  for_each_tuple(s.modulus(), static_cast<std::size_t>(order - 1),
                 [&](const ResidueTuple& r) { t.counts.emplace(r, tuple_count(s, r)); });
  return t;
}

void write_pattern_csv(std::ostream& out, const PatternTable& t) {
  for (int i = 1; i < t.order; ++i) out << "r_" << i << ',';
  out << "count,frequency\n";
  for (const auto& [r, c] : t.counts) {
    for (auto x : r) out << x << ',';
    out << fmt::format("{},{:.15g}\n", c, static_cast<double>(c) / static_cast<double>(t.modulus));
  }
}

TableComparison tables_equal(const PatternTable& t1, const PatternTable& t2) {
  if (t1.modulus != t2.modulus || t1.order != t2.order) throw ParameterError("tables differ in modulus or order");
  TableComparison out;
  for (const auto& [r, c1] : t1.counts) {
    const auto c2 = t2.counts.at(r);
    if (c1 == c2) continue;
    if (out.equal) {
      out.equal = false;
      out.witness = r;
      out.left = c1;
      out.right = c2;
    }
    ++out.differing;
  }
  return out;
}

std::optional<RigidMotion> rigid_equivalent(const ResidueSet& s, const ResidueSet& t) {
  if (s.modulus() != t.modulus()) throw ParameterError("residue sets differ in modulus");
  if (s.size() != t.size()) return std::nullopt;
  for (int sign : {1, -1}) {
    for (std::int64_t shift = 0; shift < s.modulus(); ++shift) {
      if (s.transformed(sign, shift) == t) return RigidMotion{sign, shift};
    }
  }
  return std::nullopt;
}

PointSet thinned_model_set(const IntervalUnion& w, const ResidueSet& s, const Region& region) {
  const auto scheme = make_scheme(SchemeKind::Combined, s.modulus());
  auto thinned = generate(scheme, ProductWindow{w, s.window()}, region);

  const auto plain = generate(make_scheme(SchemeKind::Fibonacci, std::nullopt), w, region);
  std::vector<QuadLatticePoint> filtered;
  for (const auto& p : plain.points())
    if (s.contains(p.u)) filtered.push_back(p);
  if (filtered != thinned.points()) {
    throw VerificationError("thinned model set disagrees with the filtered Fibonacci patch");
  }
  return thinned;
}

ResidueDeck residue_deck(const ResidueSet& s) {
  const auto n = s.modulus();
  const auto un = static_cast<std::size_t>(n);
  ResidueDeck d{n, std::vector<std::int64_t>(un, 0), std::vector<std::int64_t>(un * un, 0)};
  for (auto t : s.elems()) {
    for (auto a : s.elems()) {
      const auto w1 = static_cast<std::size_t>(reduce(t - a, n));
      ++d.I1[w1];
      for (auto b : s.elems()) ++d.I2[w1 * un + static_cast<std::size_t>(reduce(t - b, n))];
    }
  }
  return d;
}

double product_frequency(const IntervalUnion& w, const ResidueSet& s, const Pattern& pattern) {
  IntervalUnion real = w;
  ResidueTuple residues;
  for (const auto& x : pattern.points()) {
    real = real.intersect(w.translated(-star_value(x)));
    residues.push_back(x.u);
  }
  std::int64_t count = 0;
  for (auto t : s.elems()) {
    if (std::all_of(residues.begin(), residues.end(), [&](std::int64_t r) { return s.contains(t + r); })) ++count;
  }
  return real.length().to_double() / static_cast<double>(kSqrt5) * static_cast<double>(count) /
         static_cast<double>(s.modulus());
}

std::vector<Pattern> product_patterns(const IntervalUnion& w, const ResidueSet& s, double cutoff) {
  const auto fib = make_scheme(SchemeKind::Fibonacci, std::nullopt);
  auto candidates = difference_candidates(fib, w, cutoff);
  std::erase_if(candidates, [](QuadLatticePoint p) { return p.is_zero(); });
  std::sort(candidates.begin(), candidates.end(), PhysicalLess{});
  std::vector<Pattern> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    for (std::size_t j = i + 1; j < candidates.size(); ++j) {
      Pattern p({candidates[i], candidates[j]});
      if (product_frequency(w, s, p) > 0) out.push_back(std::move(p));
    }
  }
  return out;
}

ProductCorrelationReport product_correlation_check(const IntervalUnion& w, const ResidueSet& s1, const ResidueSet& s2,
                                                   const std::vector<Pattern>& patterns, double R, double rel,
                                                   double abs) {
  if (s1.modulus() != s2.modulus()) throw ParameterError("residue sets differ in modulus");
  ProductCorrelationReport report;
  long double reach = 0;
  for (const auto& p : patterns) reach = std::max({reach, -p.min_offset(), p.max_offset()});
  const double half = R / 2 + static_cast<double>(reach) + 1;
  const auto region = make_region(-half, half);
  const auto patch1 = thinned_model_set(w, s1, region);
  const auto patch2 = thinned_model_set(w, s2, region);
  for (const auto& p : patterns) {
    ProductCorrelationRow row{p, product_frequency(w, s1, p), product_frequency(w, s2, p),
                              freq_empirical(patch1, p, R), freq_empirical(patch2, p, R)};
    report.max_exact_difference = std::max(report.max_exact_difference, std::abs(row.exact_1 - row.exact_2));
    const double e1 = std::abs(row.empirical_1 - row.exact_1), e2 = std::abs(row.empirical_2 - row.exact_2);
    report.worst_empirical_excess =
        std::max({report.worst_empirical_excess, e1 - rel * row.exact_1 - abs, e2 - rel * row.exact_2 - abs});
    if (row.exact_1 > 0) {
      report.max_empirical_relative = std::max({report.max_empirical_relative, e1 / row.exact_1, e2 / row.exact_2});
      report.max_empirical_gap =
          std::max(report.max_empirical_gap, std::abs(row.empirical_1 - row.empirical_2) / row.exact_1);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::map<QuadLatticePoint, std::int64_t, LexLess> gap_multiset(const PointSet& ps) {
  std::map<QuadLatticePoint, std::int64_t, LexLess> out;
  for (const auto& g : gap_elements(ps)) ++out[g];
  return out;
}

}  // namespace qcorr
