#include "qcorr/schemes.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "qcorr/errors.hpp"
#include "qcorr/homometric_sets.hpp"

namespace qcorr {

namespace {

std::int64_t reduce(std::int64_t x, std::int64_t n) {
  auto r = x % n;
  return r < 0 ? r + n : r;
}

void check_modulus(std::int64_t a, std::int64_t b) {
  if (a != b) throw ParameterError(fmt::format("residue modulus mismatch: {} vs {}", a, b));
}

[[noreturn]] void kind_mismatch(const char* what) { throw ParameterError(fmt::format("window kind mismatch in {}", what)); }

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits on a separator outside parentheses, braces and "[a,b)" intervals.
// An interval opens with '[' and is closed by the first ')' at paren depth 0.
std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int parens = 0;
  int braces = 0;
  bool in_interval = false;
  std::string cur;
  for (char c : s) {
    if (c == '(') {
      ++parens;
    } else if (c == ')') {
      if (parens > 0) {
        --parens;
      } else {
        in_interval = false;
      }
    } else if (c == '[') {
      in_interval = true;
    } else if (c == '{') {
      ++braces;
    } else if (c == '}') {
      --braces;
    }
    if (c == sep && parens == 0 && braces == 0 && !in_interval) {
      out.push_back(trim(cur));
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

// Scheme ---------------------------------------------------------------------

double Scheme::normalization() const {
  switch (kind) {
    case SchemeKind::Fibonacci:
      return static_cast<double>(kSqrt5);
    case SchemeKind::Periodic:
      return static_cast<double>(modulus);
    case SchemeKind::Combined:
      return static_cast<double>(kSqrt5 * static_cast<long double>(modulus));
  }
  return 1.0;
}

Scheme make_scheme(SchemeKind kind, std::optional<std::int64_t> modulus) {
  if (kind == SchemeKind::Fibonacci) {
    if (modulus) throw ParameterError("the Fibonacci scheme takes no modulus");
    return {kind, 0};
  }
  if (!modulus) throw ParameterError("periodic and combined schemes need a modulus N");
  if (*modulus < 2) throw ParameterError(fmt::format("modulus must be at least 2, got {}", *modulus));
  return {kind, *modulus};
}

Scheme parse_scheme(const std::string& text) {
  const auto t = trim(text);
  const auto colon = t.find(':');
  const auto name = t.substr(0, colon);
  std::optional<std::int64_t> n;
  if (colon != std::string::npos) {
    try {
      std::size_t used = 0;
      n = std::stoll(t.substr(colon + 1), &used);
      if (used != t.size() - colon - 1) throw ParameterError("trailing characters");
    } catch (const std::exception&) {
      throw ParameterError(fmt::format("bad scheme modulus in '{}'", text));
    }
  }
  if (name == "fibonacci") return make_scheme(SchemeKind::Fibonacci, n);
  if (name == "periodic") return make_scheme(SchemeKind::Periodic, n);
  if (name == "combined") return make_scheme(SchemeKind::Combined, n);
  throw ParameterError(fmt::format("unknown scheme '{}' (expected fibonacci, periodic:N or combined:N)", text));
}

std::string to_string(const Scheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::Fibonacci:
      return "fibonacci";
    case SchemeKind::Periodic:
      return fmt::format("periodic:{}", scheme.modulus);
    case SchemeKind::Combined:
      return fmt::format("combined:{}", scheme.modulus);
  }
  return "?";
}

// Internal points --------------------------------------------------------------

Residue make_residue(std::int64_t r, std::int64_t modulus) {
  if (modulus < 1) throw ParameterError("modulus must be positive");
  return {reduce(r, modulus), modulus};
}

InternalPoint operator+(const InternalPoint& a, const InternalPoint& b) {
  if (auto* x = std::get_if<RealPoint>(&a)) {
    if (auto* y = std::get_if<RealPoint>(&b)) return RealPoint{x->y + y->y};
  } else if (auto* x = std::get_if<Residue>(&a)) {
    if (auto* y = std::get_if<Residue>(&b)) {
      check_modulus(x->modulus, y->modulus);
      return make_residue(x->r + y->r, x->modulus);
    }
  } else if (auto* x = std::get_if<ProductPoint>(&a)) {
    if (auto* y = std::get_if<ProductPoint>(&b)) {
      check_modulus(x->modulus, y->modulus);
      return ProductPoint{x->y + y->y, reduce(x->r + y->r, x->modulus), x->modulus};
    }
  }
  throw ParameterError("internal point kind mismatch");
}

InternalPoint operator-(const InternalPoint& a) {
  return std::visit(
      [](const auto& p) -> InternalPoint {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, RealPoint>) {
          return RealPoint{-p.y};
        } else if constexpr (std::is_same_v<T, Residue>) {
          return make_residue(-p.r, p.modulus);
        } else {
          return ProductPoint{-p.y, reduce(-p.r, p.modulus), p.modulus};
        }
      },
      a);
}

InternalPoint star(const Scheme& scheme, QuadLatticePoint p) {
  switch (scheme.kind) {
    case SchemeKind::Fibonacci:
      return RealPoint{star_value(p)};
    case SchemeKind::Combined:
      return ProductPoint{star_value(p), reduce(p.u, scheme.modulus), scheme.modulus};
    case SchemeKind::Periodic:
      break;
  }
  throw ParameterError("periodic schemes take integer points, not u + v tau");
}

InternalPoint star(const Scheme& scheme, std::int64_t x) {
  if (scheme.kind != SchemeKind::Periodic) throw ParameterError("integer star input is only valid for periodic schemes");
  return make_residue(x, scheme.modulus);
}

// Interval unions ----------------------------------------------------------------

IntervalUnion::IntervalUnion(std::vector<Interval> parts) {
  for (const auto& iv : parts) {
    if (!(iv.lo < iv.hi)) {
      throw ParameterError(fmt::format("interval [{},{}) is empty", iv.lo.to_string(), iv.hi.to_string()));
    }
  }
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (auto& iv : parts) {
    if (!parts_.empty() && iv.lo <= parts_.back().hi) {
      if (parts_.back().hi < iv.hi) parts_.back().hi = iv.hi;
    } else {
      parts_.push_back(iv);
    }
  }
}

bool IntervalUnion::contains(const QuadRational& y) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& iv) { return iv.lo <= y && y < iv.hi; });
}

QuadRational IntervalUnion::length() const {
  QuadRational total;
  for (const auto& iv : parts_) total = total + (iv.hi - iv.lo);
  return total;
}

Interval IntervalUnion::hull() const {
  if (parts_.empty()) throw ParameterError("hull of an empty window");
  return {parts_.front().lo, parts_.back().hi};
}

IntervalUnion IntervalUnion::translated(const QuadRational& t) const {
  IntervalUnion out;
  out.parts_.reserve(parts_.size());
  for (const auto& iv : parts_) out.parts_.push_back({iv.lo + t, iv.hi + t});
  return out;
}

IntervalUnion IntervalUnion::reflected() const {
  std::vector<Interval> parts;
  for (const auto& iv : parts_) parts.push_back({-iv.hi, -iv.lo});
  return IntervalUnion(std::move(parts));
}

IntervalUnion IntervalUnion::intersect(const IntervalUnion& o) const {
  IntervalUnion out;
  std::size_t i = 0, j = 0;
  while (i < parts_.size() && j < o.parts_.size()) {
    const auto& a = parts_[i];
    const auto& b = o.parts_[j];
    const auto lo = std::max(a.lo, b.lo);
    const auto hi = std::min(a.hi, b.hi);
    if (lo < hi) out.parts_.push_back({lo, hi});
    if (a.hi < b.hi) {
      ++i;
    } else {
      ++j;
    }
  }
  return out;
}

IntervalUnion IntervalUnion::unite(const IntervalUnion& o) const {
  auto parts = parts_;
  parts.insert(parts.end(), o.parts_.begin(), o.parts_.end());
  return IntervalUnion(std::move(parts));
}

Window empty_window(const Scheme& scheme) {
  switch (scheme.kind) {
    case SchemeKind::Periodic:
      return ResidueWindow(scheme.modulus, {});
    case SchemeKind::Combined:
      return ProductWindow{IntervalUnion{}, ResidueWindow(scheme.modulus, {})};
    default:
      return IntervalUnion{};
  }
}

IntervalUnion fibonacci_window() { return IntervalUnion::single(QuadRational(-1), QuadRational(-1, 1)); }

// Residue windows ------------------------------------------------------------------

ResidueWindow::ResidueWindow(std::int64_t modulus, std::vector<std::int64_t> elems) : modulus_(modulus) {
  if (modulus < 1) throw ParameterError("residue modulus must be positive");
  for (auto& e : elems) e = reduce(e, modulus);
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  elems_ = std::move(elems);
}

bool ResidueWindow::contains(std::int64_t r) const {
  return std::binary_search(elems_.begin(), elems_.end(), reduce(r, modulus_));
}

ResidueWindow ResidueWindow::translated(std::int64_t t) const {
  auto e = elems_;
  for (auto& x : e) x += t;
  return {modulus_, std::move(e)};
}

ResidueWindow ResidueWindow::intersect(const ResidueWindow& o) const {
  check_modulus(modulus_, o.modulus_);
  std::vector<std::int64_t> out;
  std::set_intersection(elems_.begin(), elems_.end(), o.elems_.begin(), o.elems_.end(), std::back_inserter(out));
  return {modulus_, std::move(out)};
}

// Window operations -------------------------------------------------------------------

bool window_empty(const Window& w) {
  return std::visit(
      [](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ProductWindow>) {
          return x.real.empty() || x.residues.empty();
        } else {
          return x.empty();
        }
      },
      w);
}

void check_compatible(const Scheme& scheme, const Window& w) {
  switch (scheme.kind) {
    case SchemeKind::Fibonacci:
      if (!std::holds_alternative<IntervalUnion>(w)) throw ParameterError("Fibonacci scheme needs an interval window");
      return;
    case SchemeKind::Periodic:
      if (auto* r = std::get_if<ResidueWindow>(&w)) {
        check_modulus(scheme.modulus, r->modulus());
        return;
      }
      throw ParameterError("periodic scheme needs a residue-set window");
    case SchemeKind::Combined:
      if (auto* p = std::get_if<ProductWindow>(&w)) {
        check_modulus(scheme.modulus, p->residues.modulus());
        return;
      }
      throw ParameterError("combined scheme needs a product window");
  }
}

bool window_contains(const Window& w, const InternalPoint& p) {
  if (auto* iu = std::get_if<IntervalUnion>(&w)) {
    if (auto* x = std::get_if<RealPoint>(&p)) return iu->contains(x->y);
  } else if (auto* rw = std::get_if<ResidueWindow>(&w)) {
    if (auto* x = std::get_if<Residue>(&p)) {
      check_modulus(rw->modulus(), x->modulus);
      return rw->contains(x->r);
    }
  } else if (auto* pw = std::get_if<ProductWindow>(&w)) {
    if (auto* x = std::get_if<ProductPoint>(&p)) {
      check_modulus(pw->residues.modulus(), x->modulus);
      return pw->residues.contains(x->r) && pw->real.contains(x->y);
    }
  }
  kind_mismatch("window_contains");
}

double window_measure(const Scheme& scheme, const Window& w) {
  // the literal "empty" is an interval union; its measure is 0 in any scheme
  if (auto* iu = std::get_if<IntervalUnion>(&w); iu && iu->empty()) return 0;
  check_compatible(scheme, w);
  if (auto* iu = std::get_if<IntervalUnion>(&w)) {
    return static_cast<double>(iu->length().value() / kSqrt5);
  }
  if (auto* rw = std::get_if<ResidueWindow>(&w)) {
    return static_cast<double>(rw->size()) / static_cast<double>(rw->modulus());
  }
  const auto& pw = std::get<ProductWindow>(w);
  return static_cast<double>(pw.real.length().value() / kSqrt5 * static_cast<long double>(pw.residues.size()) /
                             static_cast<long double>(pw.residues.modulus()));
}

Window window_translate(const Window& w, const InternalPoint& t) {
  if (auto* iu = std::get_if<IntervalUnion>(&w)) {
    if (auto* x = std::get_if<RealPoint>(&t)) return iu->translated(x->y);
  } else if (auto* rw = std::get_if<ResidueWindow>(&w)) {
    if (auto* x = std::get_if<Residue>(&t)) {
      check_modulus(rw->modulus(), x->modulus);
      return rw->translated(x->r);
    }
  } else if (auto* pw = std::get_if<ProductWindow>(&w)) {
    if (auto* x = std::get_if<ProductPoint>(&t)) {
      check_modulus(pw->residues.modulus(), x->modulus);
      return ProductWindow{pw->real.translated(x->y), pw->residues.translated(x->r)};
    }
  }
  kind_mismatch("window_translate");
}

Window window_intersect(const Window& w1, const Window& w2) {
  if (auto* a = std::get_if<IntervalUnion>(&w1)) {
    if (auto* b = std::get_if<IntervalUnion>(&w2)) return a->intersect(*b);
  } else if (auto* a = std::get_if<ResidueWindow>(&w1)) {
    if (auto* b = std::get_if<ResidueWindow>(&w2)) return a->intersect(*b);
  } else if (auto* a = std::get_if<ProductWindow>(&w1)) {
    if (auto* b = std::get_if<ProductWindow>(&w2)) {
      return ProductWindow{a->real.intersect(b->real), a->residues.intersect(b->residues)};
    }
  }
  kind_mismatch("window_intersect");
}

// Literals -------------------------------------------------------------------------------

namespace {

IntervalUnion parse_interval_union(const std::string& text) {
  const auto t = trim(text);
  if (t == "empty") return {};
  std::vector<Interval> parts;
  for (const auto& piece : split_top_level(t, 'u')) {
    if (piece == "fib") {
      parts.push_back(fibonacci_window().parts().front());
      continue;
    }
    if (piece.size() < 4 || piece.front() != '[' || piece.back() != ')') {
      throw ParameterError(fmt::format("bad interval '{}' (expected [a,b))", piece));
    }
    const auto body = piece.substr(1, piece.size() - 2);
    // The comma separating the endpoints is the only top-level one.
    const auto ends = split_top_level(body, ',');
    if (ends.size() != 2) throw ParameterError(fmt::format("bad interval '{}'", piece));
    parts.push_back({parse_golden_expression(ends[0]), parse_golden_expression(ends[1])});
  }
  return IntervalUnion(std::move(parts));
}

ResidueWindow parse_residue_set(const std::string& text) {
  const auto t = trim(text);
  const auto close = t.find('}');
  if (t.empty() || t.front() != '{' || close == std::string::npos) {
    throw ParameterError(fmt::format("bad residue set '{}' (expected {{a,b,...}}@N)", text));
  }
  const auto body = trim(t.substr(1, close - 1));
  const auto rest = trim(t.substr(close + 1));
  std::optional<std::int64_t> modulus;
  if (!rest.empty()) {
    if (rest.front() != '@') throw ParameterError(fmt::format("bad residue set '{}'", text));
    try {
      std::size_t used = 0;
      modulus = std::stoll(rest.substr(1), &used);
      if (used != rest.size() - 1) throw ParameterError("trailing");
    } catch (const std::exception&) {
      throw ParameterError(fmt::format("bad modulus in '{}'", text));
    }
  }
  if (body == "A" || body == "B") {
    if (modulus && *modulus != homometric::kModulus) throw ParameterError("aliases A and B live in Z/32");
    const auto& set = body == "A" ? homometric::kSetA : homometric::kSetB;
    return {homometric::kModulus, {set.begin(), set.end()}};
  }
  if (!modulus) throw ParameterError(fmt::format("residue set '{}' needs a modulus suffix @N", text));
  std::vector<std::int64_t> elems;
  if (!body.empty()) {
    for (const auto& e : split_top_level(body, ',')) {
      try {
        std::size_t used = 0;
        elems.push_back(std::stoll(e, &used));
        if (used != e.size()) throw ParameterError("trailing");
      } catch (const std::exception&) {
        throw ParameterError(fmt::format("bad residue '{}' in '{}'", e, text));
      }
    }
  }
  if (*modulus < 1) throw ParameterError("modulus must be positive");
  return {*modulus, std::move(elems)};
}

std::string interval_union_string(const IntervalUnion& iu) {
  if (iu.empty()) return "empty";
  std::string out;
  for (const auto& iv : iu.parts()) {
    if (!out.empty()) out += "u";
    out += fmt::format("[{},{})", iv.lo.to_string(), iv.hi.to_string());
  }
  return out;
}

std::string residue_string(const ResidueWindow& rw) {
  return fmt::format("{{{}}}@{}", fmt::join(rw.elems(), ","), rw.modulus());
}

}  // namespace

Window parse_window(const std::string& text) {
  const auto pieces = split_top_level(trim(text), 'x');
  if (pieces.size() == 2) return ProductWindow{parse_interval_union(pieces[0]), parse_residue_set(pieces[1])};
  if (pieces.size() != 1) throw ParameterError(fmt::format("bad window literal '{}'", text));
  const auto& t = pieces[0];
  if (!t.empty() && t.front() == '{') return parse_residue_set(t);
  return parse_interval_union(t);
}

std::string to_string(const Window& w) {
  if (auto* iu = std::get_if<IntervalUnion>(&w)) return interval_union_string(*iu);
  if (auto* rw = std::get_if<ResidueWindow>(&w)) return residue_string(*rw);
  const auto& pw = std::get<ProductWindow>(w);
  return interval_union_string(pw.real) + "x" + residue_string(pw.residues);
}

}  // namespace qcorr
