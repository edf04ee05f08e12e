#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oracles.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/homometry.hpp"

using namespace qcorr;

namespace {

std::vector<bool> mask_of(const ResidueSet& s) {
  std::vector<bool> m(static_cast<std::size_t>(s.modulus()), false);
  for (auto a : s.elems()) m[static_cast<std::size_t>(a)] = true;
  return m;
}

}  // namespace

TEST_CASE("the cyclotomic pair") {
  const auto [a, b] = cyclotomic_pair();
  CHECK(a.size() == 16);
  CHECK(b.size() == 16);
  CHECK(a.modulus() == 32);
  CHECK_FALSE(a == b);
  CHECK(parse_residue_set("A") == a);
  CHECK(parse_residue_set("{B}") == b);
  CHECK(parse_residue_set("{0,7}@32").size() == 2);
  CHECK_THROWS_AS(parse_residue_set("[0,1)"), ParameterError);
  CHECK_THROWS_AS(parse_residue_set("empty"), ParameterError);
  CHECK_THROWS_AS(ResidueSet(32, {}), ParameterError);
}

TEST_CASE("pattern tables") {
  const auto [a, b] = cyclotomic_pair();
  const auto ta = pattern_table(a, 2), tb = pattern_table(b, 2);
  CHECK(ta.count({1}) == 9);
  CHECK(tb.count({1}) == 9);
  CHECK(ta.count({0}) == 16);
  CHECK(ta.count({33}) == 9);
  CHECK(ta.total() == 256);
  const auto t4 = pattern_table(a, 4);
  for (const auto& [r, c] : t4.counts) {
    if (r[0] > 3) break;
    CHECK(c == oracle::residue_pattern_count(mask_of(a), r));
  }
  CHECK_THROWS_AS(pattern_table(a, 5), ParameterError);
  CHECK_THROWS_AS(ta.count({1, 2}), ParameterError);
}

TEST_CASE("table comparison") {
  const auto [a, b] = cyclotomic_pair();
  CHECK(tables_equal(pattern_table(a, 2), pattern_table(b, 2)).equal);
  CHECK(tables_equal(pattern_table(a, 3), pattern_table(b, 3)).equal);
  const auto c4 = tables_equal(pattern_table(a, 4), pattern_table(b, 4));
  CHECK_FALSE(c4.equal);
  REQUIRE(c4.witness);
  CHECK(*c4.witness == ResidueTuple{1, 2, 4});
  CHECK(c4.left == 2);
  CHECK(c4.right == 3);
  CHECK(c4.differing == 1568);
  CHECK(oracle::residue_pattern_count(mask_of(a), *c4.witness) == c4.left);
  CHECK(oracle::residue_pattern_count(mask_of(b), *c4.witness) == c4.right);
}

TEST_CASE("rigid motions") {
  const auto [a, b] = cyclotomic_pair();
  CHECK(rigid_equivalent(a, a) == RigidMotion{1, 0});
  CHECK(rigid_equivalent(a, a.transformed(-1, 5)) == RigidMotion{-1, 5});
  CHECK(rigid_equivalent(a, a.transformed(1, 11)) == RigidMotion{1, 11});
  CHECK_FALSE(rigid_equivalent(a, b));
  CHECK_FALSE(rigid_equivalent(a, ResidueSet(32, {0})));
  CHECK_THROWS_AS(rigid_equivalent(a, ResidueSet(31, {0})), ParameterError);
}

TEST_CASE("table invariants") {
  const auto [a, b] = cyclotomic_pair();
  for (const auto& s : {a, b, ResidueSet(12, {0, 1, 5, 7})}) {
    for (int order = 2; order <= 4; ++order) {
      const auto t = pattern_table(s, order);
      for (std::int64_t shift = 1; shift < s.modulus(); shift += 5)
        CHECK(pattern_table(s.transformed(1, shift), order).counts == t.counts);
    }
    CHECK(pattern_table(s.transformed(-1, 0), 2).counts == pattern_table(s, 2).counts);
    std::int64_t sum = 0;
    for (std::int64_t r = 0; r < s.modulus(); ++r) sum += pattern_table(s, 2).count({r});
    CHECK(sum == static_cast<std::int64_t>(s.size() * s.size()));
  }
}

TEST_CASE("pattern CSV") {
  std::ostringstream out;
  write_pattern_csv(out, pattern_table(cyclotomic_pair().first, 2));
  CHECK(out.str().rfind("r_1,count,frequency\n0,16,0.5\n1,9,0.28125\n", 0) == 0);
}

TEST_CASE("thinned model sets") {
  const auto w = fibonacci_window();
  std::vector<std::int64_t> all(32);
  for (int i = 0; i < 32; ++i) all[static_cast<std::size_t>(i)] = i;
  const auto region = make_region(-200, 200);
  const auto full = thinned_model_set(w, ResidueSet(32, all), region);
  CHECK(full.points() == generate(make_scheme(SchemeKind::Fibonacci), w, region).points());

  const auto [a, b] = cyclotomic_pair();
  const auto small = thinned_model_set(w, a, make_region(-5, 5));
  const auto plain = generate(make_scheme(SchemeKind::Fibonacci), w, make_region(-5, 5));
  std::vector<QuadLatticePoint> expect;
  for (const auto& p : plain.points())
    if (a.contains(((p.u % 32) + 32) % 32)) expect.push_back(p);
  CHECK(small.points() == expect);
  CHECK(std::find(expect.begin(), expect.end(), QuadLatticePoint{0, 0}) != expect.end());

  const auto ta = thinned_model_set(w, a, make_region(0, 1000)), tb = thinned_model_set(w, b, make_region(0, 1000));
  CHECK(gap_multiset(ta) != gap_multiset(tb));
  const double expected_density = 1.6180339887498949 / (2 * 2.2360679774997897);
  const auto la = thinned_model_set(w, a, make_region(0, 1e5)), lb = thinned_model_set(w, b, make_region(0, 1e5));
  CHECK(la.density() == doctest::Approx(expected_density).epsilon(0.01));
  CHECK(lb.density() == doctest::Approx(expected_density).epsilon(0.01));
  CHECK(window_measure(make_scheme(SchemeKind::Combined, 32), ProductWindow{w, a.window()}) ==
        doctest::Approx(expected_density).epsilon(1e-14));
}

TEST_CASE("residue decks of A and B coincide") {
  const auto [a, b] = cyclotomic_pair();
  const auto da = residue_deck(a), db = residue_deck(b);
  CHECK(da == db);
  CHECK(da.I1[0] == 16);
  CHECK(da.I2[0] == 16);
  CHECK_FALSE(residue_deck(ResidueSet(32, {0, 1, 3})) == residue_deck(ResidueSet(32, {0, 1, 4})));
}

TEST_CASE("product frequencies") {
  const auto w = fibonacci_window();
  const auto [a, b] = cyclotomic_pair();
  const auto patterns = product_patterns(w, a, 4);
  REQUIRE(!patterns.empty());
  for (const auto& p : patterns) {
    CHECK(product_frequency(w, a, p) > 0);
    CHECK(std::abs(product_frequency(w, a, p) - product_frequency(w, b, p)) < 1e-12);
    CHECK(product_frequency(w, a, p) ==
          doctest::Approx(freq_exact(make_scheme(SchemeKind::Combined, 32), ProductWindow{w, a.window()}, p))
              .epsilon(1e-12));
  }
  const auto same = product_correlation_check(w, a, a, patterns, 2000);
  CHECK(same.max_exact_difference == 0);
  CHECK(same.max_empirical_gap == 0);
}
