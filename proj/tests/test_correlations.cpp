#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "qcorr/correlations.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/homometry.hpp"

using namespace qcorr;

namespace {

const Scheme kFib = make_scheme(SchemeKind::Fibonacci);
const Scheme kP32 = make_scheme(SchemeKind::Periodic, 32);
const Scheme kC32 = make_scheme(SchemeKind::Combined, 32);
constexpr double kDensity = 0.72360679774997896964;

}  // namespace

TEST_CASE("exact frequencies") {
  const Window w = fibonacci_window();
  CHECK(freq_exact(kFib, w, parse_pattern("{0,tau}")) == doctest::Approx(0.4472135955).epsilon(1e-12));
  CHECK(freq_exact(kFib, w, parse_pattern("{0}")) == doctest::Approx(kDensity).epsilon(1e-12));
  CHECK(freq_exact(kFib, w, parse_pattern("{}")) == doctest::Approx(kDensity).epsilon(1e-12));
  CHECK(freq_exact(kFib, w, parse_pattern("{0,3}")) == 0);
  CHECK(freq_exact(kFib, w, parse_pattern("{1}")) == doctest::Approx(0.2763932023).epsilon(1e-9));
  CHECK(freq_exact(kP32, parse_window("{A}"), parse_pattern("{0,1}")) == 9.0 / 32);
  CHECK_THROWS_AS(parse_pattern("{0,1/2}"), ParameterError);
  CHECK_THROWS_AS(parse_pattern("{0,,1}"), ParameterError);
  CHECK_THROWS_AS(freq_exact(kP32, parse_window("{A}"), parse_pattern("{tau}")), ParameterError);
}

TEST_CASE("empirical frequencies converge to the exact ones") {
  const Window w = fibonacci_window();
  const auto patch = generate(kFib, w, make_region(-1e4 - 5, 1e4 + 5));
  CHECK(std::abs(freq_empirical(patch, parse_pattern("{0,tau}"), 2e4) - 0.4472135955) <= 0.01);
  CHECK(std::abs(freq_empirical(patch, parse_pattern("{0}"), 2e4) - kDensity) <= 0.01);
  const auto empty = generate(kFib, parse_window("empty"), make_region(-10, 10));
  CHECK(freq_empirical(empty, parse_pattern("{0,1}"), 5) == 0);
  CHECK_THROWS_AS(freq_empirical(patch, parse_pattern("{0,tau}"), 3e4), ParameterError);
}

TEST_CASE("correlation measure of order 2") {
  const auto c = correlation_measure(kFib, fibonacci_window(), 2, 5);
  CHECK(c.at({{0, 1}}) == doctest::Approx(0.4472135955).epsilon(1e-12));
  CHECK(c.at({{0, 0}}) == doctest::Approx(kDensity).epsilon(1e-12));
  CHECK(c.at({{3, 0}}) == 0);
  for (const auto& [t, f] : c.entries) {
    CAPTURE(to_string(t[0]));
    CHECK(f > 0);
    CHECK(c.at({-t[0]}) == doctest::Approx(f).epsilon(1e-12));
  }
  const auto zero = correlation_measure(kFib, fibonacci_window(), 2, 0);
  REQUIRE(zero.entries.size() == 1);
  CHECK(zero.entries.begin()->second == doctest::Approx(kDensity));
  CHECK_THROWS_AS(correlation_measure(kFib, fibonacci_window(), 5, 1), ParameterError);
  CHECK_THROWS_AS(correlation_measure(kFib, fibonacci_window(), 4, 1e6), ResourceError);
}

TEST_CASE("almost periods") {
  const Window w = fibonacci_window();
  const auto found = almost_periods(kFib, w, 0.1, {{0, 0}, {34, 55}, {55, 34}, {1000, 0}}, 1e4);
  std::vector<QuadLatticePoint> ts;
  for (const auto& a : found) ts.push_back(a.t);
  // 34 + 55 tau (star ~ 0.008) is an almost period; 55 + 34 tau (star ~ 34) is not
  CHECK(ts == std::vector<QuadLatticePoint>{{0, 0}, {34, 55}});
  CHECK(found[0].estimate == 0);
  CHECK(found[1].estimate < 0.05);
  // star 1000 moves the window off itself: the translate is disjoint from the set
  CHECK(almost_periods(kFib, w, 1.44, {{1000, 0}}, 1e4).empty());
  const auto region = make_region(-1e4, 1e4);
  const double far = symmetric_difference_density(generate(kFib, w, region), generate_translate(kFib, w, region, {1000, 0}));
  CHECK(far == doctest::Approx(2 * kDensity).epsilon(0.01));
  CHECK_THROWS_AS(almost_periods(kFib, w, 2, {}, 1e3), ParameterError);
  const auto cands = default_almost_period_candidates(kFib, w, 100);
  CHECK(std::find(cands.begin(), cands.end(), QuadLatticePoint{13, 21}) != cands.end());
}

TEST_CASE("comparison of correlation measures") {
  const auto c = correlation_measure(kFib, fibonacci_window(), 3, 4);
  CHECK(correlations_equal(c, c, 0).equal);
  const auto shrunk = correlation_measure(kFib, std::get<IntervalUnion>(parse_window("[-1,0.6)")), 3, 4);
  const auto cmp = correlations_equal(c, shrunk, 1e-12);
  CHECK_FALSE(cmp.equal);
  CHECK(cmp.witness);
  CHECK_THROWS_AS(correlations_equal(c, correlation_measure(kFib, fibonacci_window(), 2, 4), 0), ParameterError);

  const auto [a, b] = cyclotomic_pair();
  const auto ca = correlation_measure(kC32, ProductWindow{fibonacci_window(), a.window()}, 3, 5);
  const auto cb = correlation_measure(kC32, ProductWindow{fibonacci_window(), b.window()}, 3, 5);
  const auto ab = correlations_equal(ca, cb, 1e-12);
  CHECK(ab.equal);
  CHECK(ab.report.rfind("EQUAL", 0) == 0);
  const auto pa = correlation_measure(kP32, a.window(), 4, 31);
  const auto pb = correlation_measure(kP32, b.window(), 4, 31);
  CHECK_FALSE(correlations_equal(pa, pb, 0).equal);
}

TEST_CASE("correlation CSV") {
  const auto c = correlation_measure(kFib, fibonacci_window(), 2, 1);
  std::ostringstream out;
  write_correlation_csv(out, c);
  const auto text = out.str();
  CHECK(text.rfind("diff_1,frequency\n", 0) == 0);
  CHECK(text.find("0+1*tau,") == std::string::npos);  // tau lies beyond the cutoff
  CHECK(text.find("0+0*tau,0.723606797749979\n") != std::string::npos);
  std::ostringstream again;
  write_correlation_csv(again, correlation_measure(kFib, fibonacci_window(), 2, 1));
  CHECK(again.str() == text);
}

TEST_CASE("frequency properties") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-8, 8);
  const auto w = fibonacci_window();
  for (int i = 0; i < 200; ++i) {
    const QuadLatticePoint x{d(rng), d(rng)}, y{d(rng), d(rng)};
    const Pattern two({x}), three({x, y});
    const double f2 = freq_exact(kFib, w, two), f3 = freq_exact(kFib, w, three);
    CHECK(f3 <= f2 + 1e-15);
    const QuadRational t(d(rng), d(rng), 7);
    CHECK(freq_exact(kFib, w.translated(t), three) == doctest::Approx(f3).epsilon(1e-12));
    // product factorization over R x Z/32
    const auto a = cyclotomic_pair().first;
    const double interval = w.intersect(w.translated(-star_value(x))).intersect(w.translated(-star_value(y))).length().to_double() /
                            2.23606797749978969641;
    const auto table = pattern_table(a, 3);
    const double residue = table.frequency({x.u, y.u});
    CHECK(freq_exact(kC32, ProductWindow{w, a.window()}, three) == doctest::Approx(interval * residue).epsilon(1e-12));
  }
}
