#include <doctest.h>

#include <cstring>
#include <random>

#include <json.hpp>

#include "qcorr/errors.hpp"
#include "qcorr/reconstruct.hpp"

using namespace qcorr;

namespace {

IntervalUnion iu(const std::string& s) { return std::get<IntervalUnion>(parse_window(s)); }

DeckGrid deck_of(const std::string& lit, std::size_t M = 512, double L = 8) {
  return deck_functions(sample_indicator(iu(lit), M, L), M, L);
}

std::vector<std::uint8_t> shifted(const std::vector<std::uint8_t>& f, std::size_t s) {
  std::vector<std::uint8_t> g(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) g[(j + s) % f.size()] = f[j];
  return g;
}

}  // namespace

TEST_CASE("phase quotient basics") {
  const auto deck = deck_of("[0,1)u[1.5,2.25)");
  const auto q = phase_quotient(deck, default_eps_zero(deck));
  CHECK(std::abs(q.at(0, 0) - 1.0) < 1e-12);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> d(0, q.M - 1);
  std::size_t samples = 0;
  double worst = 0;
  while (samples < 10000) {
    const auto k1 = d(rng), k2 = d(rng);
    if (!q.defined(k1, k2)) continue;
    ++samples;
    worst = std::max(worst, std::abs(std::abs(q.at(k1, k2)) - 1));
  }
  CHECK(worst < 1e-8);
  CHECK(zero_free_radius(q) > 0);
}

TEST_CASE("symmetric windows give a real quotient") {
  // cells -32..32 at h = 1/64: symmetric about 0 on the grid
  const auto deck = deck_of("[-0.5,0.515625)", 512, 4);
  const auto q = phase_quotient(deck, default_eps_zero(deck));
  for (std::size_t k1 = 0; k1 < q.M; k1 += 3)
    for (std::size_t k2 = 0; k2 < q.M; k2 += 5) {
      if (!q.defined(k1, k2)) continue;
      const auto z = q.at(k1, k2);
      const auto sign = [&](std::size_t k) { return deck.F[k].real() >= 0 ? 1.0 : -1.0; };
      CHECK(std::abs(z.imag()) < 1e-8);
      CHECK(std::abs(z.real() - sign(k1) * sign(k2) * sign((k1 + k2) % q.M)) < 1e-8);
    }
}

TEST_CASE("propagation reaches all of D for an interval") {
  const auto deck = deck_of("[0,1)", 512, 8);
  const double eps = default_eps_zero(deck);
  const auto q = phase_quotient(deck, eps);
  const auto phase = propagate_phase(q);
  std::size_t below = 0;
  for (double a : q.absF) below += a < eps;
  CHECK(below > 0);  // the sinc zeros of [0,1) fall on the grid
  CHECK(phase.unknown_count() == 0);
  CHECK(phase.d_count == q.M - below);
  CHECK(phase.phi[0] == std::complex<double>(1, 0));
  for (std::size_t k = 0; k < q.M; ++k) {
    if (phase.known[k]) CHECK(std::abs(std::abs(phase.phi[k]) - 1) < 1e-10);
    if (!q.in_D[k]) CHECK_FALSE(phase.known[k]);
  }
  CHECK(phase_residual(q, phase) < 1e-6);
}

TEST_CASE("round trips recover translates") {
  for (auto lit : {"[0,1)", "[-0.5,0.5)", "[0,1)u[1.5,2.25)", "[0,0.4)u[0.6,1.1)", "[-1,1/tau)"}) {
    CAPTURE(lit);
    const auto report = self_test(iu(lit));
    REQUIRE(report.mismatch);
    CHECK(*report.mismatch < 0.01);
    CHECK(report.unknown_count == 0);
  }
}

TEST_CASE("asymmetric window comes back unflipped") {
  const auto f = to_indicator(sample_indicator(iu("[0,1)u[1.5,2.25)"), 512, 8));
  const auto report = self_test(iu("[0,1)u[1.5,2.25)"));
  CHECK(*report.mismatch == 0);
  const auto flipped = align_up_to_translation(reflect(f), report.indicator);
  CHECK(flipped.mismatch > 0.05);
}

TEST_CASE("alignment") {
  const auto f = to_indicator(sample_indicator(iu("[0,1)u[1.5,2.25)"), 128, 8));
  const auto a = align_up_to_translation(f, shifted(f, 7));
  CHECK(a.shift == 7);
  CHECK(a.mismatch == 0);
  const auto same = align_up_to_translation(f, f);
  CHECK(same.shift == 0);
  CHECK(same.mismatch == 0);
  const auto r = reflect(f);
  for (std::size_t s = 0; s < f.size(); ++s) {
    const auto g = shifted(r, s);
    CHECK(g != f);
  }
  CHECK(align_up_to_translation(f, r).mismatch > 0);
  CHECK(reflect(r) == f);
  CHECK_THROWS_AS(align_up_to_translation(f, std::vector<std::uint8_t>(4)), ParameterError);
}

TEST_CASE("translated windows share their deck data") {
  const std::size_t M = 512;
  const auto f = sample_indicator(iu("[0,0.4)u[0.6,1.1)"), M, 8);
  std::vector<double> g(M);
  for (std::size_t j = 0; j < M; ++j) g[(j + 37) % M] = f[j];
  const auto df = deck_functions(f, M, 8), dg = deck_functions(g, M, 8);
  CHECK(df.I1 == dg.I1);
  CHECK(df.I2 == dg.I2);
  const auto rf = reconstruct_from_deck(df), rg = reconstruct_from_deck(dg);
  CHECK(rf.indicator == rg.indicator);
  const auto fi = to_indicator(f);
  const auto again = reconstruct_from_deck(dg, &fi);
  CHECK(*again.mismatch < 0.01);
}

TEST_CASE("propagation is deterministic") {
  const auto deck = deck_of("[-1,1/tau)");
  const auto q = phase_quotient(deck, default_eps_zero(deck));
  const auto p1 = propagate_phase(q), p2 = propagate_phase(q);
  REQUIRE(p1.phi.size() == p2.phi.size());
  CHECK(std::memcmp(p1.phi.data(), p2.phi.data(), p1.phi.size() * sizeof(p1.phi[0])) == 0);
  CHECK(p1.known == p2.known);
}

TEST_CASE("failure modes") {
  const auto deck = deck_of("[0,1)");
  CHECK_THROWS_AS(phase_quotient(deck, 1e9), DegenerateInputError);
  CHECK_THROWS_AS(phase_quotient(deck, 0), ParameterError);
  const auto q = phase_quotient(deck, default_eps_zero(deck));
  auto phase = propagate_phase(q);
  for (std::size_t k = 2; k < phase.M - 1; ++k) phase.known[k] = 0;
  try {
    reconstruct_window(q, phase, deck.cell());
    FAIL("expected a reconstruction error");
  } catch (const ReconstructionError& e) {
    CHECK(e.partial().values.size() == q.M);
  }
}

TEST_CASE("report JSON") {
  const auto report = self_test(iu("[0,1)"), 256, 8);
  const auto j = nlohmann::json::parse(report.to_json());
  for (auto key : {"M", "L_half", "eps_zero", "unknown_count", "shift", "mismatch", "uncertain_cells"}) {
    CAPTURE(key);
    CHECK(j.contains(key));
  }
  CHECK(j["M"] == 256);
  CHECK(j["mismatch"].get<double>() < 0.01);
}
