// qcorr: command-line front end.
//
// Exit codes: 0 success, 1 internal error, 2 usage or parameter error,
// 3 verification failure, 4 resource limit.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/correlations.hpp"
#include "qcorr/deck.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/homometry.hpp"
#include "qcorr/pointsets.hpp"
#include "qcorr/reconstruct.hpp"
#include "qcorr/schemes.hpp"
#include "qcorr/spectra.hpp"

namespace {

using namespace qcorr;

constexpr const char* kVersion = "0.1.0";

/// Writes through a temporary file renamed into place; "-" or "" means stdout.
void write_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ParameterError(fmt::format("cannot write {}", tmp.string()));
    body(out);
    out.flush();
    if (!out) throw ParameterError(fmt::format("write to {} failed", tmp.string()));
  }
  std::filesystem::rename(tmp, target);
}

/// "empty" parses as an interval union; give it the kind the scheme expects.
Window scheme_window(const Scheme& scheme, const std::string& literal) {
  auto w = parse_window(literal);
  if (window_empty(w) && std::holds_alternative<IntervalUnion>(w)) return empty_window(scheme);
  return w;
}

// generate --------------------------------------------------------------------------

struct GenerateArgs {
  std::string scheme = "fibonacci";
  std::string window = "fib";
  std::vector<double> region{-10, 10};
  std::string output = "-";
};

int run_generate(const GenerateArgs& a) {
  const auto scheme = parse_scheme(a.scheme);
  const auto window = scheme_window(scheme, a.window);
  const auto ps = generate(scheme, window, make_region(a.region.at(0), a.region.at(1)));
  write_output(a.output, [&](std::ostream& out) { write_pointset(out, ps); });
  return 0;
}

// correlate -------------------------------------------------------------------------

struct CorrelateArgs {
  std::string scheme = "fibonacci";
  std::string window = "fib";
  int order = 2;
  double cutoff = 5;
  bool empirical = false;
  double radius = 1e4;
  std::string compare;
  double tol = 1e-12;
  std::string output = "-";
};

int run_correlate(const CorrelateArgs& a) {
  const auto scheme = parse_scheme(a.scheme);
  const auto window = scheme_window(scheme, a.window);
  if (!(a.cutoff >= 0) || !std::isfinite(a.cutoff)) throw ParameterError("cutoff must be finite and nonnegative");
  const auto c = correlation_measure(scheme, window, a.order, a.cutoff);

  if (!a.compare.empty()) {
    const auto other = correlation_measure(scheme, scheme_window(scheme, a.compare), a.order, a.cutoff);
    const auto cmp = correlations_equal(c, other, a.tol);
    std::cout << cmp.report << '\n';
    return cmp.equal ? 0 : 3;
  }

  std::optional<PointSet> patch;
  if (a.empirical) {
    if (!(a.radius > 0) || !std::isfinite(a.radius)) throw ParameterError("radius must be positive");
    const double half = a.radius / 2 + a.cutoff + 1;
    patch = generate(scheme, window, make_region(-half, half));
  }
  write_output(a.output, [&](std::ostream& out) {
    if (!patch) {
      write_correlation_csv(out, c);
      return;
    }
    for (int i = 1; i < a.order; ++i) out << "diff_" << i << ',';
    out << "exact,empirical\n";
    for (const auto& [tuple, freq] : c.entries) {
      for (const auto& x : tuple) out << format_coordinate(scheme, x) << ',';
      const auto emp = freq_empirical(*patch, Pattern(tuple), a.radius);
      out << fmt::format("{:.15g},{:.15g}\n", freq, emp);
    }
  });
  return 0;
}

// diffract --------------------------------------------------------------------------

struct DiffractArgs {
  std::string scheme = "periodic:32";
  std::string window = "{A}";
  std::optional<double> kmax;
  double floor = 1e-6;
  bool include_zeros = false;
  std::string output = "-";
  std::string svg;
};

int run_diffract(const DiffractArgs& a) {
  const auto scheme = parse_scheme(a.scheme);
  const auto window = scheme_window(scheme, a.window);
  check_compatible(scheme, window);
  DiffractionOptions opts;
  opts.include_zeros = a.include_zeros;
  opts.floor = a.floor;
  Spectrum s;
  if (scheme.kind == SchemeKind::Periodic && !a.kmax) {
    // one full period, b = 0 .. N
    s = diffraction(scheme, window, 1.0, opts);
    std::erase_if(s.peaks, [&](const Peak& p) { return p.label.m < 0 || p.label.m > scheme.modulus; });
  } else {
    if (!a.kmax) throw ParameterError("--kmax is required for golden schemes");
    s = diffraction(scheme, window, *a.kmax, opts);
  }
  write_output(a.output, [&](std::ostream& out) { write_spectrum_csv(out, s); });
  if (!a.svg.empty()) {
    write_output(a.svg, [&](std::ostream& out) {
      // the stick plot shows extinctions as gaps, so draw every b of the period
      auto full = s;
      if (!a.include_zeros) {
        DiffractionOptions z = opts;
        z.include_zeros = true;
        full = diffraction(scheme, window, 1.0, z);
      }
      write_periodic_svg(out, full);
      out << fmt::format("<!-- qcorr {} -->\n", kVersion);
    });
  }
  return 0;
}

// reconstruct -----------------------------------------------------------------------

struct ReconstructArgs {
  bool selftest = false;
  std::string window;
  std::string deck;
  std::size_t grid = kDefaultGridSize;
  double half_length = kDefaultHalfLength;
  std::optional<double> eps_zero;
  bool allow_large = false;
  double max_mismatch = 0.01;
  std::string write_deck;
  std::string report = "-";
  std::string window_csv;
};

int run_reconstruct(const ReconstructArgs& a) {
  DeckOptions deck_opts;
  deck_opts.allow_large = a.allow_large;
  ReconstructionReport report;
  if (a.selftest) {
    if (a.window.empty()) throw ParameterError("--selftest needs --window");
    if (!a.deck.empty()) throw ParameterError("--selftest and --deck are exclusive");
    const auto parsed = parse_window(a.window);
    const auto* w = std::get_if<IntervalUnion>(&parsed);
    if (!w) throw ParameterError("reconstruction works on interval-union windows");
    const auto f = sample_indicator(*w, a.grid, a.half_length);
    const auto reference = to_indicator(f);
    auto full = deck_functions(f, a.grid, a.half_length, deck_opts);
    if (!a.write_deck.empty()) write_output(a.write_deck, [&](std::ostream& out) { write_deck_json(out, full); });
    const auto tables = deck_from_tables(a.grid, a.half_length, std::move(full.I1), std::move(full.I2), deck_opts);
    report = reconstruct_from_deck(tables, &reference, a.eps_zero);
  } else {
    if (a.deck.empty()) throw ParameterError("give --deck FILE, or --selftest with --window");
    std::ifstream in(a.deck);
    if (!in) throw ParameterError(fmt::format("cannot read {}", a.deck));
    const auto deck = read_deck_json(in, deck_opts);
    report = reconstruct_from_deck(deck, nullptr, a.eps_zero);
  }
  write_output(a.report, [&](std::ostream& out) { out << report.to_json() << '\n'; });
  if (!a.window_csv.empty()) {
    write_output(a.window_csv, [&](std::ostream& out) {
      out << "index,position,indicator\n";
      for (std::size_t j = 0; j < report.M; ++j)
        out << fmt::format("{},{:.15g},{}\n", j, report.positions[j], report.indicator[j]);
    });
  }
  if (report.mismatch && *report.mismatch >= a.max_mismatch) {
    std::cerr << fmt::format("self-test failed: mismatch {:.4f} >= {:.4f}\n", *report.mismatch, a.max_mismatch);
    return 3;
  }
  return 0;
}

// homometry -------------------------------------------------------------------------

struct HomometryArgs {
  std::vector<std::string> sets{"A", "B"};
  std::optional<int> order;
  std::string table_csv;
  bool product = false;
  double cutoff = 10;
  double radius = 1e4;
};

std::string tuple_text(const ResidueTuple& r) { return fmt::format("({})", fmt::join(r, ",")); }

int run_homometry(const HomometryArgs& a) {
  const auto s = parse_residue_set(a.sets.at(0));
  const auto t = parse_residue_set(a.sets.at(1));
  if (s.modulus() != t.modulus()) throw ParameterError("sets must share their modulus");
  const auto [A, B] = cyclotomic_pair();
  const bool reference_pair = s == A && t == B;
  bool ok = true;
  auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    std::cout << fmt::format("{:<34} {:<4} {}\n", name, pass ? "PASS" : "FAIL", detail);
    ok = ok && pass;
  };
  auto info = [](const std::string& name, const std::string& detail) {
    std::cout << fmt::format("{:<34} {:<4} {}\n", name, "-", detail);
  };
  std::cout << fmt::format("S = {}\nT = {}\n", to_string(s), to_string(t));

  const std::vector<int> orders = a.order ? std::vector<int>{*a.order} : std::vector<int>{2, 3, 4};
  for (int n : orders) {
    const auto ts = pattern_table(s, n);
    const auto tt = pattern_table(t, n);
    const auto cmp = tables_equal(ts, tt);
    std::string detail = cmp.equal ? "tables identical"
                                   : fmt::format("{} tuples differ; first {}: {} vs {}", cmp.differing,
                                                 tuple_text(*cmp.witness), cmp.left, cmp.right);
    if (!reference_pair) {
      info(fmt::format("{}-point tables", n), detail);
    } else if (n < 4) {
      line(fmt::format("{}-point tables equal", n), cmp.equal, detail);
    } else {
      line("4-point tables differ", !cmp.equal, detail);
    }
    if (!a.table_csv.empty() && a.order) {
      write_output(a.table_csv, [&](std::ostream& out) { write_pattern_csv(out, ts); });
    }
  }

  const auto motion = rigid_equivalent(s, t);
  const std::string motion_text =
      motion ? fmt::format("x -> {}x + {}", motion->sign > 0 ? "+" : "-", motion->shift) : "none of the 2N motions";
  if (reference_pair) {
    line("rigidly inequivalent", !motion, motion_text);
  } else {
    info("rigid equivalence", motion ? fmt::format("({},{}) {}", motion->sign > 0 ? "+" : "-", motion->shift, motion_text)
                                     : motion_text);
  }

  if (reference_pair && !a.order) {
    const auto scheme = make_scheme(SchemeKind::Periodic, s.modulus());
    const auto region = make_region(0, static_cast<double>(s.modulus() - 1));
    const auto gs = absent_site_gaps(generate(scheme, s.window(), region), true);
    const auto gt = absent_site_gaps(generate(scheme, t.window(), region), true);
    auto show = [](const AbsentSiteGaps& g) { return fmt::format("({};{})", fmt::join(g.gaps, ","), g.wrap.value_or(0)); };
    const bool prefix = gs.gaps.size() >= 4 && gs.gaps[0] == 6 && gs.gaps[1] == 0 && gs.gaps[2] == 0 &&
                        gs.gaps[3] == 2 && gs.gaps[gs.gaps.size() - 2] == 1 && gs.gaps.back() == 0 && gs.wrap == 1 &&
                        gt.gaps.size() >= 4 && gt.gaps[0] == 0 && gt.gaps[1] == 6 && gt.gaps[2] == 0 &&
                        gt.gaps[3] == 0 && gt.gaps[gt.gaps.size() - 2] == 3 && gt.gaps.back() == 2 && gt.wrap == 1;
    line("gap sequences", prefix && gs.gaps != gt.gaps, show(gs) + " vs " + show(gt));
  }

  if (a.product) {
    const auto w = fibonacci_window();
    auto patterns = product_patterns(w, s, a.cutoff);
    const auto rep = product_correlation_check(w, s, t, patterns, a.radius);
    const auto detail = fmt::format(
        "{} patterns, max exact difference {:.3g}, empirical error up to {:.2f}% of exact (A vs B {:.2f}%)",
        rep.rows.size(), rep.max_exact_difference, 100 * rep.max_empirical_relative, 100 * rep.max_empirical_gap);
    if (reference_pair) {
      line("thinned 3-point frequencies", rep.exact_equal(1e-12) && rep.worst_empirical_excess <= 0, detail);
    } else {
      info("thinned 3-point frequencies", detail);
    }
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcorr: model sets, their point correlations, diffraction and window reconstruction"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate",
                               "Enumerate a patch of a cut-and-project set (Fibonacci chain, periodic residue sets, "
                               "or their product) on a region");
  g->add_option("--scheme", gen.scheme, "fibonacci | periodic:N | combined:N")->capture_default_str();
  g->add_option("--window", gen.window, "window literal, e.g. \"[-1,1/tau)\", \"{A}\", \"fibx{B}\"")
      ->capture_default_str();
  g->add_option("--region", gen.region, "physical region LO HI")->expected(2)->capture_default_str();
  g->add_option("-o,--output", gen.output, "output file ('-' for stdout)")->capture_default_str();

  CorrelateArgs cor;
  auto* c = app.add_subcommand("correlate",
                               "Exact k-point correlation measure from the window formula, optionally with empirical "
                               "pattern frequencies; --compare checks two windows for equal correlations");
  c->add_option("--scheme", cor.scheme)->capture_default_str();
  c->add_option("--window", cor.window)->capture_default_str();
  c->add_option("--order", cor.order, "2, 3 or 4")->check(CLI::Range(2, 4))->capture_default_str();
  c->add_option("--cutoff", cor.cutoff, "largest |difference|")->capture_default_str();
  c->add_flag("--empirical", cor.empirical, "add empirical frequencies from a patch of length --radius");
  c->add_option("--radius", cor.radius, "averaging length R of the empirical estimate")->capture_default_str();
  c->add_option("--compare", cor.compare, "second window; prints EQUAL or the first discrepancy");
  c->add_option("--tol", cor.tol, "comparison tolerance")->capture_default_str();
  c->add_option("-o,--output", cor.output)->capture_default_str();

  DiffractArgs dif;
  auto* d = app.add_subcommand("diffract",
                               "Pure-point diffraction intensities |FT(1_W)(-k*)|^2; for periodic schemes one full "
                               "period with the extinction stick plot of the homometric pair");
  d->add_option("--scheme", dif.scheme)->capture_default_str();
  d->add_option("--window", dif.window)->capture_default_str();
  d->add_option("--kmax", dif.kmax, "largest |k| (default for periodic schemes: one period b = 0..N)");
  d->add_option("--floor", dif.floor, "smallest intensity listed for golden schemes")->capture_default_str();
  d->add_flag("--include-zeros", dif.include_zeros, "list extinct positions too");
  d->add_option("-o,--output", dif.output)->capture_default_str();
  d->add_option("--svg", dif.svg, "also write a stick plot (periodic schemes)");

  ReconstructArgs rec;
  auto* r = app.add_subcommand("reconstruct",
                               "Recover a window from its 2- and 3-point deck data by phase propagation; the "
                               "result is a translate of the original");
  r->add_flag("--selftest", rec.selftest, "sample --window, compute its deck, forget the window, recover it");
  r->add_option("--window", rec.window, "interval-union window for --selftest");
  r->add_option("--deck", rec.deck, "deck JSON file to reconstruct from");
  r->add_option("--grid", rec.grid, "grid size M")->capture_default_str();
  r->add_option("--half-length", rec.half_length, "grid covers [-L, L)")->capture_default_str();
  r->add_option("--eps-zero", rec.eps_zero, "|F| threshold of the support D (default 1e-4 max|F|)");
  r->add_flag("--allow-large", rec.allow_large, "permit grids above 512");
  r->add_option("--max-mismatch", rec.max_mismatch, "self-test failure threshold")->capture_default_str();
  r->add_option("--write-deck", rec.write_deck, "save the deck tables as JSON");
  r->add_option("--report", rec.report, "report JSON path")->capture_default_str();
  r->add_option("--window-csv", rec.window_csv, "recovered indicator CSV");

  HomometryArgs hom;
  auto* h = app.add_subcommand("homometry",
                               "Verify the cyclotomic homometric pair A, B mod 32: equal 2- and 3-point tables, "
                               "differing 4-point tables, rigid inequivalence, gap sequences");
  h->add_option("--sets", hom.sets, "two residue sets (A, B or {..}@N)")->expected(2)->capture_default_str();
  h->add_option("--order", hom.order, "compare only this order and print its witness")->check(CLI::Range(2, 4));
  h->add_option("--table-csv", hom.table_csv, "with --order, write the first set's table");
  h->add_flag("--product", hom.product, "also compare 3-point frequencies of the thinned Fibonacci sets");
  h->add_option("--cutoff", hom.cutoff, "pattern cutoff for --product")->capture_default_str();
  h->add_option("--radius", hom.radius, "averaging length for --product")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*g) return run_generate(gen);
    if (*c) return run_correlate(cor);
    if (*d) return run_diffract(dif);
    if (*r) return run_reconstruct(rec);
    if (*h) return run_homometry(hom);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DegenerateInputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return 3;
  } catch (const ReconstructionError& e) {
    std::cerr << "reconstruction failed: " << e.what() << '\n';
    return 3;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
