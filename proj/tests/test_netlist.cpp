#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "qoptics/machine.hpp"
#include "qoptics/netlist.hpp"
#include "support.hpp"

using namespace qoptics;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream f(std::string(QOPTICS_NETLIST_DIR) + "/" + name);
  REQUIRE_MESSAGE(f.good(), "missing corpus file " << name);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

double dist_gap(const OutcomeDist& a, const OutcomeDist& b) {
  double gap = 0.0;
  for (const auto& [occ, p] : a.entries()) gap = std::max(gap, std::abs(p - b.probability(occ)));
  for (const auto& [occ, p] : b.entries()) gap = std::max(gap, std::abs(p - a.probability(occ)));
  return gap;
}

std::string without_s(std::string text) {
  const std::string line = "phase a pi          # S\n";
  const auto at = text.find(line);
  REQUIRE(at != std::string::npos);
  return text.erase(at, line.size());
}

const char* const kCorpus[] = {"deutsch_k00.qnl",      "deutsch_k01.qnl", "deutsch_k10.qnl",
                               "deutsch_k11.qnl",      "reduced_k10.qnl",       "reduced_k10_no_s.qnl",
                               "classical_k10.qnl",    "deutsch_k10_explicit.qnl",
                               "deutsch_k10_lossy.qnl"};

}  // namespace

TEST_CASE("small programs") {
  const auto bs = execute(parse_netlist("modes 2\ncutoff 2\nstate fock 0 1\nbs a b\nmeasure"));
  CHECK(bs.dist.probability({0, 1}) == doctest::Approx(0.5));
  CHECK(bs.dist.probability({1, 0}) == doctest::Approx(0.5));

  const auto ph = execute(parse_netlist("modes 1\ncutoff 2\nstate fock 1\nphase a pi\nmeasure"));
  CHECK(ph.dist.probability({1}) == doctest::Approx(1.0));

  const Program vac = parse_netlist("modes 2\ncutoff 3\n");
  CHECK(!vac.state);
  CHECK(execute(vac).dist.probability({0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("keywords and modes are case-insensitive; comments are ignored") {
  const Program a = parse_netlist("MODES 2 # two modes\nCutoff 2\nSTATE FOCK 0 1\nBS A B PI/4\n# done\nMeasure\n");
  const Program b = parse_netlist("modes 2\ncutoff 2\nstate fock 0 1\nbs a b pi/4\nmeasure");
  CHECK(a == b);
}

TEST_CASE("angle expressions") {
  auto theta = [](const std::string& expr) {
    const Program p = parse_netlist("modes 2\ncutoff 2\nbs a b " + expr);
    return std::get<Beamsplitter>(std::get<GateSpec>(p.body.at(0).node).kind).theta;
  };
  CHECK(theta("pi/4") == kPi / 4);
  CHECK(theta("-pi/2") == -kPi / 2);
  CHECK(theta("3*pi/4") == 3 * kPi / 4);
  CHECK(theta("0.25") == 0.25);
  CHECK(theta("1e-3") == 1e-3);
  CHECK(theta("2*3") == 6.0);
  const Program dflt = parse_netlist("modes 3\ncutoff 2\nbs a b\nfredkin a b c");
  CHECK(std::get<Beamsplitter>(std::get<GateSpec>(dflt.body[0].node).kind).theta == kPi / 4);
  CHECK(std::get<Fredkin>(std::get<GateSpec>(dflt.body[1].node).kind).chi == kPi);
}

TEST_CASE("corpus parses and round-trips") {
  for (const char* name : kCorpus) {
    CAPTURE(name);
    const Program p = parse_netlist(slurp(name));
    const std::string printed = pretty_print(p);
    const Program q = parse_netlist(printed);
    CHECK(p == q);
    CHECK(pretty_print(q) == printed);
  }
}

TEST_CASE("pretty printing uses pi fractions") {
  const Program p = parse_netlist("modes 3\ncutoff 2\nbs c a -pi/4\nphase b 3*pi/2\nkerr a b 0.5\nadjoint { fredkin a b c }");
  const std::string s = pretty_print(p);
  CHECK(s.find("bs c a -pi/4\n") != std::string::npos);
  CHECK(s.find("phase b 3*pi/2\n") != std::string::npos);
  CHECK(s.find("kerr a b 0.5\n") != std::string::npos);
  CHECK(s.find("adjoint {\n  fredkin a b c pi\n}\n") != std::string::npos);
}

TEST_CASE("machine transcriptions match the programmatic builder") {
  const char* files[] = {"deutsch_k00.qnl", "deutsch_k01.qnl", "deutsch_k10.qnl", "deutsch_k11.qnl"};
  for (unsigned k = 0; k < 4; ++k) {
    CAPTURE(k);
    const std::string text = slurp(files[k]);
    MachineConfig cfg;
    cfg.k = k;
    CHECK(dist_gap(execute(parse_netlist(text)).dist, run_machine(cfg)) <= 1e-12);
    cfg.with_s = false;
    CHECK(dist_gap(execute(parse_netlist(without_s(text))).dist, run_machine(cfg)) <= 1e-12);
  }
  const auto k10 = execute(parse_netlist(slurp("deutsch_k10.qnl")));
  CHECK(k10.dist.probability({0, 1, 1, 0}) == doctest::Approx(1.0));
}

TEST_CASE("explicit second pass equals the adjoint block") {
  const auto a = execute(parse_netlist(slurp("deutsch_k10.qnl")));
  const auto b = execute(parse_netlist(slurp("deutsch_k10_explicit.qnl")));
  CHECK(dist_gap(a.dist, b.dist) <= 1e-12);
  CHECK(testsupport::max_abs(std::get<FockVector>(a.final_state).amplitudes() -
                             std::get<FockVector>(b.final_state).amplitudes()) < 1e-12);
}

TEST_CASE("reduced circuits") {
  const auto a = execute(parse_netlist(slurp("reduced_k10.qnl")));
  MachineConfig cfg;
  cfg.k = 0b10;
  const OutcomeDist full = run_machine(cfg);
  const auto ma = a.dist.marginal(2), mf = full.marginal(2);
  REQUIRE(ma.size() == mf.size());
  for (std::size_t i = 0; i < ma.size(); ++i) CHECK(std::abs(ma[i] - mf[i]) < 1e-12);
  CHECK(std::abs(a.dist.marginal(3)[0] - full.marginal(3)[0]) < 1e-12);
  CHECK(a.dist.probability({0, 1, 1, 0}) == doctest::Approx(1.0));

  const auto b = execute(parse_netlist(slurp("reduced_k10_no_s.qnl")));
  CHECK(b.dist.probability({0, 1, 0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("lossy transcription matches the lossy machine") {
  const auto r = execute(parse_netlist(slurp("deutsch_k10_lossy.qnl")));
  CHECK(std::holds_alternative<DensityOp>(r.final_state));
  MachineConfig cfg;
  cfg.k = 0b10;
  cfg.gamma = 0.5;
  CHECK(dist_gap(r.dist, run_machine(cfg)) <= 1e-12);
}

TEST_CASE("coherent transcription matches the builder under both Kerr models") {
  const Program p = parse_netlist(slurp("classical_k10.qnl"));
  MachineConfig cfg;
  cfg.k = 0b10;
  cfg.input = CoherentInput{1.0, 16};
  for (KerrModel m : {KerrModel::Quantum, KerrModel::MeanField}) {
    EvalOptions opts;
    opts.kerr_model = m;
    CHECK(dist_gap(execute(p, opts).dist, run_machine(cfg, m)) <= 1e-12);
  }
  CHECK_THROWS_AS(execute(parse_netlist("modes 1\ncutoff 4\nstate coherent a 2\n")), CutoffError);
}

TEST_CASE("malformed inputs give positioned diagnostics") {
  struct Case {
    const char* text;
    int line, col;
  };
  const Case cases[] = {
      {"bs a", 1, 1},
      {"modes 4\ncutoff 2\nfoo a b", 3, 1},
      {"modes 4\ncutoff 2\nbs a e", 3, 6},
      {"modes 4\ncutoff 2\nadjoint {\n damp b 0.1\n}", 4, 2},
      {"modes 2\ncutoff 2\nbs a b pi/", 3, 11},
      {"modes 2\ncutoff 2\nphase a", 3, 1},
      {"modes 2\ncutoff 2\nstate fock 0 1 1", 3, 1},
      {"modes 2\ncutoff 2\nstate fock 0 2", 3, 14},
      {"modes 2\ncutoff 2\nstate fock 0 1\nstate fock 1 0", 4, 1},
      {"modes 2\nmodes 3", 2, 1},
      {"cutoff 2\nbs a b", 2, 1},
      {"modes 2\ncutoff 2\nadjoint {\nbs a b", 4, 7},
      {"modes 2\ncutoff 2\n}", 3, 1},
      {"modes 2\ncutoff 2\nbs a b @", 3, 8},
      {"modes 27", 1, 7},
      {"modes 2\ncutoff 1", 2, 8},
      {"modes 2\ncutoff 2\nbs a a", 3, 1},
      {"modes 2\ncutoff 2\ndamp a -1", 3, 1},
      {"modes 2\ncutoff 2\nbs a b 1/0", 3, 10},
      {"modes 2\ncutoff 2\nmeasure\nbs a b", 4, 1},
      {"modes 2\ncutoff 2\nadjoint bs a b", 3, 9},
      {"modes 2\ncutoff 2\nstate coherent a 1\nstate coherent a 2", 4, 16},
      {"modes 2\ncutoff 2\nstate fock 0 1\nstate coherent a 1", 4, 1},
      {"modes 2.5", 1, 7},
      {"", 1, 1},
      {"modes 2\ncutoff 2\nbs a b 1e999", 3, 8},
      {"modes 2\ncutoff 2\nstate squeezed", 3, 7},
      {"modes 2\ncutoff 2\nadjoint { modes 3 }", 3, 11},
      {"modes 26\ncutoff 4", 2, 8},
      {"modes 2\ncutoff 2\nbs a b 1 2", 3, 1},
      {"modes 2\ncutoff 2\nbs a b\xff", 3, 7},
      {"modes 2\ncutoff 2\nbs a b 1.2.3", 3, 8},
      {"modes 2\ncutoff 2\nphase a --1", 3, 10},
      {"modes 2\ncutoff 2\nbs a b c", 3, 1},
      {"modes 2\ncutoff 2\nstate fock 0 x", 3, 14},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    try {
      parse_netlist(c.text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == c.line);
      CHECK(e.column() == c.col);
      CHECK(!e.message().empty());
      const std::string prefix = "line " + std::to_string(c.line) + ", column " + std::to_string(c.col) + ": ";
      CHECK(std::string(e.what()).rfind(prefix, 0) == 0);
    }
  }
}

TEST_CASE("specific diagnostics") {
  CHECK_THROWS_WITH(parse_netlist("bs a"), doctest::Contains("expects 2 modes, got 1"));
  CHECK_THROWS_WITH(parse_netlist("modes 4\ncutoff 2\nadjoint {\ndamp b 0.1\n}"),
                    doctest::Contains("channels have no adjoint"));
  CHECK_THROWS_WITH(parse_netlist("modes 4\ncutoff 2\nbs a e"), doctest::Contains("out of range"));
  CHECK_THROWS_WITH(parse_netlist("modes 4\ncutoff 2\nwarp a"), doctest::Contains("unknown keyword 'warp'"));
}

TEST_CASE("parser is total on garbage and mutated corpus text") {
  std::mt19937_64 rng(2024);
  const std::string alphabet = "abcdz019.-*/{}# \n\tpimodesbsfredkinkerrphasedampstatefockcoherentadjointmeasure\xe2\x9f\xa9";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  int parsed = 0, rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 60);
    for (int i = 0; i < len; ++i) text += alphabet[pick(rng)];
    try {
      parse_netlist(text);
      ++parsed;
    } catch (const ParseError& e) {
      CHECK(e.line() >= 1);
      CHECK(e.column() >= 1);
      ++rejected;
    }
  }
  for (const char* name : kCorpus) {
    const std::string base = slurp(name);
    for (int trial = 0; trial < 200; ++trial) {
      std::string text = base;
      const int edits = 1 + static_cast<int>(rng() % 3);
      for (int e = 0; e < edits; ++e) {
        const std::size_t at = rng() % text.size();
        switch (rng() % 3) {
          case 0:
            text.erase(at, 1 + rng() % 4);
            break;
          case 1:
            text.insert(at, 1, alphabet[pick(rng)]);
            break;
          default:
            text[at] = alphabet[pick(rng)];
        }
      }
      try {
        parse_netlist(text);
        ++parsed;
      } catch (const ParseError& e) {
        CHECK(e.line() >= 1);
        ++rejected;
      }
    }
  }
  CHECK(parsed + rejected == 2000 + 200 * static_cast<int>(std::size(kCorpus)));
}
