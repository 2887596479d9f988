#include <doctest.h>

#include <cmath>

#include "qoptics/optics.hpp"
#include "support.hpp"

using namespace qoptics;
using namespace testsupport;

namespace {

CMatrix bs_generator(int d) {
  const CMatrix a = kron(lowering(d), eye(d));
  const CMatrix b = kron(eye(d), lowering(d));
  return a.adjoint() * b - a * b.adjoint();
}

CMatrix fredkin_generator(double chi, int d) {
  const CMatrix a = kron(kron(lowering(d), eye(d)), eye(d));
  const CMatrix b = kron(kron(eye(d), lowering(d)), eye(d));
  const CMatrix c = kron(kron(eye(d), eye(d)), lowering(d));
  return (chi / 2) * (c.adjoint() * c) * (a.adjoint() * b - a * b.adjoint());
}

Index idx(std::initializer_list<int> occ, int d) {
  Index i = 0;
  for (int n : occ) i = i * d + n;
  return i;
}

}  // namespace

TEST_CASE("beamsplitter equals the Taylor-series exponential") {
  for (int d : {2, 3, 4}) {
    for (double theta : {kPi / 4, 0.3, -1.1}) {
      const CMatrix expected = expm_taylor(theta * bs_generator(d));
      CHECK(max_abs(beamsplitter(theta, d) - expected) < 1e-12);
    }
  }
}

TEST_CASE("50/50 beamsplitter on a single photon") {
  const CMatrix b = beamsplitter(kPi / 4, 2);
  const double r = 1 / std::sqrt(2.0);
  // B|01⟩ = (|01⟩ + |10⟩)/√2
  CHECK(std::abs(b(1, 1) - r) < 1e-15);
  CHECK(std::abs(b(2, 1) - r) < 1e-15);
  // B|10⟩ = (−|01⟩ + |10⟩)/√2
  CHECK(std::abs(b(1, 2) + r) < 1e-15);
  CHECK(std::abs(b(2, 2) - r) < 1e-15);
  CHECK(std::abs(b(0, 0) - 1.0) < 1e-15);
}

TEST_CASE("phase shift, Kerr and crossover") {
  const CMatrix p = phase_shift(kPi, 3);
  CHECK(std::abs(p(1, 1) + 1.0) < 1e-15);
  CHECK(std::abs(p(2, 2) - 1.0) < 1e-15);
  const CMatrix k = kerr(kPi / 3, 3);
  CHECK(std::abs(k(idx({2, 2}, 3), idx({2, 2}, 3)) - std::polar(1.0, 4 * kPi / 3)) < 1e-14);
  CHECK(std::abs(k(idx({0, 2}, 3), idx({0, 2}, 3)) - 1.0) < 1e-15);
  const CMatrix x = crossover(3);
  CHECK(std::abs(x(idx({1, 2}, 3), idx({2, 1}, 3)) - 1.0) < 1e-15);
  CHECK(max_abs(x * x - eye(9)) < 1e-15);
}

TEST_CASE("constructed unitaries are unitary and conserve photon number") {
  for (int d : {2, 3, 4}) {
    const std::vector<std::pair<CMatrix, int>> ops = {
        {beamsplitter(kPi / 4, d), 2}, {beamsplitter(0.7, d), 2}, {phase_shift(kPi, d), 1},
        {kerr(kPi, d), 2},             {crossover(d), 2},         {fredkin(kPi, d), 3},
        {fredkin(1.3, d), 3}};
    for (const auto& [u, modes] : ops) {
      CHECK(unitarity_defect(u) < 1e-12);
      CHECK(number_commutator_defect(u, FockBasis(modes, d)) < 1e-12);
    }
  }
}

TEST_CASE("Fredkin gate identities") {
  const CMatrix f = fredkin(kPi, 2);
  // F|101⟩ = −|011⟩
  CHECK(std::abs(f(idx({0, 1, 1}, 2), idx({1, 0, 1}, 2)) + 1.0) < 1e-12);
  // F|011⟩ = |101⟩
  CHECK(std::abs(f(idx({1, 0, 1}, 2), idx({0, 1, 1}, 2)) - 1.0) < 1e-12);
  // F|ab0⟩ = |ab0⟩
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Index i = idx({a, b, 0}, 2);
      CHECK(std::abs(f(i, i) - 1.0) < 1e-12);
      CHECK(std::abs(f.col(i).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("Fredkin matches its generator for any chi") {
  for (int d : {2, 3}) {
    for (double chi : {kPi, kPi / 2, 0.4, -2.0}) {
      // the truncated generator is exact only where n_a + n_b < d
      const CMatrix f = fredkin(chi, d), g = expm_taylor(fredkin_generator(chi, d));
      double worst = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; a + b < d; ++b)
          for (int c = 0; c < d; ++c) worst = std::max(worst, max_abs(f.col(idx({a, b, c}, d)) - g.col(idx({a, b, c}, d))));
      CHECK(worst < 1e-11);
    }
  }
}

TEST_CASE("Fredkin decomposition") {
  const auto seq = fredkin_primitives(kPi);
  REQUIRE(seq.size() == 7);
  CHECK(seq[kFredkinKerrPosition].kind == Primitive::Kind::Kerr);
  const auto inv = adjoint_sequence(seq);
  REQUIRE(inv.size() == seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& p = seq[seq.size() - 1 - i];
    CHECK(inv[i].kind == p.kind);
    CHECK(inv[i].modes == p.modes);
    if (p.kind == Primitive::Kind::Beamsplitter) {
      CHECK(inv[i].adjoint != p.adjoint);
    } else {
      CHECK(inv[i].parameter == -p.parameter);
    }
  }
}

TEST_CASE("damping channel entries") {
  for (double g : {0.0, std::log(2.0), std::log(4.0)}) {
    const auto k = damping_kraus(g, 2);
    CHECK(kraus_completeness_defect(k) < 1e-15);
    CHECK(std::abs(k[0](0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(k[0](1, 1) - std::exp(-g / 2)) < 1e-15);
    CHECK(std::abs(k[0](0, 1)) == 0.0);
    if (g == 0.0) {
      CHECK(k.size() == 1);
    } else {
      REQUIRE(k.size() == 2);
      CHECK(std::abs(k[1](0, 1) - std::sqrt(1 - std::exp(-g))) < 1e-15);
      CHECK(std::abs(k[1](1, 1)) == 0.0);
    }
  }
  // ln 2: off-diagonal 1/√2, decay amplitude 1/√2; ln 4: 1/2 and √3/2
  CHECK(std::abs(damping_kraus(std::log(2.0), 2)[0](1, 1) - std::sqrt(0.5)) < 1e-15);
  CHECK(std::abs(damping_kraus(std::log(4.0), 2)[1](0, 1) - std::sqrt(0.75)) < 1e-15);
}

TEST_CASE("damping on higher cutoffs is binomial loss") {
  const double g = 0.9, eta = std::exp(-g);
  const auto k = damping_kraus(g, 5);
  CHECK(kraus_completeness_defect(k) < 1e-14);
  // |3⟩⟨3| → Σ_j C(3,j) η^j (1−η)^(3−j) |j⟩⟨j|
  CMatrix rho = CMatrix::Zero(5, 5);
  rho(3, 3) = 1.0;
  CMatrix out = CMatrix::Zero(5, 5);
  for (const auto& a : k) out += a * rho * a.adjoint();
  const double c[] = {1, 3, 3, 1};
  for (int j = 0; j <= 3; ++j)
    CHECK(out(j, j).real() == doctest::Approx(c[j] * std::pow(eta, j) * std::pow(1 - eta, 3 - j)).epsilon(1e-12));
  // coherence |0⟩⟨1| decays as e^{−γ/2}
  CMatrix coh = CMatrix::Zero(5, 5);
  coh(0, 1) = 1.0;
  CMatrix out2 = CMatrix::Zero(5, 5);
  for (const auto& a : k) out2 += a * coh * a.adjoint();
  CHECK(std::abs(out2(0, 1) - std::exp(-g / 2)) < 1e-14);
}

TEST_CASE("damping rejects negative coupling") {
  try {
    damping_kraus(-1.0, 2);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("gamma must be nonnegative") != std::string::npos);
  }
}

TEST_CASE("function tables") {
  const std::vector<std::vector<std::uint8_t>> two_bit = {{0, 0, 0, 0}, {1, 1, 1, 1}, {0, 1, 0, 1}, {1, 0, 1, 0},
                                                          {0, 0, 1, 1}, {1, 1, 0, 0}, {0, 1, 1, 0}, {1, 0, 0, 1}};
  for (unsigned k = 0; k < 8; ++k) {
    const TruthTable t = TruthTable::deutsch(2, k);
    CHECK(t.values() == two_bit[k]);
    CHECK(t.classify() == (k < 2 ? FunctionClass::Type1 : FunctionClass::Type2));
  }
  const std::vector<std::vector<std::uint8_t>> one_bit = {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
  for (unsigned k = 0; k < 4; ++k) {
    CHECK(TruthTable::deutsch(1, k).values() == one_bit[k]);
    CHECK(TruthTable::deutsch(1, k).classify() == (k < 2 ? FunctionClass::Type1 : FunctionClass::Type2));
  }
  CHECK(TruthTable(2, {0, 0, 0, 1}).classify() == FunctionClass::Neither);
  CHECK_THROWS_AS(TruthTable(2, {0, 1}), DomainError);
  CHECK_THROWS_AS(TruthTable::deutsch(1, 4), DomainError);
}

TEST_CASE("compiled oracle maps |x, y⟩ to |x, y ⊕ f(x)⟩") {
  for (int n : {1, 2}) {
    const int m = dual_rail_modes(n);
    const FockBasis basis(m, 2);
    for (unsigned k = 0; k < (1U << (n + 1)); ++k) {
      const TruthTable t = TruthTable::deutsch(n, k);
      const CMatrix u = compile_oracle(t, 2);
      CHECK(unitarity_defect(u) < 1e-14);
      for (unsigned x = 0; x < (1U << n); ++x)
        for (int y = 0; y < 2; ++y) {
          auto legal = [&](int yy) {
            Occupation occ(static_cast<std::size_t>(m), 0);
            occ[yy ? 0 : 1] = 1;
            for (int bit = 0; bit < n; ++bit) {
              const int p = 2 + 2 * (n - 1 - bit);
              occ[static_cast<std::size_t>(((x >> bit) & 1U) ? p : p + 1)] = 1;
            }
            return occ;
          };
          const Index in = basis.index(legal(y));
          const Index out = basis.index(legal(y ^ t(x)));
          CHECK(std::abs(u(out, in) - 1.0) < 1e-15);
        }
      // illegal states are left alone
      const Index vac = 0;
      CHECK(std::abs(u(vac, vac) - 1.0) < 1e-15);
    }
  }
  CHECK(unitarity_defect(compile_oracle(TruthTable(3, {0, 1, 1, 0, 1, 0, 0, 1}), 2)) < 1e-14);
  CHECK_THROWS_AS(compile_oracle(TruthTable(3, {0, 1, 1, 0, 1, 0, 0, 1}), 3), DomainError);
}

TEST_CASE("gate validation") {
  CHECK_NOTHROW(validate(GateSpec{Beamsplitter{}, {0, 1}}, 2));
  CHECK_THROWS_AS(validate(GateSpec{Beamsplitter{}, {0}}, 2), DomainError);
  CHECK_THROWS_AS(validate(GateSpec{Beamsplitter{}, {0, 0}}, 2), DomainError);
  CHECK_THROWS_AS(validate(GateSpec{Phase{}, {2}}, 2), DomainError);
  CHECK_THROWS_AS(validate(GateSpec{Fredkin{}, {0, 1}}, 3), DomainError);
  CHECK_THROWS_AS(validate(GateSpec{Damp{-0.5}, {0}}, 1), DomainError);
  CHECK(arity_ok(Damp{}, 1));
  CHECK(arity_ok(Damp{}, 2));
  CHECK(gate_name(Kerr{}) == "kerr");
}
