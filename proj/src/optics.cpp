#include "qoptics/optics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

namespace qoptics {

namespace {

void require_cutoff(int cutoff) {
  if (cutoff < 1) throw DomainError("cutoff must be positive");
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + " must be finite");
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

CMatrix annihilation(int cutoff) {
  require_cutoff(cutoff);
  CMatrix a = CMatrix::Zero(cutoff, cutoff);
  for (int n = 1; n < cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

CMatrix beamsplitter(double theta, int cutoff) {
  require_finite(theta, "beamsplitter angle");
  const CMatrix a = annihilation(cutoff);
  const CMatrix id = CMatrix::Identity(cutoff, cutoff);
  const CMatrix a1 = Eigen::kroneckerProduct(a, id);
  const CMatrix a2 = Eigen::kroneckerProduct(id, a);
  const CMatrix g = a1.adjoint() * a2 - a1 * a2.adjoint();
  return exp_anti_hermitian(g, theta);
}

CMatrix phase_shift(double phi, int cutoff) {
  require_cutoff(cutoff);
  require_finite(phi, "phase");
  CVector d(cutoff);
  for (int n = 0; n < cutoff; ++n) d(n) = std::polar(1.0, phi * n);
  return d.asDiagonal();
}

CMatrix kerr(double chi, int cutoff) {
  require_cutoff(cutoff);
  require_finite(chi, "Kerr strength");
  CVector d(cutoff * cutoff);
  for (int n1 = 0; n1 < cutoff; ++n1)
    for (int n2 = 0; n2 < cutoff; ++n2) d(n1 * cutoff + n2) = std::polar(1.0, chi * n1 * n2);
  return d.asDiagonal();
}

CMatrix crossover(int cutoff) {
  require_cutoff(cutoff);
  CMatrix p = CMatrix::Zero(cutoff * cutoff, cutoff * cutoff);
  for (int n1 = 0; n1 < cutoff; ++n1)
    for (int n2 = 0; n2 < cutoff; ++n2) p(n2 * cutoff + n1, n1 * cutoff + n2) = 1.0;
  return p;
}

std::vector<Primitive> fredkin_primitives(double chi) {
  using K = Primitive::Kind;
  return {
      {K::Phase, {1}, kPi / 2, false},
      {K::Beamsplitter, {0, 1}, kPi / 4, false},
      {K::Kerr, {1, 2}, chi, false},
      {K::Beamsplitter, {0, 1}, kPi / 4, true},
      {K::Phase, {1}, -kPi / 2, false},
      {K::Kerr, {0, 2}, -chi / 2, false},
      {K::Kerr, {1, 2}, -chi / 2, false},
  };
}

std::vector<Primitive> adjoint_sequence(const std::vector<Primitive>& seq) {
  std::vector<Primitive> out(seq.rbegin(), seq.rend());
  for (auto& p : out) {
    // Phase and Kerr cells are inverted by negating their angle; the
    // beamsplitter keeps its angle and flips the adjoint flag.
    if (p.kind == Primitive::Kind::Beamsplitter)
      p.adjoint = !p.adjoint;
    else
      p.parameter = -p.parameter;
  }
  return out;
}

CMatrix primitive_matrix(const Primitive& p, int cutoff) {
  CMatrix m;
  switch (p.kind) {
    case Primitive::Kind::Beamsplitter: m = beamsplitter(p.parameter, cutoff); break;
    case Primitive::Kind::Phase: m = phase_shift(p.parameter, cutoff); break;
    case Primitive::Kind::Kerr: m = kerr(p.parameter, cutoff); break;
  }
  if (p.adjoint) m = m.adjoint().eval();
  return m;
}

CMatrix fredkin(double chi, int cutoff) {
  require_finite(chi, "Fredkin Kerr strength");
  const FockBasis basis(3, cutoff);
  CMatrix f = CMatrix::Identity(basis.dim(), basis.dim());
  for (const auto& p : fredkin_primitives(chi))
    apply_local_columns(f, primitive_matrix(p, cutoff), LocalIndexer(basis, p.modes));

  // Self-test: identity whenever c is empty, rotation by χ/2 on the
  // single-photon a,b block when c holds one photon.
  constexpr double tol = 1e-12;
  for (Index i = 0; i < basis.dim(); ++i) {
    if (basis.occupation(i, 2) != 0) continue;
    CVector e = CVector::Zero(basis.dim());
    e(i) = 1.0;
    if (max_abs_diff(f * e, e) > tol)
      throw ContractError("fredkin: not the identity on " + ket_label(basis.state(i)));
  }
  if (cutoff >= 2) {
    const std::array<int, 3> s011{0, 1, 1}, s101{1, 0, 1};
    const Index i011 = basis.index(s011), i101 = basis.index(s101);
    const double c = std::cos(chi / 2), s = std::sin(chi / 2);
    CVector want011 = CVector::Zero(basis.dim()), want101 = CVector::Zero(basis.dim());
    want011(i011) = c;
    want011(i101) = s;
    want101(i011) = -s;
    want101(i101) = c;
    if (max_abs_diff(f.col(i011), want011) > tol || max_abs_diff(f.col(i101), want101) > tol)
      throw ContractError("fredkin: controlled-rotation identities violated (orientation)");
  }
  return f;
}

std::vector<CMatrix> damping_kraus(double gamma, int cutoff) {
  require_cutoff(cutoff);
  if (std::isnan(gamma) || gamma < 0.0) throw DomainError("gamma must be nonnegative");
  const double eta = std::exp(-gamma);
  std::vector<CMatrix> ops;
  for (int k = 0; k < cutoff; ++k) {
    CMatrix a = CMatrix::Zero(cutoff, cutoff);
    bool nonzero = false;
    for (int n = k; n < cutoff; ++n) {
      const double v = std::sqrt(binomial(n, k) * std::pow(1.0 - eta, k) * std::pow(eta, n - k));
      a(n - k, n) = v;
      nonzero = nonzero || v != 0.0;
    }
    if (nonzero) ops.push_back(std::move(a));
  }
  return ops;
}

std::string to_string(FunctionType t) { return t == FunctionType::Type1 ? "type1" : "type2"; }

TruthTable::TruthTable(int n_inputs, std::vector<std::uint8_t> values)
    : n_inputs_(n_inputs), values_(std::move(values)) {
  if (n_inputs < 1 || n_inputs > 16) throw DomainError("TruthTable: N must be in [1, 16]");
  if (values_.size() != (std::size_t{1} << n_inputs))
    throw DomainError("TruthTable: expected " + std::to_string(1u << n_inputs) + " values, got " +
                      std::to_string(values_.size()));
  for (auto v : values_)
    if (v > 1) throw DomainError("TruthTable: values must be 0 or 1");
}

TruthTable TruthTable::deutsch(int n_inputs, unsigned k) {
  // Columns of the published function tables, rows ordered by x.
  static const std::array<std::array<std::uint8_t, 2>, 4> one_bit{{
      {0, 0},  // f00
      {1, 1},  // f01
      {0, 1},  // f10
      {1, 0},  // f11
  }};
  static const std::array<std::array<std::uint8_t, 4>, 8> two_bit{{
      {0, 0, 0, 0},  // f000
      {1, 1, 1, 1},  // f001
      {0, 1, 0, 1},  // f010
      {1, 0, 1, 0},  // f011
      {0, 0, 1, 1},  // f100
      {1, 1, 0, 0},  // f101
      {0, 1, 1, 0},  // f110
      {1, 0, 0, 1},  // f111
  }};
  if (n_inputs == 1) {
    if (k >= one_bit.size()) throw DomainError("one-bit selector k must be in 00..11");
    return TruthTable(1, {one_bit[k].begin(), one_bit[k].end()});
  }
  if (n_inputs == 2) {
    if (k >= two_bit.size()) throw DomainError("two-bit selector k must be in 000..111");
    return TruthTable(2, {two_bit[k].begin(), two_bit[k].end()});
  }
  throw DomainError("function tables exist for N = 1 and N = 2 only");
}

FunctionClass TruthTable::classify() const {
  std::size_t ones = 0;
  for (auto v : values_) ones += v;
  if (ones == 0 || ones == values_.size()) return FunctionClass::Type1;
  if (2 * ones == values_.size()) return FunctionClass::Type2;
  return FunctionClass::Neither;
}

int dual_rail_modes(int n_inputs) { return 2 * (n_inputs + 1); }

CMatrix compile_oracle(const TruthTable& table, int cutoff) {
  const int n = table.n_inputs();
  if (n > 3) throw DomainError("compile_oracle: N <= 3 supported");
  const FockBasis basis(dual_rail_modes(n), cutoff);
  constexpr Index kBudget = 4096;
  if (basis.dim() > kBudget)
    throw DomainError("compile_oracle: dimension " + std::to_string(basis.dim()) +
                      " exceeds budget " + std::to_string(kBudget) + " (lower N or cutoff)");
  CMatrix p = CMatrix::Zero(basis.dim(), basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) {
    Occupation occ = basis.state(i);
    bool legal = true;
    for (int pair = 0; pair <= n && legal; ++pair) {
      const int one = occ[2 * pair], zero = occ[2 * pair + 1];
      legal = (one == 1 && zero == 0) || (one == 0 && zero == 1);
    }
    if (legal) {
      unsigned x = 0;
      for (int pair = 1; pair <= n; ++pair) x = (x << 1) | static_cast<unsigned>(occ[2 * pair]);
      const int y = occ[0] ^ table(x);
      occ[0] = y;
      occ[1] = 1 - y;
    }
    p(basis.index(occ), i) = 1.0;
  }
  return p;
}

bool arity_ok(const GateKind& kind, std::size_t n) {
  return std::visit(
      [n](const auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Phase>) return n == 1;
        else if constexpr (std::is_same_v<T, Fredkin>) return n == 3;
        else if constexpr (std::is_same_v<T, Damp>) return n == 1 || n == 2;
        else if constexpr (std::is_same_v<T, Oracle>)
          return n == static_cast<std::size_t>(dual_rail_modes(g.table.n_inputs()));
        else return n == 2;
      },
      kind);
}

std::string gate_name(const GateKind& kind) {
  return std::visit(
      [](const auto& g) -> std::string {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Beamsplitter>) return "bs";
        else if constexpr (std::is_same_v<T, Phase>) return "phase";
        else if constexpr (std::is_same_v<T, Kerr>) return "kerr";
        else if constexpr (std::is_same_v<T, Fredkin>) return "fredkin";
        else if constexpr (std::is_same_v<T, Damp>) return "damp";
        else if constexpr (std::is_same_v<T, Crossover>) return "crossover";
        else return "oracle";
      },
      kind);
}

void validate(const GateSpec& gate, int num_modes) {
  const std::string name = gate_name(gate.kind);
  if (!arity_ok(gate.kind, gate.modes.size()))
    throw DomainError(name + ": wrong number of modes (" + std::to_string(gate.modes.size()) + ")");
  std::vector<bool> seen(static_cast<std::size_t>(std::max(num_modes, 0)), false);
  for (int m : gate.modes) {
    if (m < 0 || m >= num_modes)
      throw DomainError(name + ": mode " + std::to_string(m) + " out of range");
    if (seen[static_cast<std::size_t>(m)]) throw DomainError(name + ": repeated mode");
    seen[static_cast<std::size_t>(m)] = true;
  }
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, Beamsplitter>) require_finite(g.theta, "angle");
        else if constexpr (std::is_same_v<T, Phase>) require_finite(g.phi, "angle");
        else if constexpr (std::is_same_v<T, Kerr> || std::is_same_v<T, Fredkin>)
          require_finite(g.chi, "angle");
        else if constexpr (std::is_same_v<T, Damp>) {
          if (!std::isfinite(g.gamma) || g.gamma < 0.0)
            throw DomainError("gamma must be nonnegative");
        }
      },
      gate.kind);
}

}  // namespace qoptics
