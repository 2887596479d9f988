#include "qoptics/circuit.hpp"

#include <type_traits>

namespace qoptics {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

CVector full_diagonal(const FockBasis& basis, std::span<const int> modes, const CVector& local) {
  LocalIndexer ix(basis, modes);
  CVector d(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) d(i) = local(ix.local_index(i));
  return d;
}

CVector kerr_diagonal(const FockBasis& basis, const CrossKerrElement& k, KerrModel model,
                      const State& s) {
  const Index s1 = basis.stride(k.first), s2 = basis.stride(k.second);
  const int d = basis.cutoff();
  double m1 = 0.0, m2 = 0.0;
  if (model == KerrModel::MeanField) {
    m1 = mean_photon_number(s, k.first);
    m2 = mean_photon_number(s, k.second);
  }
  CVector diag(basis.dim());
  for (Index i = 0; i < basis.dim(); ++i) {
    const double n1 = static_cast<double>((i / s1) % d);
    const double n2 = static_cast<double>((i / s2) % d);
    const double phase = model == KerrModel::Quantum ? k.chi * n1 * n2 : k.chi * (m2 * n1 + m1 * n2);
    diag(i) = std::polar(1.0, phase);
  }
  return diag;
}

State apply_diagonal(const State& s, const CVector& diag) {
  if (const auto* v = std::get_if<FockVector>(&s))
    return FockVector(v->basis(), diag.cwiseProduct(v->amplitudes()));
  const auto& rho = std::get<DensityOp>(s);
  return DensityOp(rho.basis(), diag.asDiagonal() * rho.matrix() * diag.conjugate().asDiagonal());
}

}  // namespace

std::vector<Element> lower(const std::vector<Primitive>& seq, std::span<const int> modes,
                           int cutoff) {
  std::vector<Element> out;
  for (const auto& p : seq) {
    std::vector<int> m;
    for (int rel : p.modes) m.push_back(modes[static_cast<std::size_t>(rel)]);
    switch (p.kind) {
      case Primitive::Kind::Beamsplitter:
        out.emplace_back(UnitaryElement{m, primitive_matrix(p, cutoff), p.adjoint ? "bs†" : "bs"});
        break;
      case Primitive::Kind::Phase:
        out.emplace_back(
            DiagonalElement{m, primitive_matrix(p, cutoff).diagonal(), "phase"});
        break;
      case Primitive::Kind::Kerr:
        out.emplace_back(CrossKerrElement{m[0], m[1], p.parameter});
        break;
    }
  }
  return out;
}

std::vector<Element> lower(const GateSpec& gate, int num_modes, int cutoff) {
  validate(gate, num_modes);
  const auto& m = gate.modes;
  return std::visit(
      overloaded{
          [&](const Beamsplitter& g) -> std::vector<Element> {
            return {UnitaryElement{m, beamsplitter(g.theta, cutoff), "bs"}};
          },
          [&](const Phase& g) -> std::vector<Element> {
            return {DiagonalElement{m, phase_shift(g.phi, cutoff).diagonal(), "phase"}};
          },
          [&](const Kerr& g) -> std::vector<Element> {
            return {CrossKerrElement{m[0], m[1], g.chi}};
          },
          [&](const Fredkin& g) -> std::vector<Element> {
            return lower(fredkin_primitives(g.chi), m, cutoff);
          },
          [&](const Damp& g) -> std::vector<Element> {
            std::vector<Element> out;
            for (int mode : m) out.emplace_back(ChannelElement{{mode}, damping_kraus(g.gamma, cutoff), "damp"});
            return out;
          },
          [&](const Crossover&) -> std::vector<Element> {
            return {UnitaryElement{m, crossover(cutoff), "crossover"}};
          },
          [&](const Oracle& g) -> std::vector<Element> {
            return {UnitaryElement{m, compile_oracle(g.table, cutoff), "oracle"}};
          },
      },
      gate.kind);
}

std::vector<Element> adjoint(const std::vector<Element>& seq) {
  std::vector<Element> out;
  for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
    std::visit(overloaded{
                   [&](const UnitaryElement& e) {
                     out.emplace_back(UnitaryElement{e.modes, e.matrix.adjoint(), e.label + "†"});
                   },
                   [&](const DiagonalElement& e) {
                     out.emplace_back(DiagonalElement{e.modes, e.diagonal.conjugate(), e.label + "†"});
                   },
                   [&](const CrossKerrElement& e) {
                     out.emplace_back(CrossKerrElement{e.first, e.second, -e.chi});
                   },
                   [&](const ChannelElement&) {
                     throw DomainError("adjoint: channels have no adjoint");
                   },
                   [&](const Checkpoint&) {},
               },
               *it);
  }
  return out;
}

void append(std::vector<Element>& to, const std::vector<Element>& more) {
  to.insert(to.end(), more.begin(), more.end());
}

FockVector initial_state(const Circuit& c, double tail_tolerance) {
  const FockBasis& basis = c.basis;
  if (static_cast<int>(c.inputs.size()) != basis.num_modes())
    throw DomainError("circuit inputs do not cover every mode");
  std::vector<FockVector> factors;
  factors.reserve(c.inputs.size());
  const FockBasis single(1, basis.cutoff());
  for (std::size_t m = 0; m < c.inputs.size(); ++m) {
    const auto& in = c.inputs[m];
    if (const int* n = std::get_if<int>(&in)) {
      const int occ[1] = {*n};
      factors.push_back(FockVector::basis_vector(single, occ));
    } else {
      factors.push_back(coherent_vector(std::get<Complex>(in), basis.cutoff(), tail_tolerance));
    }
  }
  return tensor_product(factors);
}

EvalResult evaluate(const Circuit& c, const EvalOptions& opts) {
  EvalResult result{initial_state(c, opts.tail_tolerance), {}};
  State& s = result.final_state;
  const FockBasis& basis = c.basis;
  for (const auto& el : c.elements) {
    std::visit(
        overloaded{
            [&](const UnitaryElement& e) {
              if (auto* v = std::get_if<FockVector>(&s))
                s = apply_local_unitary(*v, e.matrix, e.modes, UnitaryCheck::Unchecked);
              else
                s = apply_local_unitary(std::get<DensityOp>(s), e.matrix, e.modes,
                                        UnitaryCheck::Unchecked);
            },
            [&](const DiagonalElement& e) { s = apply_diagonal(s, full_diagonal(basis, e.modes, e.diagonal)); },
            [&](const CrossKerrElement& e) { s = apply_diagonal(s, kerr_diagonal(basis, e, opts.kerr_model, s)); },
            [&](const ChannelElement& e) {
              if (const auto* v = std::get_if<FockVector>(&s)) {
                if (basis.dim() > opts.density_budget)
                  throw DomainError("state dimension " + std::to_string(basis.dim()) +
                                    " too large for density-matrix evolution (budget " +
                                    std::to_string(opts.density_budget) + ")");
                s = DensityOp::from_pure(*v);
              }
              s = apply_local_channel(std::get<DensityOp>(s), e.kraus, e.modes);
            },
            [&](const Checkpoint& e) { result.checkpoints.emplace_back(e.name, s); },
        },
        el);
  }
  return result;
}

CMatrix circuit_unitary(const Circuit& c) {
  const FockBasis& basis = c.basis;
  CMatrix u = CMatrix::Identity(basis.dim(), basis.dim());
  const State dummy = FockVector::vacuum(basis);
  for (const auto& el : c.elements) {
    std::visit(overloaded{
                   [&](const UnitaryElement& e) { apply_local_columns(u, e.matrix, LocalIndexer(basis, e.modes)); },
                   [&](const DiagonalElement& e) { u = full_diagonal(basis, e.modes, e.diagonal).asDiagonal() * u; },
                   [&](const CrossKerrElement& e) {
                     u = kerr_diagonal(basis, e, KerrModel::Quantum, dummy).asDiagonal() * u;
                   },
                   [&](const ChannelElement&) {
                     throw DomainError("circuit_unitary: circuit contains a channel");
                   },
                   [&](const Checkpoint&) {},
               },
               el);
  }
  return u;
}

std::size_t count_channels(const Circuit& c) {
  std::size_t n = 0;
  for (const auto& el : c.elements) n += std::holds_alternative<ChannelElement>(el) ? 1 : 0;
  return n;
}

}  // namespace qoptics
