#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "qoptics/fock.hpp"

namespace qoptics {

// Single-mode annihilation operator on occupations 0..cutoff-1.
CMatrix annihilation(int cutoff);

// exp[θ(a†b − ab†)] on the truncated two-mode space (mode order a, b).
// At θ = π/4: |01⟩ → (|01⟩ + |10⟩)/√2.
CMatrix beamsplitter(double theta, int cutoff);

// diag e^{iφn}. The π delay used by the machine is phase_shift(π).
CMatrix phase_shift(double phi, int cutoff);

// Cross-Kerr cell, diag e^{iχ n_1 n_2} over the two-mode space.
CMatrix kerr(double chi, int cutoff);

// Mode exchange of two modes (the k0 classical switch).
CMatrix crossover(int cutoff);

// One primitive optical element of a decomposed gate, modes given relative to
// the gate's own mode list.
struct Primitive {
  enum class Kind { Beamsplitter, Phase, Kerr };
  Kind kind;
  std::vector<int> modes;
  double parameter;  // θ, φ or χ
  bool adjoint = false;
};

// Fredkin gate on modes (a, b, c), c the control. Acts on a,b as a
// beamsplitter of angle χ/2 whenever c holds one photon:
//   F = exp[(χ/2) n_c (a†b − ab†)].
// Realized as a Kerr-loaded Mach–Zehnder (time order):
//   phase_b(π/2), B_ab, K_bc(χ), B_ab†, phase_b(−π/2), K_ac(−χ/2), K_bc(−χ/2).
// At χ = π: F|101⟩ = −|011⟩, F|011⟩ = |101⟩, F|ab0⟩ = |ab0⟩.
std::vector<Primitive> fredkin_primitives(double chi = kPi);

// Index of the Kerr cell inside fredkin_primitives(); loss in the lossy second
// pass is inserted immediately before it (on the inverse sequence).
inline constexpr std::size_t kFredkinKerrPosition = 2;

// Inverse sequence: reversed, each element adjointed.
std::vector<Primitive> adjoint_sequence(const std::vector<Primitive>& seq);

CMatrix primitive_matrix(const Primitive& p, int cutoff);

// Dense three-mode matrix; runs its construction self-test and throws
// ContractError if the identities above fail.
CMatrix fredkin(double chi, int cutoff);

// Photon-loss channel with coupling γ (η = e^{−γ}):
//   A_k = Σ_n √C(n,k) (1−η)^{k/2} η^{(n−k)/2} |n−k⟩⟨n|.
// For cutoff 2 this is {diag(1, e^{−γ/2}), √(1−e^{−γ}) |0⟩⟨1|}.
std::vector<CMatrix> damping_kraus(double gamma, int cutoff);

enum class FunctionType { Type1, Type2 };
enum class FunctionClass { Type1, Type2, Neither };

std::string to_string(FunctionType t);

// Boolean function on N input bits; values[x] = f(x).
class TruthTable {
 public:
  TruthTable(int n_inputs, std::vector<std::uint8_t> values);

  // f_k from the one-bit (N=1, k = k1k0) and two-bit (N=2, k = k2k1k0)
  // function tables.
  static TruthTable deutsch(int n_inputs, unsigned k);

  int n_inputs() const noexcept { return n_inputs_; }
  const std::vector<std::uint8_t>& values() const noexcept { return values_; }
  int operator()(unsigned x) const { return values_.at(x); }

  // Type1 iff constant, Type2 iff exactly half ones.
  FunctionClass classify() const;

  bool operator==(const TruthTable&) const = default;

 private:
  int n_inputs_;
  std::vector<std::uint8_t> values_;
};

// Dual-rail mode layout used for oracles and the N-bit machine:
//   [y_one, y_zero, x_{N-1}_one, x_{N-1}_zero, ..., x_0_one, x_0_zero].
// For N = 1 these are the modes a, b, c, d.
int dual_rail_modes(int n_inputs);

// Permutation on the full Fock basis of the 2(N+1) dual-rail modes mapping
// legal |x, y⟩ to |x, y ⊕ f(x)⟩ and fixing every other basis state.
CMatrix compile_oracle(const TruthTable& table, int cutoff);

// Component vocabulary, bound to modes of an enclosing circuit.
struct Beamsplitter {
  double theta = kPi / 4;
  bool operator==(const Beamsplitter&) const = default;
};
struct Phase {
  double phi = kPi;
  bool operator==(const Phase&) const = default;
};
struct Kerr {
  double chi = kPi;
  bool operator==(const Kerr&) const = default;
};
struct Fredkin {
  double chi = kPi;
  bool operator==(const Fredkin&) const = default;
};
struct Damp {
  double gamma = 0.0;
  bool operator==(const Damp&) const = default;
};
struct Crossover {
  bool operator==(const Crossover&) const = default;
};
struct Oracle {
  TruthTable table;
  bool operator==(const Oracle&) const = default;
};

using GateKind = std::variant<Beamsplitter, Phase, Kerr, Fredkin, Damp, Crossover, Oracle>;

struct GateSpec {
  GateKind kind;
  std::vector<int> modes;
  bool operator==(const GateSpec&) const = default;
};

// Required mode count for a gate kind (Damp accepts 1 or 2).
bool arity_ok(const GateKind& kind, std::size_t n_modes);
std::string gate_name(const GateKind& kind);
// Throws DomainError on arity, mode or parameter violations.
void validate(const GateSpec& gate, int num_modes);

}  // namespace qoptics
