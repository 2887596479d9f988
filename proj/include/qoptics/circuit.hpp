#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qoptics/fock.hpp"
#include "qoptics/optics.hpp"

namespace qoptics {

// Dense unitary on a subset of modes.
struct UnitaryElement {
  std::vector<int> modes;
  CMatrix matrix;
  std::string label;
};

// Diagonal unitary (phase shifter), stored as its diagonal.
struct DiagonalElement {
  std::vector<int> modes;
  CVector diagonal;
  std::string label;
};

// Cross-Kerr cell; kept symbolic so it can be evaluated either as the
// quantum operator e^{iχ n_1 n_2} or as classical cross-phase modulation.
struct CrossKerrElement {
  int first;
  int second;
  double chi;
};

struct ChannelElement {
  std::vector<int> modes;
  std::vector<CMatrix> kraus;
  std::string label;
};

// Records the state under a name when evaluation passes it.
struct Checkpoint {
  std::string name;
};

using Element =
    std::variant<UnitaryElement, DiagonalElement, CrossKerrElement, ChannelElement, Checkpoint>;

// Per-mode input: photon number or coherent amplitude.
using ModeInput = std::variant<int, Complex>;

struct Circuit {
  FockBasis basis;
  std::vector<ModeInput> inputs;  // one per mode
  std::vector<Element> elements;
};

// Lowers a gate to primitive elements on the circuit's modes. Fredkin gates
// expand into their Mach–Zehnder primitives; oracles become one dense element.
std::vector<Element> lower(const GateSpec& gate, int num_modes, int cutoff);
std::vector<Element> lower(const std::vector<Primitive>& seq, std::span<const int> modes,
                           int cutoff);

// Adjoint of a unitary-only sequence (reversed, each element inverted).
// Throws DomainError if the sequence contains a channel.
std::vector<Element> adjoint(const std::vector<Element>& seq);

void append(std::vector<Element>& to, const std::vector<Element>& more);

FockVector initial_state(const Circuit& c, double tail_tolerance = 1e-10);

enum class KerrModel {
  Quantum,    // e^{iχ n_1 n_2}
  MeanField,  // each mode picks up χ·⟨n⟩ of its partner
};

struct EvalOptions {
  KerrModel kerr_model = KerrModel::Quantum;
  double tail_tolerance = 1e-10;
  // Largest dimension allowed once the state is promoted to a density matrix.
  Index density_budget = 4096;
};

struct EvalResult {
  State final_state;
  std::vector<std::pair<std::string, State>> checkpoints;
};

// Runs the circuit from its initial state. The state stays a vector until the
// first channel, then continues as a density matrix.
EvalResult evaluate(const Circuit& c, const EvalOptions& opts = {});

// Product of all unitary elements as a full-space matrix (quantum Kerr).
// Throws DomainError if the circuit contains a channel.
CMatrix circuit_unitary(const Circuit& c);

std::size_t count_channels(const Circuit& c);

}  // namespace qoptics
