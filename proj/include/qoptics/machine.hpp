#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qoptics/circuit.hpp"

namespace qoptics {

// Named modes of the one-bit machine: scratch pair {a, b}, query pair {c, d}.
namespace mode {
inline constexpr int a = 0;
inline constexpr int b = 1;
inline constexpr int c = 2;
inline constexpr int d = 3;
}  // namespace mode

struct SinglePhotonInput {};
struct CoherentInput {
  Complex alpha;
  int cutoff;
};
using InputKind = std::variant<SinglePhotonInput, CoherentInput>;

enum class OracleRealization {
  SwitchNetwork,  // Fredkin gate for k1, crossover for k0 (N = 1 only)
  Compiled,       // truth-table permutation
};

struct MachineConfig {
  unsigned k = 0;  // k1k0 for N = 1, k2k1k0 for N = 2
  int n_bits = 1;
  bool with_s = true;
  double gamma = 0.0;
  double chi = kPi;
  InputKind input = SinglePhotonInput{};
  int cutoff = 2;  // per-mode cutoff for single-photon runs
  OracleRealization oracle = OracleRealization::SwitchNetwork;
};

// "10" -> {k = 2, N = 1}; "101" -> {k = 5, N = 2}. Throws DomainError.
std::pair<unsigned, int> parse_k_bits(std::string_view bits);
std::string k_bits_string(unsigned k, int n_bits);

void validate(const MachineConfig& config);
int machine_cutoff(const MachineConfig& config);
FunctionType true_type(const MachineConfig& config);

// Bob's forward transform of the one-bit machine as a 4-mode matrix:
// Fredkin on (a, b, c) if k1, then the a/b crossover if k0.
CMatrix switch_network(unsigned k, double chi, int cutoff);

// The complete machine as an element list with checkpoints ψ0..ψ5.
// For γ > 0, Γ_b Γ_c sit inside Bob's second pass: just before the Kerr cell
// of the inverse Fredkin when k1 = 1, else at the start of that pass.
Circuit build_machine(const MachineConfig& config);

struct Trajectory {
  std::vector<std::pair<std::string, State>> states;  // ψ0..ψ5
  const State& psi(std::size_t i) const { return states.at(i).second; }
};

Trajectory run_trajectory(const MachineConfig& config);

OutcomeDist run_machine(const MachineConfig& config, KerrModel kerr = KerrModel::Quantum);

// Mode-d readout of an accepted outcome: z = 1 -> type1, z = 0 -> type2.
// Throws ContractError on a rejected outcome.
FunctionType read_answer(std::span<const int> outcome);
// Answer carrying the larger accepted probability.
FunctionType read_answer(const OutcomeDist& dist);

// N-bit dual-rail readout: type1 iff every query pair returns to its zero
// rail. Throws ContractError on illegal outcomes.
FunctionType read_answer_n(std::span<const int> outcome, int n_bits);

struct ClassicalResult {
  OutcomeDist with_s;
  OutcomeDist without_s;
  std::vector<double> mode_d_with_s;
  std::vector<double> mode_d_without_s;
  double total_variation;
};

// Coherent-state run with S in place and removed. The default Kerr model is
// classical cross-phase modulation.
ClassicalResult run_classical(const MachineConfig& config, KerrModel kerr = KerrModel::MeanField);

struct ChiPoint {
  double chi;
  double p_correct_raw;
  double p_correct_postselected;  // NaN when nothing is accepted
};

std::vector<ChiPoint> chi_sweep(unsigned k, std::span<const double> chis, bool with_s = true);

struct DeutschJozsaResult {
  OutcomeDist dist;
  double p_type1;
  double p_type2;
  double p_rejected;
};

// Runs the N-bit machine (compiled oracle) and sorts outcome mass by answer.
DeutschJozsaResult run_deutsch_jozsa(const MachineConfig& config);

}  // namespace qoptics
