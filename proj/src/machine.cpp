#include "qoptics/machine.hpp"

#include <cmath>
#include <future>
#include <limits>

#include "qoptics/postselect.hpp"

namespace qoptics {

namespace {

bool k1_of(unsigned k) { return (k >> 1) & 1U; }
bool k0_of(unsigned k) { return k & 1U; }

std::vector<Element> bob_forward(unsigned k, double chi, int cutoff) {
  std::vector<Element> out;
  if (k1_of(k)) {
    const int abc[3] = {mode::a, mode::b, mode::c};
    append(out, lower(fredkin_primitives(chi), abc, cutoff));
  }
  if (k0_of(k)) out.emplace_back(UnitaryElement{{mode::a, mode::b}, crossover(cutoff), "crossover"});
  return out;
}

std::vector<Element> loss(double gamma, int cutoff) {
  const auto kraus = damping_kraus(gamma, cutoff);
  return {ChannelElement{{mode::b}, kraus, "damp"}, ChannelElement{{mode::c}, kraus, "damp"}};
}

std::vector<Element> bob_inverse(unsigned k, double chi, double gamma, int cutoff) {
  std::vector<Element> out;
  const bool lossy = gamma > 0.0;
  if (k0_of(k)) out.emplace_back(UnitaryElement{{mode::a, mode::b}, crossover(cutoff).adjoint(), "crossover†"});
  if (k1_of(k)) {
    const auto inv = adjoint_sequence(fredkin_primitives(chi));
    const std::size_t kerr_at = inv.size() - 1 - kFredkinKerrPosition;
    const std::vector<Primitive> before(inv.begin(), inv.begin() + static_cast<std::ptrdiff_t>(kerr_at));
    const std::vector<Primitive> after(inv.begin() + static_cast<std::ptrdiff_t>(kerr_at), inv.end());
    const int abc[3] = {mode::a, mode::b, mode::c};
    append(out, lower(before, abc, cutoff));
    if (lossy) append(out, loss(gamma, cutoff));
    append(out, lower(after, abc, cutoff));
  } else if (lossy) {
    auto l = loss(gamma, cutoff);
    out.insert(out.begin(), l.begin(), l.end());
  }
  return out;
}

Circuit one_bit_switch_machine(const MachineConfig& cfg) {
  const int d = machine_cutoff(cfg);
  Circuit c{FockBasis(4, d), {}, {}};
  if (const auto* coh = std::get_if<CoherentInput>(&cfg.input))
    c.inputs = {0, coh->alpha, 0, coh->alpha};
  else
    c.inputs = {0, 1, 0, 1};

  const CMatrix bs = beamsplitter(kPi / 4, d);
  auto& e = c.elements;
  e.emplace_back(Checkpoint{"ψ0"});
  e.emplace_back(UnitaryElement{{mode::c, mode::d}, bs, "bs"});
  e.emplace_back(Checkpoint{"ψ1"});
  append(e, bob_forward(cfg.k, cfg.chi, d));
  e.emplace_back(Checkpoint{"ψ2"});
  if (cfg.with_s) e.emplace_back(DiagonalElement{{mode::a}, phase_shift(kPi, d).diagonal(), "S"});
  e.emplace_back(Checkpoint{"ψ3"});
  append(e, bob_inverse(cfg.k, cfg.chi, cfg.gamma, d));
  e.emplace_back(Checkpoint{"ψ4"});
  e.emplace_back(UnitaryElement{{mode::c, mode::d}, bs.adjoint(), "bs†"});
  e.emplace_back(Checkpoint{"ψ5"});
  return c;
}

Circuit compiled_machine(const MachineConfig& cfg) {
  const int n = cfg.n_bits;
  const int m = dual_rail_modes(n);
  const int d = cfg.cutoff;
  Circuit c{FockBasis(m, d), std::vector<ModeInput>(static_cast<std::size_t>(m), 0), {}};
  for (int mm = 1; mm < m; mm += 2) c.inputs[static_cast<std::size_t>(mm)] = 1;

  const CMatrix bs = beamsplitter(kPi / 4, d);
  const CMatrix oracle = compile_oracle(TruthTable::deutsch(n, cfg.k), d);
  std::vector<int> all(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) all[static_cast<std::size_t>(i)] = i;

  auto& e = c.elements;
  e.emplace_back(Checkpoint{"ψ0"});
  for (int p = 2; p < m; p += 2) e.emplace_back(UnitaryElement{{p, p + 1}, bs, "bs"});
  e.emplace_back(Checkpoint{"ψ1"});
  e.emplace_back(UnitaryElement{all, oracle, "oracle"});
  e.emplace_back(Checkpoint{"ψ2"});
  if (cfg.with_s) e.emplace_back(DiagonalElement{{0}, phase_shift(kPi, d).diagonal(), "S"});
  e.emplace_back(Checkpoint{"ψ3"});
  e.emplace_back(UnitaryElement{all, oracle.adjoint(), "oracle†"});
  e.emplace_back(Checkpoint{"ψ4"});
  for (int p = 2; p < m; p += 2) e.emplace_back(UnitaryElement{{p, p + 1}, bs.adjoint(), "bs†"});
  e.emplace_back(Checkpoint{"ψ5"});
  return c;
}

}  // namespace

std::pair<unsigned, int> parse_k_bits(std::string_view bits) {
  if (bits.size() != 2 && bits.size() != 3)
    throw DomainError("function selector must have 2 bits (N=1) or 3 bits (N=2), got \"" +
                      std::string(bits) + "\"");
  unsigned k = 0;
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw DomainError("function selector must be binary, got \"" + std::string(bits) + "\"");
    k = (k << 1) | static_cast<unsigned>(ch - '0');
  }
  return {k, static_cast<int>(bits.size()) - 1};
}

std::string k_bits_string(unsigned k, int n_bits) {
  std::string s;
  for (int i = n_bits; i >= 0; --i) s.push_back(((k >> i) & 1U) ? '1' : '0');
  return s;
}

void validate(const MachineConfig& cfg) {
  if (cfg.n_bits != 1 && cfg.n_bits != 2) throw DomainError("n_bits must be 1 or 2");
  if (cfg.k >= (1U << (cfg.n_bits + 1)))
    throw DomainError("function selector k=" + std::to_string(cfg.k) + " out of range for N=" +
                      std::to_string(cfg.n_bits));
  if (!std::isfinite(cfg.gamma)) throw DomainError("gamma must be finite");
  if (cfg.gamma < 0.0) throw DomainError("gamma must be nonnegative");
  if (!std::isfinite(cfg.chi)) throw DomainError("chi must be finite");
  if (cfg.cutoff < 2) throw DomainError("cutoff must be at least 2");
  const bool coherent = std::holds_alternative<CoherentInput>(cfg.input);
  if (coherent && std::get<CoherentInput>(cfg.input).cutoff < 2)
    throw DomainError("cutoff must be at least 2");
  if (cfg.n_bits == 2 && cfg.oracle == OracleRealization::SwitchNetwork)
    throw DomainError("the switch network realizes N=1 only; use the compiled oracle for N=2");
  if (cfg.oracle == OracleRealization::Compiled) {
    if (cfg.gamma > 0.0) throw DomainError("loss is modeled on the switch network only");
    if (coherent) throw DomainError("coherent input is modeled on the switch network only");
  }
  if (coherent && cfg.gamma > 0.0) throw DomainError("lossy runs need single-photon input");
}

int machine_cutoff(const MachineConfig& cfg) {
  if (const auto* coh = std::get_if<CoherentInput>(&cfg.input)) return coh->cutoff;
  return cfg.cutoff;
}

FunctionType true_type(const MachineConfig& cfg) {
  switch (TruthTable::deutsch(cfg.n_bits, cfg.k).classify()) {
    case FunctionClass::Type1:
      return FunctionType::Type1;
    case FunctionClass::Type2:
      return FunctionType::Type2;
    case FunctionClass::Neither:
      break;
  }
  throw ContractError("function table is neither type1 nor type2");
}

CMatrix switch_network(unsigned k, double chi, int cutoff) {
  if (k > 3) throw DomainError("function selector out of range for N=1");
  Circuit c{FockBasis(4, cutoff), {0, 0, 0, 0}, bob_forward(k, chi, cutoff)};
  return circuit_unitary(c);
}

Circuit build_machine(const MachineConfig& cfg) {
  validate(cfg);
  return cfg.oracle == OracleRealization::SwitchNetwork ? one_bit_switch_machine(cfg)
                                                        : compiled_machine(cfg);
}

Trajectory run_trajectory(const MachineConfig& cfg) {
  auto r = evaluate(build_machine(cfg));
  return Trajectory{std::move(r.checkpoints)};
}

OutcomeDist run_machine(const MachineConfig& cfg, KerrModel kerr) {
  EvalOptions opts;
  opts.kerr_model = kerr;
  return measure_counts(evaluate(build_machine(cfg), opts).final_state);
}

FunctionType read_answer(std::span<const int> outcome) {
  const Verdict v = classify(outcome);
  if (const auto* acc = std::get_if<Accept>(&v)) return acc->answer;
  throw ContractError("cannot read an answer from rejected outcome " + ket_label(outcome) + " (" +
                      to_string(v) + ")");
}

FunctionType read_answer(const OutcomeDist& dist) {
  const double p1 = dist.probability({0, 1, 0, 1});
  const double p2 = dist.probability({0, 1, 1, 0});
  if (p1 + p2 <= 0.0) throw ContractError("no accepted outcome has probability mass");
  return p1 >= p2 ? FunctionType::Type1 : FunctionType::Type2;
}

FunctionType read_answer_n(std::span<const int> outcome, int n_bits) {
  const int m = dual_rail_modes(n_bits);
  if (static_cast<int>(outcome.size()) != m)
    throw DomainError("outcome has " + std::to_string(outcome.size()) + " modes, expected " +
                      std::to_string(m));
  if (outcome[0] != 0 || outcome[1] != 1)
    throw ContractError("outcome " + ket_label(outcome) + " corrupts the scratch pair");
  bool all_zero = true;
  for (int p = 2; p < m; p += 2) {
    const int one = outcome[static_cast<std::size_t>(p)];
    const int zero = outcome[static_cast<std::size_t>(p + 1)];
    if (one + zero != 1) throw ContractError("outcome " + ket_label(outcome) + " is not dual-rail");
    all_zero = all_zero && zero == 1;
  }
  return all_zero ? FunctionType::Type1 : FunctionType::Type2;
}

ClassicalResult run_classical(const MachineConfig& cfg, KerrModel kerr) {
  if (!std::holds_alternative<CoherentInput>(cfg.input))
    throw DomainError("classical mode needs coherent input");
  MachineConfig with = cfg, without = cfg;
  with.with_s = true;
  without.with_s = false;
  auto f_with = std::async(std::launch::async, [&] { return run_machine(with, kerr); });
  OutcomeDist d_without = run_machine(without, kerr);
  OutcomeDist d_with = f_with.get();
  auto m_with = d_with.marginal(mode::d);
  auto m_without = d_without.marginal(mode::d);
  const double tv = total_variation(m_with, m_without);
  return {std::move(d_with), std::move(d_without), std::move(m_with), std::move(m_without), tv};
}

std::vector<ChiPoint> chi_sweep(unsigned k, std::span<const double> chis, bool with_s) {
  std::vector<std::future<ChiPoint>> jobs;
  jobs.reserve(chis.size());
  for (double chi : chis) {
    jobs.push_back(std::async(std::launch::async, [k, chi, with_s] {
      MachineConfig cfg;
      cfg.k = k;
      cfg.chi = chi;
      cfg.with_s = with_s;
      const FunctionType truth = true_type(cfg);
      const OutcomeDist dist = run_machine(cfg);
      const double raw = 1.0 - conditional_error(dist, truth, ErrorMode::Raw);
      double post = std::numeric_limits<double>::quiet_NaN();
      if (accepted_probability(dist) > 0.0)
        post = 1.0 - conditional_error(dist, truth, ErrorMode::Postselected);
      return ChiPoint{chi, raw, post};
    }));
  }
  std::vector<ChiPoint> out;
  out.reserve(jobs.size());
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

DeutschJozsaResult run_deutsch_jozsa(const MachineConfig& config) {
  MachineConfig cfg = config;
  cfg.oracle = OracleRealization::Compiled;
  DeutschJozsaResult r{run_machine(cfg), 0.0, 0.0, 0.0};
  for (const auto& [occ, p] : r.dist.entries()) {
    try {
      (read_answer_n(occ, cfg.n_bits) == FunctionType::Type1 ? r.p_type1 : r.p_type2) += p;
    } catch (const ContractError&) {
      r.p_rejected += p;
    }
  }
  return r;
}

}  // namespace qoptics
