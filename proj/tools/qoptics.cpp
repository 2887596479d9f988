#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qoptics/format.hpp"
#include "qoptics/machine.hpp"
#include "qoptics/netlist.hpp"
#include "qoptics/postselect.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace qoptics;

namespace {

constexpr double kShowFloor = 1e-15;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string sci(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string fixed(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string tuple(const Occupation& occ) {
  std::string s = "(";
  for (std::size_t i = 0; i < occ.size(); ++i) s += (i ? "," : "") + std::to_string(occ[i]);
  return s + ")";
}

std::string pad(std::string s, std::size_t w) {
  std::size_t len = 0;
  for (unsigned char c : s) len += (c & 0xC0) != 0x80;
  if (len < w) s.append(w - len, ' ');
  return s;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + out_path + "'");
  f << text;
  if (!f.flush()) throw std::runtime_error("cannot write '" + out_path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::pair<unsigned, int> selector(const std::string& bits) {
  try {
    return parse_k_bits(bits);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

unsigned one_bit_selector(const std::string& bits) {
  const auto [k, n] = selector(bits);
  if (n != 1) throw UsageError("this command takes a 2-bit selector (k1k0)");
  return k;
}

KerrModel kerr_model(const std::string& name) {
  return name == "quantum" ? KerrModel::Quantum : KerrModel::MeanField;
}

std::string verdict_of(const Occupation& occ, int n_bits) {
  if (n_bits == 1) return to_string(classify(occ));
  try {
    return "accept " + to_string(read_answer_n(occ, n_bits));
  } catch (const ContractError&) {
    return "reject";
  }
}

// ---- run

struct RunOpts {
  std::string k;
  bool with_s = true;
  double gamma = 0.0;
  double chi = kPi;
  int cutoff = 2;
  long sample = 0;
  std::uint64_t seed = 0;
  std::string format = "table";
};

int cmd_run(const RunOpts& o) {
  const auto [k, n] = selector(o.k);
  MachineConfig cfg;
  cfg.k = k;
  cfg.n_bits = n;
  cfg.with_s = o.with_s;
  cfg.gamma = o.gamma;
  cfg.chi = o.chi;
  cfg.cutoff = o.cutoff;
  if (n == 2) cfg.oracle = OracleRealization::Compiled;
  if (o.sample < 0) throw UsageError("--sample must be nonnegative");
  try {
    validate(cfg);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const auto t0 = std::chrono::steady_clock::now();
  const OutcomeDist dist = run_machine(cfg);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  std::vector<std::pair<Occupation, double>> rows;
  for (const auto& [occ, p] : dist.entries())
    if (p > kShowFloor) rows.emplace_back(occ, p);

  std::string answer = "none";
  if (n == 1) {
    if (accepted_probability(dist) > kShowFloor) answer = to_string(read_answer(dist));
  } else {
    const auto dj = run_deutsch_jozsa(cfg);
    if (dj.p_type1 + dj.p_type2 > kShowFloor) answer = to_string(dj.p_type1 >= dj.p_type2 ? FunctionType::Type1 : FunctionType::Type2);
  }
  const std::string truth = to_string(true_type(cfg));

  std::map<Occupation, long> counts;
  if (o.sample > 0) {
    std::vector<double> w;
    for (const auto& [occ, p] : dist.entries()) w.push_back(p);
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    std::mt19937_64 rng(o.seed);
    std::vector<Occupation> keys;
    for (const auto& [occ, p] : dist.entries()) keys.push_back(occ);
    for (long s = 0; s < o.sample; ++s) ++counts[keys[pick(rng)]];
  }

  if (o.format == "json") {
    json j;
    j["command"] = "run";
    j["config"] = {{"k", o.k}, {"n_bits", n}, {"with_s", o.with_s}, {"gamma", o.gamma}, {"chi", o.chi}, {"cutoff", o.cutoff}};
    j["outcomes"] = json::array();
    for (const auto& [occ, p] : rows)
      j["outcomes"].push_back({{"occupation", occ}, {"probability", p}, {"verdict", verdict_of(occ, n)}});
    if (o.sample > 0) {
      j["sample"] = {{"shots", o.sample}, {"seed", o.seed}, {"counts", json::array()}};
      for (const auto& [occ, c] : counts) j["sample"]["counts"].push_back({{"occupation", occ}, {"count", c}});
    }
    j["answer"] = answer;
    j["true_type"] = truth;
    emit(dump(j), "");
  } else if (o.format == "csv") {
    std::string s = o.sample > 0 ? "outcome,probability,verdict,count\n" : "outcome,probability,verdict\n";
    for (const auto& [occ, p] : rows) {
      s += occupation_digits(occ) + "," + sci(p) + "," + verdict_of(occ, n);
      if (o.sample > 0) s += "," + std::to_string(counts.count(occ) ? counts.at(occ) : 0);
      s += "\n";
    }
    emit(s, "");
  } else {
    std::ostringstream os;
    os << "config: k=" << o.k << " N=" << n << " S=" << (o.with_s ? "on" : "off") << " gamma=" << short_num(o.gamma)
       << " chi=" << short_num(o.chi) << " cutoff=" << o.cutoff << "\n";
    os << pad("outcome", 16) << pad("probability", 18) << (o.sample > 0 ? pad("verdict", 27) + "count" : "verdict") << "\n";
    for (const auto& [occ, p] : rows) {
      os << pad(tuple(occ), 16) << pad(fixed(p), 18);
      if (o.sample > 0)
        os << pad(verdict_of(occ, n), 27) << (counts.count(occ) ? counts.at(occ) : 0);
      else
        os << verdict_of(occ, n);
      os << "\n";
    }
    if (o.sample > 0) os << "sampled " << o.sample << " shots, seed " << o.seed << "\n";
    os << "answer: " << answer << "\ntrue type: " << truth << "\n";
    os << "elapsed: " << short_num(ms) << " ms\n";
    emit(os.str(), "");
  }
  return 0;
}

// ---- trajectory

struct TrajOpts {
  std::string k;
  bool with_s = true;
  double chi = kPi;
  std::string format = "table";
};

int cmd_trajectory(const TrajOpts& o) {
  const auto [k, n] = selector(o.k);
  MachineConfig cfg;
  cfg.k = k;
  cfg.n_bits = n;
  cfg.with_s = o.with_s;
  cfg.chi = o.chi;
  if (n == 2) cfg.oracle = OracleRealization::Compiled;
  try {
    validate(cfg);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const Trajectory t = run_trajectory(cfg);

  if (o.format == "json") {
    json j;
    j["command"] = "trajectory";
    j["config"] = {{"k", o.k}, {"n_bits", n}, {"with_s", o.with_s}, {"chi", o.chi}};
    j["states"] = json::array();
    for (const auto& [name, s] : t.states) {
      const auto& v = std::get<FockVector>(s);
      json amps = json::array();
      for (Index i = 0; i < v.amplitudes().size(); ++i)
        if (std::abs(v.amplitudes()(i)) > 1e-10)
          amps.push_back({{"occupation", v.basis().state(i)}, {"re", v.amplitudes()(i).real()}, {"im", v.amplitudes()(i).imag()}});
      j["states"].push_back({{"name", name}, {"text", ket_notation(v)}, {"amplitudes", amps}});
    }
    emit(dump(j), "");
  } else if (o.format == "csv") {
    std::string s = "step,outcome,re,im\n";
    for (const auto& [name, st] : t.states) {
      const auto& v = std::get<FockVector>(st);
      for (Index i = 0; i < v.amplitudes().size(); ++i)
        if (std::abs(v.amplitudes()(i)) > 1e-10)
          s += name + "," + occupation_digits(v.basis().state(i)) + "," + sci(v.amplitudes()(i).real()) + "," +
               sci(v.amplitudes()(i).imag()) + "\n";
    }
    emit(s, "");
  } else {
    std::string s;
    for (const auto& [name, st] : t.states) s += name + " = " + ket_notation(std::get<FockVector>(st)) + "\n";
    emit(s, "");
  }
  return 0;
}

// ---- sweeps

struct SweepOpts {
  std::string k;
  double gamma_min = 0.0;
  double gamma_max = 5.0;
  int steps = 101;
  bool log = false;
  std::string out;
  std::string format = "csv";
};

std::vector<double> grid(double lo, double hi, int steps, bool log) {
  if (steps < 1) throw UsageError("--steps must be at least 1");
  if (log && lo <= 0.0) throw UsageError("--log needs a positive lower bound");
  std::vector<double> g(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double t = steps == 1 ? 0.0 : static_cast<double>(i) / (steps - 1);
    g[static_cast<std::size_t>(i)] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  if (steps > 1) g.back() = hi;
  g.front() = lo;
  return g;
}

int cmd_sweep(const SweepOpts& o) {
  const unsigned k = one_bit_selector(o.k);
  if (o.gamma_min < 0.0 || o.gamma_max < 0.0) throw UsageError("gamma must be nonnegative");
  if (o.gamma_max < o.gamma_min) throw UsageError("--gamma-max must not be below --gamma-min");
  const auto g = grid(o.gamma_min, o.gamma_max, o.steps, o.log);
  const ErrorCurve curve = sweep_gamma(k, g);

  if (o.format == "json") {
    json j;
    j["command"] = "sweep";
    j["config"] = {{"k", o.k}, {"gamma_min", o.gamma_min}, {"gamma_max", o.gamma_max}, {"steps", o.steps}, {"log", o.log}};
    j["rows"] = json::array();
    for (const auto& r : curve.rows)
      j["rows"].push_back({{"gamma", r.gamma}, {"p_raw_sim", r.p_raw_sim}, {"p_raw_analytic", r.p_raw_analytic},
                           {"p_ec_sim", r.p_ec_sim}, {"p_ec_analytic", r.p_ec_analytic}, {"accept_prob", r.accept_prob}});
    emit(dump(j), o.out);
  } else if (o.format == "table") {
    std::ostringstream os;
    os << pad("gamma", 12) << pad("p_raw_sim", 14) << pad("p_raw_analytic", 16) << pad("p_ec_sim", 14)
       << pad("p_ec_analytic", 16) << "accept_prob\n";
    for (const auto& r : curve.rows)
      os << pad(short_num(r.gamma), 12) << pad(short_num(r.p_raw_sim), 14) << pad(short_num(r.p_raw_analytic), 16)
         << pad(short_num(r.p_ec_sim), 14) << pad(short_num(r.p_ec_analytic), 16) << short_num(r.accept_prob) << "\n";
    emit(os.str(), o.out);
  } else {
    std::string s = "gamma,p_raw_sim,p_raw_analytic,p_ec_sim,p_ec_analytic,accept_prob\n";
    for (const auto& r : curve.rows)
      s += sci(r.gamma) + "," + sci(r.p_raw_sim) + "," + sci(r.p_raw_analytic) + "," + sci(r.p_ec_sim) + "," +
           sci(r.p_ec_analytic) + "," + sci(r.accept_prob) + "\n";
    emit(s, o.out);
  }
  return 0;
}

struct ChiOpts {
  std::string k;
  int steps = 33;
  bool with_s = true;
  std::string out;
  std::string format = "csv";
};

int cmd_chi_sweep(const ChiOpts& o) {
  const unsigned k = one_bit_selector(o.k);
  const auto chis = grid(0.0, kPi, o.steps, false);
  const auto pts = chi_sweep(k, chis, o.with_s);

  if (o.format == "json") {
    json j;
    j["command"] = "chi-sweep";
    j["config"] = {{"k", o.k}, {"steps", o.steps}, {"with_s", o.with_s}};
    j["rows"] = json::array();
    for (const auto& p : pts)
      j["rows"].push_back({{"chi", p.chi}, {"p_correct_raw", p.p_correct_raw}, {"p_correct_postselected", p.p_correct_postselected}});
    emit(dump(j), o.out);
  } else if (o.format == "table") {
    std::ostringstream os;
    os << pad("chi", 12) << pad("p_correct_raw", 16) << "p_correct_postselected\n";
    for (const auto& p : pts)
      os << pad(short_num(p.chi), 12) << pad(short_num(p.p_correct_raw), 16) << short_num(p.p_correct_postselected) << "\n";
    emit(os.str(), o.out);
  } else {
    std::string s = "chi,p_correct_raw,p_correct_postselected\n";
    for (const auto& p : pts) s += sci(p.chi) + "," + sci(p.p_correct_raw) + "," + sci(p.p_correct_postselected) + "\n";
    emit(s, o.out);
  }
  return 0;
}

// ---- classical

struct ClassicalOpts {
  double alpha = 1.0;
  double alpha_im = 0.0;
  int cutoff = 16;
  std::string k = "10";
  std::string kerr = "mean-field";
  std::string format = "table";
};

int cmd_classical(const ClassicalOpts& o) {
  MachineConfig cfg;
  cfg.k = one_bit_selector(o.k);
  cfg.input = CoherentInput{Complex(o.alpha, o.alpha_im), o.cutoff};
  try {
    validate(cfg);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  const ClassicalResult r = run_classical(cfg, kerr_model(o.kerr));

  std::size_t last = 0;
  for (std::size_t nn = 0; nn < r.mode_d_with_s.size(); ++nn)
    if (r.mode_d_with_s[nn] > kShowFloor || r.mode_d_without_s[nn] > kShowFloor) last = nn;

  if (o.format == "json") {
    json j;
    j["command"] = "classical";
    j["config"] = {{"k", o.k}, {"alpha_re", o.alpha}, {"alpha_im", o.alpha_im}, {"cutoff", o.cutoff}, {"kerr", o.kerr}};
    j["mode_d_with_s"] = std::vector<double>(r.mode_d_with_s.begin(), r.mode_d_with_s.begin() + static_cast<long>(last) + 1);
    j["mode_d_without_s"] = std::vector<double>(r.mode_d_without_s.begin(), r.mode_d_without_s.begin() + static_cast<long>(last) + 1);
    j["total_variation"] = r.total_variation;
    emit(dump(j), "");
  } else if (o.format == "csv") {
    std::string s = "n,p_with_s,p_without_s\n";
    for (std::size_t nn = 0; nn <= last; ++nn)
      s += std::to_string(nn) + "," + sci(r.mode_d_with_s[nn]) + "," + sci(r.mode_d_without_s[nn]) + "\n";
    emit(s, "");
  } else {
    std::ostringstream os;
    os << "config: k=" << o.k << " alpha=" << short_num(o.alpha);
    if (o.alpha_im != 0.0) os << (o.alpha_im < 0 ? "" : "+") << short_num(o.alpha_im) << "i";
    os << " cutoff=" << o.cutoff << " kerr=" << o.kerr << "\n";
    os << "mode d photon counts\n" << pad("n", 6) << pad("with S", 18) << "without S\n";
    for (std::size_t nn = 0; nn <= last; ++nn)
      os << pad(std::to_string(nn), 6) << pad(fixed(r.mode_d_with_s[nn]), 18) << fixed(r.mode_d_without_s[nn]) << "\n";
    os << "total variation: " << short_num(r.total_variation) << "\n";
    emit(os.str(), "");
  }
  return 0;
}

// ---- netlist

struct NetlistOpts {
  std::string file;
  bool state = false;
  std::string kerr = "quantum";
  std::string format = "table";
};

fs::path locate(const std::string& name) {
  const fs::path p(name);
  if (p.is_relative()) {
    if (const char* env = std::getenv("QNL_PATH")) {
      std::stringstream dirs(env);
      std::string dir;
      while (std::getline(dirs, dir, ':'))
        if (!dir.empty() && fs::is_regular_file(fs::path(dir) / p)) return fs::path(dir) / p;
    }
  }
  if (fs::is_regular_file(p)) return p;
  throw std::runtime_error("netlist not found: " + name);
}

int cmd_netlist(const NetlistOpts& o) {
  const fs::path path = locate(o.file);
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << f.rdbuf();

  Program prog;
  try {
    prog = parse_netlist(buf.str());
  } catch (const ParseError& e) {
    std::cerr << path.string() << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
    return 1;
  }
  EvalOptions opts;
  opts.kerr_model = kerr_model(o.kerr);
  const ExecResult r = execute(prog, opts);

  std::vector<std::pair<Occupation, double>> rows;
  for (const auto& [occ, p] : r.dist.entries())
    if (p > kShowFloor) rows.emplace_back(occ, p);

  const auto* pure = std::get_if<FockVector>(&r.final_state);
  if (o.format == "json") {
    json j;
    j["command"] = "netlist";
    j["file"] = path.string();
    j["outcomes"] = json::array();
    for (const auto& [occ, p] : rows) j["outcomes"].push_back({{"occupation", occ}, {"probability", p}});
    if (o.state) {
      if (pure) {
        j["state"] = {{"kind", "pure"}, {"text", ket_notation(*pure)}};
      } else {
        const auto& rho = std::get<DensityOp>(r.final_state);
        j["state"] = {{"kind", "mixed"}, {"purity", rho.purity()}};
      }
    }
    emit(dump(j), "");
  } else if (o.format == "csv") {
    std::string s = "outcome,probability\n";
    for (const auto& [occ, p] : rows) s += occupation_digits(occ) + "," + sci(p) + "\n";
    emit(s, "");
  } else {
    std::ostringstream os;
    for (const auto& [occ, p] : rows) os << tuple(occ) << ": " << fixed(p) << "\n";
    if (o.state) {
      if (pure)
        os << "state: " << ket_notation(*pure) << "\n";
      else
        os << "state: mixed, purity " << short_num(std::get<DensityOp>(r.final_state).purity()) << "\n";
    }
    emit(os.str(), "");
  }
  return 0;
}

void format_option(CLI::App* sub, std::string& target) {
  sub->add_option("--format", target, "Output format")->check(CLI::IsMember({"table", "csv", "json"}))->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated-Fock simulator for the one-bit photonic Deutsch machine", "qoptics"};
  app.require_subcommand(1);

  RunOpts run;
  auto* run_cmd = app.add_subcommand("run", "Run the machine and print the outcome distribution");
  run_cmd->add_option("--k", run.k, "Bob's function selector: k1k0, or k2k1k0 for two input bits")->required();
  run_cmd->add_flag("--with-s,!--no-s", run.with_s, "Keep or remove the S phase shifter (default: keep)");
  run_cmd->add_option("--gamma", run.gamma, "Photon-loss coupling")->capture_default_str();
  run_cmd->add_option("--chi", run.chi, "Cross-Kerr phase")->capture_default_str();
  run_cmd->add_option("--cutoff", run.cutoff, "Per-mode cutoff")->capture_default_str();
  run_cmd->add_option("--sample", run.sample, "Draw this many shots from the distribution");
  run_cmd->add_option("--seed", run.seed, "Seed for --sample")->capture_default_str();
  format_option(run_cmd, run.format);

  TrajOpts traj;
  auto* traj_cmd = app.add_subcommand("trajectory", "Print the states ψ0 … ψ5");
  traj_cmd->add_option("--k", traj.k, "Function selector")->required();
  traj_cmd->add_flag("--with-s,!--no-s", traj.with_s, "Keep or remove S (default: keep)");
  traj_cmd->add_option("--chi", traj.chi, "Cross-Kerr phase")->capture_default_str();
  format_option(traj_cmd, traj.format);

  SweepOpts sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Error rates against photon-loss coupling");
  sweep_cmd->add_option("--k", sweep.k, "Function selector (k1k0)")->required();
  sweep_cmd->add_option("--gamma-min", sweep.gamma_min)->capture_default_str();
  sweep_cmd->add_option("--gamma-max", sweep.gamma_max)->capture_default_str();
  sweep_cmd->add_option("--steps", sweep.steps, "Number of grid points")->capture_default_str();
  sweep_cmd->add_flag("--log", sweep.log, "Logarithmic grid");
  sweep_cmd->add_option("--out", sweep.out, "Output file (default: stdout)");
  format_option(sweep_cmd, sweep.format);

  ChiOpts chi;
  auto* chi_cmd = app.add_subcommand("chi-sweep", "Success probability against Kerr phase over [0, pi]");
  chi_cmd->add_option("--k", chi.k, "Function selector (k1k0)")->required();
  chi_cmd->add_option("--steps", chi.steps, "Number of grid points")->capture_default_str();
  chi_cmd->add_flag("--with-s,!--no-s", chi.with_s, "Keep or remove S (default: keep)");
  chi_cmd->add_option("--out", chi.out, "Output file (default: stdout)");
  format_option(chi_cmd, chi.format);

  ClassicalOpts cl;
  auto* cl_cmd = app.add_subcommand("classical", "Coherent-state input with and without S");
  cl_cmd->add_option("--alpha", cl.alpha, "Coherent amplitude (real part)")->capture_default_str();
  cl_cmd->add_option("--alpha-im", cl.alpha_im, "Coherent amplitude (imaginary part)")->capture_default_str();
  cl_cmd->add_option("--cutoff", cl.cutoff, "Per-mode cutoff")->capture_default_str();
  cl_cmd->add_option("--k", cl.k, "Function selector (k1k0)")->capture_default_str();
  cl_cmd->add_option("--kerr", cl.kerr, "Kerr model")->check(CLI::IsMember({"mean-field", "quantum"}))->capture_default_str();
  format_option(cl_cmd, cl.format);

  NetlistOpts nl;
  auto* nl_cmd = app.add_subcommand("netlist", "Parse and execute a .qnl netlist");
  nl_cmd->add_option("file", nl.file, "Netlist file (looked up under QNL_PATH first)")->required();
  nl_cmd->add_flag("--state", nl.state, "Also print the final state");
  nl_cmd->add_option("--kerr", nl.kerr, "Kerr model")->check(CLI::IsMember({"quantum", "mean-field"}))->capture_default_str();
  format_option(nl_cmd, nl.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*traj_cmd) return cmd_trajectory(traj);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*chi_cmd) return cmd_chi_sweep(chi);
    if (*cl_cmd) return cmd_classical(cl);
    if (*nl_cmd) return cmd_netlist(nl);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const CutoffError& e) {
    std::cerr << "error: " << e.what() << "\nhint: minimal cutoff is " << e.required_cutoff() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
