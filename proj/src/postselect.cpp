#include "qoptics/postselect.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numeric>

#include "qoptics/machine.hpp"

namespace qoptics {

std::string to_string(RejectReason r) {
  switch (r) {
    case RejectReason::PhotonLoss:
      return "photon loss";
    case RejectReason::TooManyPhotons:
      return "too many photons";
    case RejectReason::ScratchCorrupted:
      return "scratch corrupted";
  }
  return "?";
}

std::string to_string(const Verdict& v) {
  if (const auto* a = std::get_if<Accept>(&v)) return "accept " + to_string(a->answer);
  return "reject: " + to_string(std::get<Reject>(v).reason);
}

Verdict classify(std::span<const int> outcome) {
  if (outcome.size() != 4)
    throw DomainError("outcome must have 4 photon counts, got " + std::to_string(outcome.size()));
  for (int n : outcome)
    if (n < 0) throw DomainError("photon counts must be nonnegative");
  const int total = std::accumulate(outcome.begin(), outcome.end(), 0);
  if (total <= 1) return Reject{RejectReason::PhotonLoss};
  if (total >= 3) return Reject{RejectReason::TooManyPhotons};
  if (outcome[0] == 0 && outcome[1] == 1) {
    if (outcome[2] == 0 && outcome[3] == 1) return Accept{FunctionType::Type1};
    if (outcome[2] == 1 && outcome[3] == 0) return Accept{FunctionType::Type2};
  }
  return Reject{RejectReason::ScratchCorrupted};
}

double p_noec_analytic(double gamma) {
  if (std::isnan(gamma) || gamma < 0.0) throw DomainError("gamma must be nonnegative");
  return 0.25 * (std::expm1(-gamma) - 2.0 * std::expm1(-1.5 * gamma));
}

double p_ec_analytic(double gamma) {
  if (std::isnan(gamma) || gamma < 0.0) throw DomainError("gamma must be nonnegative");
  // 1 − sech x = 2 sinh²(x/2) / cosh x
  const double x = 0.5 * gamma;
  if (x > 700.0) return 0.5;
  const double s = std::sinh(0.5 * x);
  return s * s / std::cosh(x);
}

double accepted_probability(const OutcomeDist& dist) {
  return dist.probability({0, 1, 0, 1}) + dist.probability({0, 1, 1, 0});
}

double conditional_error(const OutcomeDist& dist, FunctionType truth, ErrorMode mode) {
  if (dist.num_modes() != 4) throw DomainError("error rates are defined on the 4-mode machine");
  if (mode == ErrorMode::Raw) {
    const int expected = truth == FunctionType::Type1 ? 1 : 0;
    double wrong = 0.0;
    for (const auto& [occ, p] : dist.entries())
      if (occ[static_cast<std::size_t>(mode::d)] != expected) wrong += p;
    return wrong;
  }
  const double p1 = dist.probability({0, 1, 0, 1});
  const double p2 = dist.probability({0, 1, 1, 0});
  if (p1 + p2 <= 0.0) throw DomainError("no accepted outcome has probability mass");
  const double wrong = truth == FunctionType::Type1 ? p2 : p1;
  return wrong / (p1 + p2);
}

ErrorCurve sweep_gamma(unsigned k, std::span<const double> grid) {
  if (k > 3) throw DomainError("function selector out of range for N=1");
  for (double g : grid)
    if (std::isnan(g) || g < 0.0) throw DomainError("gamma must be nonnegative");
  std::vector<std::future<ErrorRow>> jobs;
  jobs.reserve(grid.size());
  for (double g : grid) {
    jobs.push_back(std::async(std::launch::async, [k, g] {
      MachineConfig cfg;
      cfg.k = k;
      cfg.gamma = g;
      const FunctionType truth = true_type(cfg);
      const OutcomeDist dist = run_machine(cfg);
      const bool closed_form = (k >> 1) & 1U;
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const double acc = accepted_probability(dist);
      return ErrorRow{g,
                      conditional_error(dist, truth, ErrorMode::Raw),
                      closed_form ? p_noec_analytic(g) : nan,
                      acc > 0.0 ? conditional_error(dist, truth, ErrorMode::Postselected) : nan,
                      closed_form ? p_ec_analytic(g) : nan,
                      acc};
    }));
  }
  ErrorCurve curve;
  curve.rows.reserve(jobs.size());
  for (auto& j : jobs) curve.rows.push_back(j.get());
  return curve;
}

}  // namespace qoptics
