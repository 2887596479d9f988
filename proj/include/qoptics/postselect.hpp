#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qoptics/fock.hpp"
#include "qoptics/optics.hpp"

namespace qoptics {

enum class RejectReason { PhotonLoss, TooManyPhotons, ScratchCorrupted };

struct Accept {
  FunctionType answer;
};
struct Reject {
  RejectReason reason;
};
using Verdict = std::variant<Accept, Reject>;

std::string to_string(RejectReason r);
std::string to_string(const Verdict& v);

// Dual-rail legality rule for the one-bit machine's four counts (a, b, c, d).
// Only |0101⟩ (type1) and |0110⟩ (type2) are accepted.
Verdict classify(std::span<const int> outcome);

// Error probability without correction (mode-d readout only):
//   ¼ [1 + e^{−γ} − 2 e^{−3γ/2}]
double p_noec_analytic(double gamma);
// Error probability after rejecting illegal outcomes:
//   ½ [1 − sech(γ/2)]
double p_ec_analytic(double gamma);

enum class ErrorMode { Raw, Postselected };

// Raw: P(mode-d count differs from the value the true type implies), over the
// whole distribution. Postselected: P(wrong) / (P(wrong) + P(right)) over the
// two accepted outcomes; throws DomainError if neither has mass.
double conditional_error(const OutcomeDist& dist, FunctionType truth, ErrorMode mode);

// Probability of the accepted outcomes (the re-trial rate is 1 minus this).
double accepted_probability(const OutcomeDist& dist);

struct ErrorRow {
  double gamma;
  double p_raw_sim;
  double p_raw_analytic;  // NaN when no closed form applies (k1 = 0)
  double p_ec_sim;
  double p_ec_analytic;
  double accept_prob;
};

struct ErrorCurve {
  std::vector<ErrorRow> rows;
};

// Lossy one-bit machine with S in place at each γ; rows in grid order.
ErrorCurve sweep_gamma(unsigned k, std::span<const double> grid);

}  // namespace qoptics
