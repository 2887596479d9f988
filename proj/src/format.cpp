#include "qoptics/format.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

namespace qoptics {

namespace {

const char* const kMinus = "−";

// ±1 / ±i unit, or nullptr.
const char* unit_symbol(Complex u, double tol, bool leading) {
  if (std::abs(u - Complex(1, 0)) < tol) return leading ? "" : "+";
  if (std::abs(u + Complex(1, 0)) < tol) return kMinus;
  if (std::abs(u - Complex(0, 1)) < tol) return leading ? "i" : "+i";
  if (std::abs(u + Complex(0, 1)) < tol) return "−i";
  return nullptr;
}

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  std::string s = buf;
  if (!s.empty() && s[0] == '-') s = kMinus + s.substr(1);
  return s;
}

}  // namespace

std::string occupation_digits(const Occupation& occ) {
  bool wide = false;
  for (int n : occ) wide = wide || n > 9;
  std::string s;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (wide && i) s += ':';
    s += std::to_string(occ[i]);
  }
  return s;
}

std::string ket_notation(const FockVector& v, double tol) {
  const auto& amps = v.amplitudes();
  std::vector<std::pair<Index, Complex>> terms;
  for (Index i = 0; i < amps.size(); ++i)
    if (std::abs(amps(i)) > tol) terms.emplace_back(i, amps(i));
  if (terms.empty()) return "0";

  const double r = std::abs(terms.front().second);
  const double n_real = 1.0 / (r * r);
  const long n = std::lround(n_real);
  bool uniform = n >= 1 && std::abs(n_real - static_cast<double>(n)) < 1e-6 * n_real;
  std::vector<const char*> signs;
  for (std::size_t t = 0; uniform && t < terms.size(); ++t) {
    const char* s = unit_symbol(terms[t].second / r, 1e-8, t == 0);
    uniform = s != nullptr && std::abs(std::abs(terms[t].second) - r) < 1e-8;
    signs.push_back(s);
  }

  std::string body;
  if (uniform) {
    for (std::size_t t = 0; t < terms.size(); ++t)
      body += std::string(signs[t]) + ket_label(v.basis().state(terms[t].first));
    if (n == 1) return body;
    const long root = std::lround(std::sqrt(static_cast<double>(n)));
    const std::string denom = root * root == n ? std::to_string(root) : "√" + std::to_string(n);
    return terms.size() == 1 ? body + "/" + denom : "(" + body + ")/" + denom;
  }

  for (std::size_t t = 0; t < terms.size(); ++t) {
    const Complex a = terms[t].second;
    std::string coef = "(" + number(a.real());
    coef += a.imag() < 0 ? kMinus + number(-a.imag()) : "+" + number(a.imag());
    coef += "i)";
    if (t) body += " + ";
    body += coef + ket_label(v.basis().state(terms[t].first));
  }
  return body;
}

}  // namespace qoptics
