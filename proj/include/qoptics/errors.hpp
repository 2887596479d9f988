#pragma once

#include <stdexcept>
#include <string>

namespace qoptics {

// Argument outside an operation's domain (bad occupation, negative gamma, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical contract was violated: non-unitary matrix where one is required,
// incomplete Kraus set, failed construction self-test.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Truncation too small for the requested coherent amplitude.
class CutoffError : public DomainError {
 public:
  CutoffError(const std::string& what, int required_cutoff)
      : DomainError(what), required_cutoff_(required_cutoff) {}
  int required_cutoff() const noexcept { return required_cutoff_; }

 private:
  int required_cutoff_;
};

}  // namespace qoptics
