#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qoptics/circuit.hpp"

namespace qoptics {

class ParseError : public DomainError {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& message() const noexcept { return message_; }

 private:
  int line_;
  int column_;
  std::string message_;
};

struct Statement;

// Adjoint of the enclosed unitary-only statements.
struct AdjointBlock {
  std::vector<Statement> body;
  bool operator==(const AdjointBlock&) const;
};

struct Statement {
  std::variant<GateSpec, AdjointBlock> node;
  int line = 0;  // not part of structural equality
  bool operator==(const Statement& o) const { return node == o.node; }
};

inline bool AdjointBlock::operator==(const AdjointBlock& o) const { return body == o.body; }

struct FockInit {
  std::vector<int> occupations;
  bool operator==(const FockInit&) const = default;
};

// One amplitude per listed mode; unlisted modes start in vacuum.
struct CoherentInit {
  std::vector<std::pair<int, Complex>> amplitudes;
  bool operator==(const CoherentInit&) const = default;
};

using InitialState = std::variant<FockInit, CoherentInit>;

struct Program {
  int modes = 0;
  int cutoff = 0;
  std::optional<InitialState> state;  // vacuum when absent
  std::vector<Statement> body;
  bool measure = false;

  bool operator==(const Program&) const = default;
};

// Throws ParseError (line/column are 1-based).
Program parse_netlist(std::string_view text);

// Canonical text; parse_netlist(pretty_print(p)) == p.
std::string pretty_print(const Program& p);

std::string mode_name(int mode);

Circuit to_circuit(const Program& p);

struct ExecResult {
  OutcomeDist dist;
  State final_state;
};

// Throws CutoffError when a coherent amplitude does not fit the cutoff.
ExecResult execute(const Program& p, const EvalOptions& opts = {});

}  // namespace qoptics
