#include "qoptics/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace qoptics {

ParseError::ParseError(int line, int column, const std::string& message)
    : DomainError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                  message),
      line_(line),
      column_(column),
      message_(message) {}

std::string mode_name(int mode) {
  if (mode < 0 || mode >= 26) throw DomainError("mode index out of letter range: " + std::to_string(mode));
  return std::string(1, static_cast<char>('a' + mode));
}

namespace {

constexpr Index kMaxDim = Index{1} << 26;

enum class Tok { Word, Number, LBrace, RBrace, Star, Slash, Minus, Newline, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

std::string lower_case(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Newline:
      return "end of line";
    case Tok::End:
      return "end of input";
    default:
      return "'" + t.text + "'";
  }
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i)
      if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) ++col;
  };
  while (i < src.size()) {
    const char ch = src[i];
    const auto uch = static_cast<unsigned char>(ch);
    if (ch == '\n') {
      out.push_back({Tok::Newline, "\n", line, col});
      ++i;
      ++line;
      col = 1;
    } else if (ch == ' ' || ch == '\t' || ch == '\r') {
      advance(1);
    } else if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (std::isalpha(uch) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Word, std::string(src.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (std::isdigit(uch) || ch == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), line, col});
      advance(j - i);
    } else if (ch == '{' || ch == '}' || ch == '*' || ch == '/' || ch == '-') {
      const Tok k = ch == '{' ? Tok::LBrace
                    : ch == '}' ? Tok::RBrace
                    : ch == '*' ? Tok::Star
                    : ch == '/' ? Tok::Slash
                                : Tok::Minus;
      out.push_back({k, std::string(1, ch), line, col});
      advance(1);
    } else {
      std::string shown = uch < 0x20 || uch >= 0x7f ? "byte 0x" : "'";
      if (shown == "'") {
        shown += ch;
        shown += "'";
      } else {
        char buf[3];
        std::snprintf(buf, sizeof buf, "%02x", uch);
        shown += buf;
      }
      throw ParseError(line, col, "unexpected character " + shown);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

struct GateInfo {
  std::size_t min_modes, max_modes;
  std::size_t min_params, max_params;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program run() {
    for (;;) {
      skip_newlines();
      if (peek().kind == Tok::End) break;
      if (peek().kind == Tok::RBrace) fail(peek(), "unmatched '}'");
      statement(0, prog_.body);
      end_of_statement(false);
    }
    if (!have_modes_) fail(peek(), "missing 'modes' directive");
    if (!have_cutoff_) fail(peek(), "missing 'cutoff' directive");
    return std::move(prog_);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program prog_;
  bool have_modes_ = false;
  bool have_cutoff_ = false;
  bool seen_body_ = false;

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw ParseError(t.line, t.col, msg); }

  void skip_newlines() {
    while (peek().kind == Tok::Newline) ++pos_;
  }

  void end_of_statement(bool in_block) {
    const Token& t = peek();
    if (t.kind == Tok::Newline) {
      ++pos_;
      return;
    }
    if (t.kind == Tok::End || (in_block && t.kind == Tok::RBrace)) return;
    fail(t, "unexpected " + describe(t) + " after statement");
  }

  bool at_statement_end() const {
    const Tok k = peek().kind;
    return k == Tok::Newline || k == Tok::End || k == Tok::RBrace;
  }

  int parse_int(const char* what) {
    const Token& t = next();
    if (t.kind != Tok::Number || !std::all_of(t.text.begin(), t.text.end(),
                                              [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      fail(t, std::string("expected a nonnegative integer for ") + what + ", got " + describe(t));
    int v = 0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t, std::string(what) + " is too large");
    return v;
  }

  double factor() {
    const Token& t = next();
    if (t.kind == Tok::Word && lower_case(t.text) == "pi") return kPi;
    if (t.kind != Tok::Number) fail(t, "expected a number or 'pi', got " + describe(t));
    double v = 0.0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size()) fail(t, "malformed number '" + t.text + "'");
    return v;
  }

  double expression() {
    const Token& start = peek();
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      negative = true;
      ++pos_;
    }
    double v = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const bool mul = next().kind == Tok::Star;
      const Token& rhs = peek();
      const double f = factor();
      if (!mul && f == 0.0) fail(rhs, "division by zero");
      v = mul ? v * f : v / f;
    }
    if (!std::isfinite(v)) fail(start, "value is not finite");
    return negative ? -v : v;
  }

  bool is_mode_token(const Token& t) const {
    return t.kind == Tok::Word && t.text.size() == 1 && std::isalpha(static_cast<unsigned char>(t.text[0]));
  }

  int mode(const Token& t) {
    if (!is_mode_token(t)) fail(t, "expected a mode letter, got " + describe(t));
    const int m = std::tolower(static_cast<unsigned char>(t.text[0])) - 'a';
    if (m >= prog_.modes)
      fail(t, "mode '" + lower_case(t.text) + "' out of range (" + std::to_string(prog_.modes) + " modes declared)");
    return m;
  }

  void require_header(const Token& kw) {
    if (!have_modes_) fail(kw, "'" + lower_case(kw.text) + "' before the 'modes' directive");
    if (!have_cutoff_) fail(kw, "'" + lower_case(kw.text) + "' before the 'cutoff' directive");
  }

  void check_dimension(const Token& at) {
    if (!have_modes_ || !have_cutoff_) return;
    Index dim = 1;
    for (int i = 0; i < prog_.modes; ++i) {
      dim *= prog_.cutoff;
      if (dim > kMaxDim)
        fail(at, "state space " + std::to_string(prog_.cutoff) + "^" + std::to_string(prog_.modes) +
                     " exceeds the supported dimension");
    }
  }

  void statement(int depth, std::vector<Statement>& into) {
    const Token kw = next();
    if (kw.kind != Tok::Word) fail(kw, "expected a keyword, got " + describe(kw));
    const std::string name = lower_case(kw.text);
    if (prog_.measure && depth == 0) fail(kw, "statement after 'measure'");

    const bool directive = name == "modes" || name == "cutoff" || name == "state" || name == "measure";
    if (directive && depth > 0) fail(kw, "'" + name + "' is not allowed inside an adjoint block");

    if (name == "modes") {
      if (have_modes_) fail(kw, "duplicate 'modes' directive");
      if (seen_body_) fail(kw, "'modes' must precede states and gates");
      const Token& at = peek();
      const int m = parse_int("modes");
      if (m < 1 || m > 26) fail(at, "modes must be between 1 and 26");
      prog_.modes = m;
      have_modes_ = true;
      check_dimension(at);
    } else if (name == "cutoff") {
      if (have_cutoff_) fail(kw, "duplicate 'cutoff' directive");
      if (seen_body_) fail(kw, "'cutoff' must precede states and gates");
      const Token& at = peek();
      const int d = parse_int("cutoff");
      if (d < 2) fail(at, "cutoff must be at least 2");
      prog_.cutoff = d;
      have_cutoff_ = true;
      check_dimension(at);
    } else if (name == "state") {
      require_header(kw);
      state_directive(kw);
    } else if (name == "measure") {
      require_header(kw);
      prog_.measure = true;
    } else if (name == "adjoint") {
      require_header(kw);
      seen_body_ = true;
      const Token& brace = next();
      if (brace.kind != Tok::LBrace) fail(brace, "expected '{' after 'adjoint', got " + describe(brace));
      AdjointBlock block;
      for (;;) {
        skip_newlines();
        if (peek().kind == Tok::RBrace) {
          ++pos_;
          break;
        }
        if (peek().kind == Tok::End)
          fail(peek(), "missing '}' for adjoint block opened at line " + std::to_string(brace.line));
        statement(depth + 1, block.body);
        end_of_statement(true);
      }
      into.push_back({std::move(block), kw.line});
    } else {
      into.push_back({gate(kw, name, depth), kw.line});
      seen_body_ = true;
    }
  }

  void state_directive(const Token& kw) {
    seen_body_ = true;
    const Token& sub = next();
    const std::string kind = sub.kind == Tok::Word ? lower_case(sub.text) : "";
    if (kind == "fock") {
      if (prog_.state) fail(kw, "duplicate 'state' directive");
      FockInit init;
      while (!at_statement_end()) {
        const Token& at = peek();
        const int n = parse_int("occupation");
        if (n >= prog_.cutoff)
          fail(at, "occupation " + std::to_string(n) + " needs cutoff > " + std::to_string(n) +
                       " (declared " + std::to_string(prog_.cutoff) + ")");
        init.occupations.push_back(n);
      }
      if (static_cast<int>(init.occupations.size()) != prog_.modes)
        fail(kw, "'state fock' expects " + std::to_string(prog_.modes) + " occupations, got " +
                     std::to_string(init.occupations.size()));
      prog_.state = std::move(init);
    } else if (kind == "coherent") {
      if (prog_.state && std::holds_alternative<FockInit>(*prog_.state))
        fail(kw, "duplicate 'state' directive");
      if (!prog_.state) prog_.state = CoherentInit{};
      auto& init = std::get<CoherentInit>(*prog_.state);
      const Token& mt = next();
      const int m = mode(mt);
      for (const auto& [prev, a] : init.amplitudes)
        if (prev == m) fail(mt, "mode '" + mode_name(m) + "' already has a coherent amplitude");
      const double re = expression();
      const double im = at_statement_end() ? 0.0 : expression();
      init.amplitudes.emplace_back(m, Complex(re, im));
    } else {
      fail(sub, "expected 'fock' or 'coherent' after 'state', got " + describe(sub));
    }
  }

  GateSpec gate(const Token& kw, const std::string& name, int depth) {
    GateInfo info{};
    if (name == "bs")
      info = {2, 2, 0, 1};
    else if (name == "phase")
      info = {1, 1, 1, 1};
    else if (name == "kerr")
      info = {2, 2, 1, 1};
    else if (name == "fredkin")
      info = {3, 3, 0, 1};
    else if (name == "damp")
      info = {1, 2, 1, 1};
    else
      fail(kw, "unknown keyword '" + kw.text + "'");
    if (name == "damp" && depth > 0) fail(kw, "'damp' inside an adjoint block (channels have no adjoint)");

    std::vector<Token> mode_toks;
    while (is_mode_token(peek())) mode_toks.push_back(next());
    std::vector<double> params;
    while (!at_statement_end()) params.push_back(expression());

    auto plural = [](std::size_t n, const char* w) { return std::to_string(n) + " " + w + (n == 1 ? "" : "s"); };
    auto range = [&](std::size_t lo, std::size_t hi, const char* w) {
      return lo == hi ? plural(lo, w) : std::to_string(lo) + " or " + plural(hi, w);
    };
    if (mode_toks.size() < info.min_modes || mode_toks.size() > info.max_modes)
      fail(kw, "'" + name + "' expects " + range(info.min_modes, info.max_modes, "mode") + ", got " +
                   std::to_string(mode_toks.size()));
    if (params.size() < info.min_params || params.size() > info.max_params)
      fail(kw, "'" + name + "' expects " + range(info.min_params, info.max_params, "parameter") + ", got " +
                   std::to_string(params.size()));

    require_header(kw);
    std::vector<int> modes;
    for (const auto& t : mode_toks) modes.push_back(mode(t));

    GateSpec g{Beamsplitter{}, modes};
    if (name == "bs")
      g.kind = params.empty() ? Beamsplitter{} : Beamsplitter{params[0]};
    else if (name == "phase")
      g.kind = Phase{params[0]};
    else if (name == "kerr")
      g.kind = Kerr{params[0]};
    else if (name == "fredkin")
      g.kind = params.empty() ? Fredkin{} : Fredkin{params[0]};
    else
      g.kind = Damp{params[0]};
    try {
      validate(g, prog_.modes);
    } catch (const DomainError& e) {
      fail(kw, e.what());
    }
    return g;
  }
};

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s = buf;
  // shortest text that reads back to the same double
  for (int prec = 1; prec < 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) {
      s = buf;
      break;
    }
  }
  return s;
}

std::string format_angle(double v) {
  const double a = std::abs(v);
  const std::string sign = v < 0 ? "-" : "";
  for (int q = 1; q <= 64; ++q) {
    for (int p = 1; p <= 256; ++p) {
      const double num = p == 1 ? kPi : p * kPi;
      const double cand = q == 1 ? num : num / q;
      if (cand == a) {
        std::string s = sign + (p == 1 ? "pi" : std::to_string(p) + "*pi");
        if (q != 1) s += "/" + std::to_string(q);
        return s;
      }
    }
  }
  return format_number(v);
}

void print_body(std::ostringstream& os, const std::vector<Statement>& body, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& st : body) {
    if (const auto* blk = std::get_if<AdjointBlock>(&st.node)) {
      os << pad << "adjoint {\n";
      print_body(os, blk->body, indent + 1);
      os << pad << "}\n";
      continue;
    }
    const auto& g = std::get<GateSpec>(st.node);
    std::string head;
    double param = 0.0;
    bool angle = true;
    if (const auto* x = std::get_if<Beamsplitter>(&g.kind)) {
      head = "bs";
      param = x->theta;
    } else if (const auto* x = std::get_if<Phase>(&g.kind)) {
      head = "phase";
      param = x->phi;
    } else if (const auto* x = std::get_if<Kerr>(&g.kind)) {
      head = "kerr";
      param = x->chi;
    } else if (const auto* x = std::get_if<Fredkin>(&g.kind)) {
      head = "fredkin";
      param = x->chi;
    } else if (const auto* x = std::get_if<Damp>(&g.kind)) {
      head = "damp";
      param = x->gamma;
      angle = false;
    } else {
      throw DomainError("gate '" + gate_name(g.kind) + "' has no netlist form");
    }
    os << pad << head;
    for (int m : g.modes) os << ' ' << mode_name(m);
    os << ' ' << (angle ? format_angle(param) : format_number(param)) << '\n';
  }
}

std::vector<Element> lower_body(const std::vector<Statement>& body, int modes, int cutoff) {
  std::vector<Element> out;
  for (const auto& st : body) {
    if (const auto* g = std::get_if<GateSpec>(&st.node))
      append(out, lower(*g, modes, cutoff));
    else
      append(out, adjoint(lower_body(std::get<AdjointBlock>(st.node).body, modes, cutoff)));
  }
  return out;
}

}  // namespace

Program parse_netlist(std::string_view text) { return Parser(tokenize(text)).run(); }

std::string pretty_print(const Program& p) {
  std::ostringstream os;
  os << "modes " << p.modes << "\ncutoff " << p.cutoff << '\n';
  if (p.state) {
    if (const auto* f = std::get_if<FockInit>(&*p.state)) {
      os << "state fock";
      for (int n : f->occupations) os << ' ' << n;
      os << '\n';
    } else {
      for (const auto& [m, a] : std::get<CoherentInit>(*p.state).amplitudes)
        os << "state coherent " << mode_name(m) << ' ' << format_number(a.real()) << ' '
           << format_number(a.imag()) << '\n';
    }
  }
  print_body(os, p.body, 0);
  if (p.measure) os << "measure\n";
  return os.str();
}

Circuit to_circuit(const Program& p) {
  Circuit c{FockBasis(p.modes, p.cutoff), std::vector<ModeInput>(static_cast<std::size_t>(p.modes), 0), {}};
  if (p.state) {
    if (const auto* f = std::get_if<FockInit>(&*p.state)) {
      for (std::size_t i = 0; i < f->occupations.size(); ++i) c.inputs[i] = f->occupations[i];
    } else {
      for (const auto& [m, a] : std::get<CoherentInit>(*p.state).amplitudes)
        c.inputs[static_cast<std::size_t>(m)] = a;
    }
  }
  c.elements = lower_body(p.body, p.modes, p.cutoff);
  return c;
}

ExecResult execute(const Program& p, const EvalOptions& opts) {
  auto r = evaluate(to_circuit(p), opts);
  OutcomeDist dist = measure_counts(r.final_state);
  return {std::move(dist), std::move(r.final_state)};
}

}  // namespace qoptics
