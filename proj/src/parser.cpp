#include "cvsim/parser.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace cvsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

enum class Tok { Ident, Number, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.pos = {line_, col_};
    if (i_ >= src_.size()) return t;
    const char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
        t.text += src_[i_];
        advance();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
      t.kind = Tok::Number;
      const char* begin = src_.c_str() + i_;
      char* end = nullptr;
      t.number = std::strtod(begin, &end);
      const size_t len = static_cast<size_t>(end - begin);
      t.text = src_.substr(i_, len);
      for (size_t k = 0; k < len; ++k) advance();
      return t;
    }
    t.kind = Tok::Punct;
    t.text = std::string(1, c);
    advance();
    return t;
  }

 private:
  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_ws() {
    while (i_ < src_.size()) {
      if (src_[i_] == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(src_[i_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& src_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

const std::map<std::string, Opcode>& gate_opcodes() {
  static const std::map<std::string, Opcode> table = {
      {"displace", Opcode::Displace}, {"rotate", Opcode::Rotate},
      {"squeeze", Opcode::Squeeze},   {"tms", Opcode::Tms},
      {"bs", Opcode::Bs},             {"loss", Opcode::Loss},
      {"amplify", Opcode::Amplify},   {"noise", Opcode::Noise},
      {"kerr", Opcode::Kerr},
  };
  return table;
}

const std::map<std::string, Opcode>& measure_opcodes() {
  static const std::map<std::string, Opcode> table = {
      {"homodyne", Opcode::Homodyne},
      {"heterodyne", Opcode::Heterodyne},
      {"vacproject", Opcode::VacProject},
      {"photoncount", Opcode::PhotonCount},
  };
  return table;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : lexer_(src) { bump(); }

  ParseResult run() {
    CircuitProgram program;
    while (cur_.kind != Tok::End) {
      if (accept_punct(";")) continue;  // stray terminator
      if (parse_statement(program)) continue;
      sync_to_semicolon();
    }
    ParseResult res;
    res.diagnostics = diags_;
    if (!syntax_failed_) {
      for (const auto& d : validate(program)) res.diagnostics.push_back(d);
      res.program = std::move(program);
    }
    return res;
  }

 private:
  void bump() { cur_ = lexer_.next(); }

  bool accept_punct(const std::string& p) {
    if (cur_.kind == Tok::Punct && cur_.text == p) {
      bump();
      return true;
    }
    return false;
  }

  void error(Diagnostic::Kind kind, const std::string& msg, SourcePos pos) {
    diags_.push_back({kind, msg, pos});
    if (kind == Diagnostic::Kind::SyntaxError || kind == Diagnostic::Kind::UnknownOpcode) {
      syntax_failed_ = true;
    }
  }

  void sync_to_semicolon() {
    while (cur_.kind != Tok::End && !(cur_.kind == Tok::Punct && cur_.text == ";")) {
      bump();
    }
    if (cur_.kind != Tok::End) bump();
  }

  bool expect_semicolon() {
    if (!accept_punct(";")) {
      error(Diagnostic::Kind::SyntaxError, "expected ';'", cur_.pos);
      return false;
    }
    return true;
  }

  bool parse_statement(CircuitProgram& program) {
    if (cur_.kind != Tok::Ident) {
      error(Diagnostic::Kind::SyntaxError, "expected a statement", cur_.pos);
      return false;
    }
    Token head = cur_;
    bump();

    if (head.text == "mode") return parse_mode_decl(program, head.pos);

    if (cur_.kind == Tok::Punct && cur_.text == "=") {
      bump();
      return parse_measurement(program, head);
    }

    auto it = gate_opcodes().find(head.text);
    if (it == gate_opcodes().end()) {
      error(Diagnostic::Kind::UnknownOpcode, "unknown opcode '" + head.text + "'",
            head.pos);
      return false;
    }
    Instruction ins;
    ins.op = it->second;
    ins.pos = head.pos;
    const int n_modes = (ins.op == Opcode::Tms || ins.op == Opcode::Bs) ? 2 : 1;
    for (int k = 0; k < n_modes; ++k) {
      if (cur_.kind != Tok::Ident) {
        error(Diagnostic::Kind::SyntaxError, "expected a mode name", cur_.pos);
        return false;
      }
      ins.modes.push_back(cur_.text);
      bump();
    }
    while (!(cur_.kind == Tok::Punct && cur_.text == ";") && cur_.kind != Tok::End) {
      auto expr = parse_param();
      if (!expr) return false;
      ins.params.push_back(std::move(*expr));
    }
    if (!expect_semicolon()) return false;
    program.instructions.push_back(std::move(ins));
    return true;
  }

  bool parse_mode_decl(CircuitProgram& program, SourcePos pos) {
    Instruction ins;
    ins.op = Opcode::DeclareMode;
    ins.pos = pos;
    if (cur_.kind != Tok::Ident) {
      error(Diagnostic::Kind::SyntaxError, "expected a mode name", cur_.pos);
      return false;
    }
    ins.modes.push_back(cur_.text);
    bump();
    if (cur_.kind == Tok::Ident && cur_.text == "init") {
      bump();
      if (!accept_punct("=")) {
        error(Diagnostic::Kind::SyntaxError, "expected '=' after init", cur_.pos);
        return false;
      }
      if (!parse_init(ins.init)) return false;
    }
    if (!expect_semicolon()) return false;
    program.instructions.push_back(std::move(ins));
    return true;
  }

  bool parse_init(InitState& init) {
    if (cur_.kind != Tok::Ident) {
      error(Diagnostic::Kind::SyntaxError, "expected an initial-state token", cur_.pos);
      return false;
    }
    const std::string kind = cur_.text;
    const SourcePos pos = cur_.pos;
    bump();
    std::vector<double> args;
    if (accept_punct("(")) {
      while (true) {
        auto expr = parse_expr();
        if (!expr) return false;
        if (!expr->is_constant()) {
          error(Diagnostic::Kind::SyntaxError, "init arguments must be constants", pos);
          return false;
        }
        args.push_back(expr->constant);
        if (accept_punct(",")) continue;
        if (accept_punct(")")) break;
        error(Diagnostic::Kind::SyntaxError, "expected ',' or ')'", cur_.pos);
        return false;
      }
    }
    auto need = [&](size_t n) {
      if (args.size() != n) {
        error(Diagnostic::Kind::SyntaxError,
              "init token '" + kind + "' expects " + std::to_string(n) + " argument(s)",
              pos);
        return false;
      }
      return true;
    };
    if (kind == "vacuum") {
      if (!need(0)) return false;
      init.kind = InitKind::Vacuum;
    } else if (kind == "coherent") {
      if (!need(2)) return false;
      init = {InitKind::Coherent, args[0], args[1], 0};
    } else if (kind == "squeezed") {
      if (!need(2)) return false;
      init = {InitKind::Squeezed, args[0], args[1], 0};
    } else if (kind == "thermal") {
      if (!need(1)) return false;
      init = {InitKind::Thermal, args[0], 0.0, 0};
    } else if (kind == "fock") {
      if (!need(1)) return false;
      if (args[0] != std::floor(args[0]) || args[0] < 0) {
        error(Diagnostic::Kind::SyntaxError, "fock argument must be a non-negative integer",
              pos);
        return false;
      }
      init = {InitKind::Fock, 0.0, 0.0, static_cast<int>(args[0])};
    } else {
      error(Diagnostic::Kind::UnknownOpcode, "unknown initial-state token '" + kind + "'",
            pos);
      return false;
    }
    return true;
  }

  bool parse_measurement(CircuitProgram& program, const Token& reg) {
    if (cur_.kind != Tok::Ident) {
      error(Diagnostic::Kind::SyntaxError, "expected a measurement opcode", cur_.pos);
      return false;
    }
    auto it = measure_opcodes().find(cur_.text);
    if (it == measure_opcodes().end()) {
      error(Diagnostic::Kind::UnknownOpcode,
            "unknown measurement opcode '" + cur_.text + "'", cur_.pos);
      return false;
    }
    Instruction ins;
    ins.op = it->second;
    ins.pos = reg.pos;
    ins.target_register = reg.text;
    bump();
    if (cur_.kind != Tok::Ident) {
      error(Diagnostic::Kind::SyntaxError, "expected a mode name", cur_.pos);
      return false;
    }
    ins.modes.push_back(cur_.text);
    bump();
    while (!(cur_.kind == Tok::Punct && cur_.text == ";") && cur_.kind != Tok::End) {
      auto expr = parse_param();
      if (!expr) return false;
      ins.params.push_back(std::move(*expr));
    }
    if (!expect_semicolon()) return false;
    program.instructions.push_back(std::move(ins));
    return true;
  }

  // A bare parameter is a single tight term; sums must be parenthesized so
  // whitespace keeps separating parameters.
  std::optional<AffineExpr> parse_param() {
    if (cur_.kind == Tok::Punct && cur_.text == "(") {
      bump();
      auto e = parse_expr();
      if (!e) return std::nullopt;
      if (!accept_punct(")")) {
        error(Diagnostic::Kind::SyntaxError, "expected ')'", cur_.pos);
        return std::nullopt;
      }
      return e;
    }
    return parse_term();
  }

  std::optional<AffineExpr> parse_expr() {
    auto lhs = parse_term();
    if (!lhs) return std::nullopt;
    while (cur_.kind == Tok::Punct && (cur_.text == "+" || cur_.text == "-")) {
      const bool minus = cur_.text == "-";
      bump();
      auto rhs = parse_term();
      if (!rhs) return std::nullopt;
      lhs->constant += minus ? -rhs->constant : rhs->constant;
      for (auto& [c, r] : rhs->terms) {
        lhs->terms.emplace_back(minus ? -c : c, std::move(r));
      }
    }
    return lhs;
  }

  std::optional<AffineExpr> parse_term() {
    auto lhs = parse_factor();
    if (!lhs) return std::nullopt;
    while (cur_.kind == Tok::Punct && (cur_.text == "*" || cur_.text == "/")) {
      const bool divide = cur_.text == "/";
      const SourcePos pos = cur_.pos;
      bump();
      auto rhs = parse_factor();
      if (!rhs) return std::nullopt;
      if (divide) {
        if (!rhs->is_constant() || rhs->constant == 0.0) {
          error(Diagnostic::Kind::SyntaxError, "division must be by a nonzero constant",
                pos);
          return std::nullopt;
        }
        lhs->constant /= rhs->constant;
        for (auto& [c, r] : lhs->terms) c /= rhs->constant;
      } else {
        if (!lhs->is_constant() && !rhs->is_constant()) {
          error(Diagnostic::Kind::SyntaxError,
                "products of registers are not affine", pos);
          return std::nullopt;
        }
        if (rhs->is_constant()) {
          lhs->constant *= rhs->constant;
          for (auto& [c, r] : lhs->terms) c *= rhs->constant;
        } else {
          const double k = lhs->constant;
          *lhs = *rhs;
          lhs->constant *= k;
          for (auto& [c, r] : lhs->terms) c *= k;
        }
      }
    }
    return lhs;
  }

  std::optional<AffineExpr> parse_factor() {
    if (cur_.kind == Tok::Punct && cur_.text == "-") {
      bump();
      auto e = parse_factor();
      if (!e) return std::nullopt;
      e->constant = -e->constant;
      for (auto& [c, r] : e->terms) c = -c;
      return e;
    }
    if (cur_.kind == Tok::Punct && cur_.text == "(") {
      bump();
      auto e = parse_expr();
      if (!e) return std::nullopt;
      if (!accept_punct(")")) {
        error(Diagnostic::Kind::SyntaxError, "expected ')'", cur_.pos);
        return std::nullopt;
      }
      return e;
    }
    if (cur_.kind == Tok::Number) {
      AffineExpr e = AffineExpr::literal(cur_.number);
      bump();
      return e;
    }
    if (cur_.kind == Tok::Ident) {
      AffineExpr e;
      if (cur_.text == "pi") {
        e = AffineExpr::literal(kPi);
      } else {
        e = AffineExpr::reg(cur_.text);
      }
      bump();
      return e;
    }
    error(Diagnostic::Kind::SyntaxError, "expected a number, register, or '('",
          cur_.pos);
    return std::nullopt;
  }

  Lexer lexer_;
  Token cur_;
  std::vector<Diagnostic> diags_;
  bool syntax_failed_ = false;
};

}  // namespace

ParseResult parse(const std::string& source) { return Parser(source).run(); }

}  // namespace cvsim
