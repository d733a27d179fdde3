#include "cvsim/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "cvsim/errors.hpp"

namespace cvsim {

const char* opcode_name(Opcode op) {
  switch (op) {
    case Opcode::DeclareMode: return "mode";
    case Opcode::Displace: return "displace";
    case Opcode::Rotate: return "rotate";
    case Opcode::Squeeze: return "squeeze";
    case Opcode::Tms: return "tms";
    case Opcode::Bs: return "bs";
    case Opcode::Loss: return "loss";
    case Opcode::Amplify: return "amplify";
    case Opcode::Noise: return "noise";
    case Opcode::Channel: return "channel";
    case Opcode::Homodyne: return "homodyne";
    case Opcode::Heterodyne: return "heterodyne";
    case Opcode::VacProject: return "vacproject";
    case Opcode::PhotonCount: return "photoncount";
    case Opcode::Kerr: return "kerr";
  }
  return "?";
}

const char* diagnostic_kind_name(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::SyntaxError: return "SyntaxError";
    case Diagnostic::Kind::UnknownOpcode: return "UnknownOpcode";
    case Diagnostic::Kind::UndeclaredMode: return "UndeclaredMode";
    case Diagnostic::Kind::UseBeforeMeasure: return "UseBeforeMeasure";
    case Diagnostic::Kind::DeadModeUse: return "DeadModeUse";
    case Diagnostic::Kind::DuplicateMode: return "DuplicateMode";
    case Diagnostic::Kind::DuplicateRegister: return "DuplicateRegister";
    case Diagnostic::Kind::ArityMismatch: return "ArityMismatch";
    case Diagnostic::Kind::InvalidParameter: return "InvalidParameter";
  }
  return "?";
}

double AffineExpr::eval(const std::map<std::string, double>& registers) const {
  double v = constant;
  for (const auto& [coeff, name] : terms) {
    auto it = registers.find(name);
    if (it == registers.end()) {
      throw SimError("register '" + name + "' read before being measured");
    }
    v += coeff * it->second;
  }
  return v;
}

std::vector<std::string> CircuitProgram::mode_names() const {
  std::vector<std::string> names;
  for (const auto& ins : instructions) {
    if (ins.op == Opcode::DeclareMode) names.push_back(ins.modes.at(0));
  }
  return names;
}

int CircuitProgram::num_declared_modes() const {
  return static_cast<int>(mode_names().size());
}

bool CircuitProgram::has_opcode(Opcode op) const {
  return std::any_of(instructions.begin(), instructions.end(),
                     [op](const Instruction& i) { return i.op == op; });
}

namespace {

bool is_measurement(Opcode op) {
  return op == Opcode::Homodyne || op == Opcode::Heterodyne ||
         op == Opcode::VacProject || op == Opcode::PhotonCount;
}

struct Arity {
  int modes;
  int params;
};

Arity opcode_arity(Opcode op) {
  switch (op) {
    case Opcode::DeclareMode: return {1, 0};
    case Opcode::Displace: return {1, 2};
    case Opcode::Rotate: return {1, 1};
    case Opcode::Squeeze: return {1, 2};
    case Opcode::Tms: return {2, 1};
    case Opcode::Bs: return {2, 2};
    case Opcode::Loss: return {1, 1};
    case Opcode::Amplify: return {1, 1};
    case Opcode::Noise: return {1, 1};
    case Opcode::Channel: return {-1, 0};  // modes come from the payload
    case Opcode::Homodyne: return {1, 2};
    case Opcode::Heterodyne: return {1, 0};
    case Opcode::VacProject: return {1, 0};
    case Opcode::PhotonCount: return {1, 0};
    case Opcode::Kerr: return {1, 1};
  }
  return {0, 0};
}

}  // namespace

std::vector<Diagnostic> validate(const CircuitProgram& program) {
  std::vector<Diagnostic> diags;
  std::set<std::string> declared;
  std::set<std::string> alive;
  std::set<std::string> registers;  // readable register names
  std::set<std::string> claimed;    // measurement target names

  auto add = [&](Diagnostic::Kind kind, const std::string& msg, SourcePos pos) {
    diags.push_back({kind, msg, pos});
  };

  for (const auto& ins : program.instructions) {
    const Arity arity = opcode_arity(ins.op);
    if (arity.modes >= 0 && static_cast<int>(ins.modes.size()) != arity.modes) {
      add(Diagnostic::Kind::ArityMismatch,
          std::string(opcode_name(ins.op)) + " expects " +
              std::to_string(arity.modes) + " mode operand(s)",
          ins.pos);
      continue;
    }
    if (arity.modes >= 0 && static_cast<int>(ins.params.size()) != arity.params) {
      add(Diagnostic::Kind::ArityMismatch,
          std::string(opcode_name(ins.op)) + " expects " +
              std::to_string(arity.params) + " parameter(s)",
          ins.pos);
      continue;
    }

    if (ins.op == Opcode::DeclareMode) {
      const std::string& name = ins.modes[0];
      if (declared.count(name)) {
        add(Diagnostic::Kind::DuplicateMode, "mode '" + name + "' already declared",
            ins.pos);
      } else {
        declared.insert(name);
        alive.insert(name);
      }
      if (ins.init.kind == InitKind::Fock && ins.init.fock_n < 0) {
        add(Diagnostic::Kind::InvalidParameter, "fock photon number must be >= 0",
            ins.pos);
      }
      if (ins.init.kind == InitKind::Thermal && ins.init.a < 0.0) {
        add(Diagnostic::Kind::InvalidParameter, "thermal occupation must be >= 0",
            ins.pos);
      }
      continue;
    }

    if (ins.op == Opcode::Channel) {
      if (!ins.channel) {
        add(Diagnostic::Kind::InvalidParameter, "channel instruction lacks payload",
            ins.pos);
        continue;
      }
    }

    for (const std::string& m : ins.modes) {
      if (!declared.count(m)) {
        add(Diagnostic::Kind::UndeclaredMode, "mode '" + m + "' not declared",
            ins.pos);
      } else if (!alive.count(m)) {
        add(Diagnostic::Kind::DeadModeUse,
            "mode '" + m + "' already consumed by a measurement", ins.pos);
      }
    }
    if (ins.modes.size() == 2 && ins.modes[0] == ins.modes[1]) {
      add(Diagnostic::Kind::InvalidParameter,
          std::string(opcode_name(ins.op)) + " operands must be distinct modes",
          ins.pos);
    }

    for (const auto& expr : ins.params) {
      for (const auto& [coeff, reg] : expr.terms) {
        (void)coeff;
        if (!registers.count(reg)) {
          add(Diagnostic::Kind::UseBeforeMeasure,
              "register '" + reg + "' read before being measured", ins.pos);
        }
      }
    }

    if (ins.op == Opcode::Homodyne) {
      const AffineExpr& eff = ins.params[1];
      if (!eff.is_constant()) {
        add(Diagnostic::Kind::InvalidParameter,
            "homodyne efficiency must be a literal", ins.pos);
      } else if (!(eff.constant > 0.0 && eff.constant <= 1.0)) {
        add(Diagnostic::Kind::InvalidParameter,
            "homodyne efficiency must be in (0, 1]", ins.pos);
      }
    }

    if (is_measurement(ins.op)) {
      if (ins.target_register.empty()) {
        add(Diagnostic::Kind::InvalidParameter, "measurement needs a target register",
            ins.pos);
      } else if (claimed.count(ins.target_register)) {
        add(Diagnostic::Kind::DuplicateRegister,
            "register '" + ins.target_register + "' already assigned", ins.pos);
      } else {
        claimed.insert(ins.target_register);
        if (ins.op == Opcode::Heterodyne) {
          // A heterodyne target r binds two scalar registers r_x and r_p.
          registers.insert(ins.target_register + "_x");
          registers.insert(ins.target_register + "_p");
        } else {
          registers.insert(ins.target_register);
        }
      }
      if (!ins.modes.empty() && alive.count(ins.modes[0])) {
        alive.erase(ins.modes[0]);
      }
    }
  }
  return diags;
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Bare (unparenthesized) parameters must be a single tight term; anything
// with a top-level sum gets parentheses so statements stay whitespace-split.
std::string expr_to_param(const AffineExpr& e) {
  if (e.is_constant()) return format_number(e.constant);
  if (e.terms.size() == 1 && e.constant == 0.0) {
    const auto& [coeff, reg] = e.terms[0];
    if (coeff == 1.0) return reg;
    if (coeff == -1.0) return "-" + reg;
    return format_number(coeff) + "*" + reg;
  }
  return "(" + to_source(e) + ")";
}

}  // namespace

std::string to_source(const AffineExpr& e) {
  std::string out;
  bool first = true;
  for (const auto& [coeff, reg] : e.terms) {
    double c = coeff;
    if (first) {
      if (c < 0.0) {
        out += "-";
        c = -c;
      }
    } else {
      out += c < 0.0 ? " - " : " + ";
      c = std::abs(c);
    }
    if (c == 1.0) {
      out += reg;
    } else {
      out += format_number(c) + "*" + reg;
    }
    first = false;
  }
  if (e.constant != 0.0 || first) {
    if (first) {
      out += format_number(e.constant);
    } else {
      out += e.constant < 0.0 ? " - " : " + ";
      out += format_number(std::abs(e.constant));
    }
  }
  return out;
}

std::string to_source(const CircuitProgram& program) {
  std::string out;
  for (const auto& ins : program.instructions) {
    if (ins.op == Opcode::DeclareMode) {
      out += "mode " + ins.modes[0];
      switch (ins.init.kind) {
        case InitKind::Vacuum:
          break;
        case InitKind::Coherent:
          out += " init=coherent(" + format_number(ins.init.a) + "," +
                 format_number(ins.init.b) + ")";
          break;
        case InitKind::Squeezed:
          out += " init=squeezed(" + format_number(ins.init.a) + "," +
                 format_number(ins.init.b) + ")";
          break;
        case InitKind::Thermal:
          out += " init=thermal(" + format_number(ins.init.a) + ")";
          break;
        case InitKind::Fock:
          out += " init=fock(" + std::to_string(ins.init.fock_n) + ")";
          break;
      }
      out += ";\n";
      continue;
    }
    if (is_measurement(ins.op)) {
      out += ins.target_register + " = " + opcode_name(ins.op);
    } else {
      out += opcode_name(ins.op);
    }
    for (const auto& m : ins.modes) out += " " + m;
    for (const auto& p : ins.params) out += " " + expr_to_param(p);
    out += ";\n";
  }
  return out;
}

}  // namespace cvsim
