#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cvsim/channels.hpp"

namespace cvsim {

enum class Opcode {
  DeclareMode,
  Displace,
  Rotate,
  Squeeze,
  Tms,
  Bs,
  Loss,
  Amplify,
  Noise,
  Channel,
  Homodyne,
  Heterodyne,
  VacProject,
  PhotonCount,
  Kerr,
};

const char* opcode_name(Opcode op);

enum class InitKind { Vacuum, Coherent, Squeezed, Thermal, Fock };

struct InitState {
  InitKind kind = InitKind::Vacuum;
  double a = 0.0;  // coherent x / squeezed s / thermal n
  double b = 0.0;  // coherent p / squeezed phi
  int fock_n = 0;

  bool operator==(const InitState&) const = default;
};

/// Affine combination of measurement registers: constant + sum(coeff * reg).
/// Evaluation is a pure affine map from outcome values to a real parameter.
struct AffineExpr {
  double constant = 0.0;
  std::vector<std::pair<double, std::string>> terms;

  static AffineExpr literal(double v) { return {v, {}}; }
  static AffineExpr reg(std::string name, double coeff = 1.0) {
    return {0.0, {{coeff, std::move(name)}}};
  }

  bool is_constant() const { return terms.empty(); }
  double eval(const std::map<std::string, double>& registers) const;

  bool operator==(const AffineExpr&) const = default;
};

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Instruction {
  Opcode op = Opcode::DeclareMode;
  std::vector<std::string> modes;   // operand mode names
  std::vector<AffineExpr> params;   // opcode-specific parameters
  std::string target_register;      // measurements only
  InitState init;                   // DeclareMode only
  std::optional<GaussianChannel> channel;  // Channel only (no DSL form)
  SourcePos pos;

  bool operator==(const Instruction& other) const {
    return op == other.op && modes == other.modes && params == other.params &&
           target_register == other.target_register && init == other.init;
  }
};

struct Diagnostic {
  enum class Kind {
    SyntaxError,
    UnknownOpcode,
    UndeclaredMode,
    UseBeforeMeasure,
    DeadModeUse,
    DuplicateMode,
    DuplicateRegister,
    ArityMismatch,
    InvalidParameter,
  };
  Kind kind;
  std::string message;
  SourcePos pos;
};

const char* diagnostic_kind_name(Diagnostic::Kind kind);

/// Parsed circuit: mode declarations are instructions too, so a measurement
/// may be followed by a fresh `mode` declaration that appends a new mode.
struct CircuitProgram {
  std::vector<Instruction> instructions;

  std::vector<std::string> mode_names() const;  // in declaration order
  int num_declared_modes() const;
  bool has_opcode(Opcode op) const;

  bool operator==(const CircuitProgram& other) const {
    return instructions == other.instructions;
  }
};

// Empty iff every program invariant holds: modes declared before use and
// still alive, register reads preceded by the measurement that writes them,
// registers unique, arities and parameter ranges respected.
std::vector<Diagnostic> validate(const CircuitProgram& program);

// Canonical source text; parsing it back yields an identical program.
std::string to_source(const CircuitProgram& program);

std::string to_source(const AffineExpr& expr);

}  // namespace cvsim
