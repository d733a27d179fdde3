#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cvsim/circuit.hpp"

namespace cvsim {

struct ParseResult {
  std::optional<CircuitProgram> program;  // present when the syntax parsed
  std::vector<Diagnostic> diagnostics;    // syntax + validation findings

  bool ok() const { return program.has_value() && diagnostics.empty(); }
};

// Parses the line-oriented circuit DSL (.cvq): `#` comments, `;` terminated
// statements, affine parameter expressions over measurement registers, and
// `pi` arithmetic folded at parse time. The returned diagnostics carry
// 1-based line/column positions.
ParseResult parse(const std::string& source);

}  // namespace cvsim
