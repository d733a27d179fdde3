#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace cvsim {

// Base for everything the simulator throws on purpose.
class SimError : public std::runtime_error {
 public:
  explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

class ModeIndexError : public SimError {
 public:
  ModeIndexError(int mode, int num_modes)
      : SimError("mode index " + std::to_string(mode) + " out of range for " +
                 std::to_string(num_modes) + "-mode state"),
        mode(mode),
        num_modes(num_modes) {}
  int mode;
  int num_modes;
};

class InvalidParameter : public SimError {
 public:
  explicit InvalidParameter(const std::string& msg) : SimError(msg) {}
};

// Raised when a matrix fails the symplectic condition S*Omega*S^T = Omega.
class NonSymplecticError : public SimError {
 public:
  explicit NonSymplecticError(double defect)
      : SimError("matrix is not symplectic (defect norm " +
                 std::to_string(defect) + ")"),
        defect(defect) {}
  double defect;
};

// Raised when a (X, Y) channel fails the complete-positivity test.
class CPViolation : public SimError {
 public:
  explicit CPViolation(double min_eigenvalue)
      : SimError("channel violates complete positivity (offending eigenvalue " +
                 std::to_string(min_eigenvalue) + ")"),
        min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

// The absorption branch of photodetection, and anything else that leaves the
// Gaussian toolkit at run time. Carries the rule citation and the probability
// of the branch that cannot be simulated.
class NonGaussianOutcome : public SimError {
 public:
  NonGaussianOutcome(const std::string& citation, double p_absorb)
      : SimError("non-Gaussian measurement branch cannot be simulated (" +
                 citation + "); branch probability " +
                 std::to_string(p_absorb)),
        citation(citation),
        p_absorb(p_absorb) {}
  explicit NonGaussianOutcome(const std::string& citation)
      : SimError("non-Gaussian measurement branch cannot be simulated (" +
                 citation + ")"),
        citation(citation),
        p_absorb(std::numeric_limits<double>::quiet_NaN()) {}
  std::string citation;
  double p_absorb;
};

// A program ingredient (Fock input, Kerr gate) the Gaussian engine cannot
// represent. Carries the classifier's rule citation.
class NonGaussianInput : public SimError {
 public:
  explicit NonGaussianInput(const std::string& what, const std::string& citation)
      : SimError(what + " (" + citation + ")"), citation(citation) {}
  std::string citation;
};

// Conditioning produced a branch probability below the underflow floor.
class DegenerateOutcome : public SimError {
 public:
  explicit DegenerateOutcome(double probability)
      : SimError("branch probability " + std::to_string(probability) +
                 " below underflow floor"),
        probability(probability) {}
  double probability;
};

class TruncationBudgetExceeded : public SimError {
 public:
  explicit TruncationBudgetExceeded(double leakage)
      : SimError("Fock truncation leakage " + std::to_string(leakage) +
                 " exceeds budget"),
        leakage(leakage) {}
  double leakage;
};

class ResourceLimitError : public SimError {
 public:
  explicit ResourceLimitError(const std::string& msg) : SimError(msg) {}
};

class ShapeMismatch : public SimError {
 public:
  explicit ShapeMismatch(const std::string& msg) : SimError(msg) {}
};

}  // namespace cvsim
