#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cvsim/circuit.hpp"
#include "cvsim/gaussian_state.hpp"
#include "cvsim/random_stream.hpp"

namespace cvsim {

/// Desk-scale truncated number-basis state. Channels are realized by unitary
/// dilations, so the amplitude tensor may carry ancilla slots beyond the
/// program's modes; `visible` maps each surviving program mode (declaration
/// order) to its tensor slot. Slot 0 is the slowest-varying index.
struct FockState {
  int cutoff = 0;
  int num_slots = 0;
  std::vector<int> visible;
  Eigen::VectorXcd amplitudes;
  double leakage = 0.0;  // accumulated truncation-mass estimate

  int num_visible() const { return static_cast<int>(visible.size()); }
  double norm2() const { return amplitudes.squaredNorm(); }
};

struct OracleOptions {
  int cutoff = 30;
  double leakage_budget = 1e-6;
  long max_amplitudes = 1L << 24;
};

struct OracleRun {
  FockState state;
  std::vector<std::pair<std::string, double>> outcomes;
};

/// Executes a validated program (at most 3 declared modes, cutoff <= 64) in
/// the truncated basis, including the ingredients the Gaussian engine
/// refuses: Kerr gates (phase exp(i k n(n-1))), Fock inputs, photon counting.
/// Gaussian gates are matrix exponentials of their quadratic generators in
/// the truncated basis. When `forced` maps a register name to a value, the
/// corresponding measurement conditions on that value instead of sampling;
/// heterodyne registers appear as <reg>_x / <reg>_p.
OracleRun oracle_execute(const CircuitProgram& program, const OracleOptions& options,
                         RandomStream& rng,
                         const std::map<std::string, double>* forced = nullptr);

// Quadrature means and symmetrized covariances of the visible modes, in the
// same units and ordering as GaussianState.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> moments(const FockState& state);

// Marginal probability of zero photons in the given visible mode.
double vacuum_prob(const FockState& state, int mode);

// Expectation of x^4 about the mean for one visible mode, minus the Gaussian
// value 3 Var(x)^2: a non-Gaussianity witness.
double fourth_cumulant_x(const FockState& state, int mode);

struct CompareReport {
  double max_mean_dev = 0.0;
  double max_cov_dev = 0.0;
  double leakage = 0.0;
  double tol_mean = 0.0;
  double tol_cov = 0.0;
  bool pass = false;
};

// Maximum deviation of means and covariances between the two engines; passes
// when means are within tol and covariances within 10*tol.
CompareReport compare(const GaussianState& gauss, const FockState& fock, double tol);

// Normalized position-basis eigenfunction values phi_n(x), n = 0..count-1,
// in the hbar = 2 units used throughout (vacuum |phi_0|^2 = N(0, 1)).
Eigen::VectorXd quadrature_wavefunctions(int count, double x);

}  // namespace cvsim
