#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cvsim/symplectic.hpp"

namespace cvsim {

/// N-mode Gaussian state held as a mean vector and covariance matrix in
/// quadrature units (hbar = 2, vacuum covariance = identity, interleaved
/// ordering x1, p1, x2, p2, ...). Plain value type: copies are independent
/// states and safe to move across threads.
struct GaussianState {
  Eigen::VectorXd mean;  // length 2N
  Eigen::MatrixXd cov;   // 2N x 2N, symmetric

  GaussianState() = default;
  GaussianState(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in);

  static GaussianState vacuum(int num_modes);

  int num_modes() const { return static_cast<int>(mean.size()) / 2; }

  // In-place Gaussian unitaries. Free-function equivalents below return a
  // fresh state and leave the input untouched.
  void displace(int mode, double dx, double dp);
  void phase_rotate(int mode, double theta);
  void squeeze(int mode, double s, double phi);
  void two_mode_squeeze(int mode_a, int mode_b, double s);
  void beamsplitter(int mode_a, int mode_b, double theta, double phi);
  void apply_symplectic(const SymplecticMatrix& s);

  // Applies a 2M x 2M symplectic block to the listed modes, touching O(N)
  // covariance entries. Symmetry of the touched rows/columns is restored
  // afterwards to suppress round-off drift.
  void apply_block(const std::vector<int>& modes, const Eigen::MatrixXd& block);

  // Grows the state by fresh modes (appended at the end).
  void append_mode(const Eigen::Vector2d& mode_mean, const Eigen::Matrix2d& mode_cov);
  void append_vacuum(int count = 1);

  // Drops a mode (marginalizes it out).
  void remove_mode(int mode);

  // Marginal state of the listed modes, in the listed order.
  GaussianState reduced(const std::vector<int>& modes) const;

  // Invariant probes.
  double symmetry_defect() const;        // max |cov - cov^T|
  double min_uncertainty_eig() const;    // min eigenvalue of cov + i*Omega
  bool satisfies_uncertainty(double tol = kTauPsd) const;

  void check_mode(int mode) const;

  bool operator==(const GaussianState& other) const = default;
};

// Pure variants: each takes the state by value and returns the transformed copy.
GaussianState vacuum_state(int num_modes);
GaussianState displace(GaussianState state, int mode, double dx, double dp);
GaussianState phase_rotate(GaussianState state, int mode, double theta);
GaussianState squeeze(GaussianState state, int mode, double s, double phi);
GaussianState two_mode_squeeze(GaussianState state, int mode_a, int mode_b, double s);
GaussianState beamsplitter(GaussianState state, int mode_a, int mode_b,
                           double theta, double phi);
GaussianState apply_symplectic(GaussianState state, const SymplecticMatrix& s);

}  // namespace cvsim
