#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cvsim/gaussian_state.hpp"

namespace cvsim {

/// Gaussian CP map on M target modes: cov -> X cov X^T + Y on the touched
/// block (cross-covariances pick up X on the touched side), mean -> X mean
/// plus an optional displacement. Admissible iff Y is symmetric and
/// Y + i(Omega - X Omega X^T) is positive semidefinite.
struct GaussianChannel {
  Eigen::MatrixXd x;  // 2M x 2M
  Eigen::MatrixXd y;  // 2M x 2M, symmetric
  std::vector<int> modes;
  std::optional<Eigen::VectorXd> displacement;

  static GaussianChannel identity(std::vector<int> modes);
  static GaussianChannel loss(int mode, double eta);
  static GaussianChannel amplifier(int mode, double gain);
  static GaussianChannel added_noise(int mode, double n);

  // min eigenvalue of Y + i(Omega - X Omega X^T); admissible iff >= -kTauPsd.
  double cp_eigenvalue_floor() const;
  void validate() const;  // throws CPViolation / ShapeMismatch
};

// Semigroup composition: applying `first` then `second` equals applying the
// returned channel once. Both channels must target the same mode list.
GaussianChannel compose(const GaussianChannel& first, const GaussianChannel& second);

// In-place application; validates the channel and the mode list.
void apply_channel_inplace(GaussianState& state, const GaussianChannel& ch);

// Pure variants.
GaussianState apply_channel(GaussianState state, const GaussianChannel& ch);
GaussianState loss(GaussianState state, int mode, double eta);
GaussianState amplify(GaussianState state, int mode, double gain);
GaussianState add_noise(GaussianState state, int mode, double n);

void loss_inplace(GaussianState& state, int mode, double eta);
void amplify_inplace(GaussianState& state, int mode, double gain);
void add_noise_inplace(GaussianState& state, int mode, double n);

}  // namespace cvsim
