#pragma once

#include <vector>

#include <Eigen/Dense>

namespace cvsim {

// Numerical tolerances used throughout, sized for double precision and
// circuits of up to ~1e4 operations.
inline constexpr double kTauSym = 1e-10;  // symmetry / symplectic defect
inline constexpr double kTauPsd = 1e-8;   // uncertainty eigenvalue floor
inline constexpr double kTauNum = 1e-9;   // composition checks

// Quadrature ordering is interleaved: (x1, p1, x2, p2, ...).
// Units: hbar = 2, vacuum covariance = identity.

// Canonical symplectic form: block-diagonal copies of [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int num_modes);

// max-abs-entry norm of S*Omega*S^T - Omega.
double symplectic_defect(const Eigen::MatrixXd& entries);

bool is_symplectic(const Eigen::MatrixXd& entries, double tol = kTauSym);

// Rotation acting on (x, p) as x -> x cos(theta) + p sin(theta),
//                              p -> -x sin(theta) + p cos(theta).
Eigen::Matrix2d rotation_matrix(double theta);

// One-mode squeezer. phi = 0 shrinks the x variance: on vacuum the
// covariance becomes diag(exp(-2s), exp(2s)). For general phi the squeezed
// axis is (cos phi, sin phi) in the (x, p) plane.
Eigen::Matrix2d squeeze_matrix(double s, double phi);

// Two-mode squeezer; on two vacua yields cosh(2s) diagonal blocks and
// +-sinh(2s) cross blocks (x correlated, p anti-correlated).
Eigen::Matrix4d two_mode_squeeze_matrix(double s);

// Passive beamsplitter with transmissivity cos^2(theta); phi is the relative
// phase imprinted on the second input.
Eigen::Matrix4d beamsplitter_matrix(double theta, double phi);

// A symplectic matrix acting on an explicit list of modes; entries is
// 2M x 2M for M touched modes.
struct SymplecticMatrix {
  Eigen::MatrixXd entries;
  std::vector<int> modes;
};

}  // namespace cvsim
