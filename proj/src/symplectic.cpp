#include "cvsim/symplectic.hpp"

#include <cmath>

namespace cvsim {

Eigen::MatrixXd symplectic_form(int num_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * num_modes, 2 * num_modes);
  for (int k = 0; k < num_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double symplectic_defect(const Eigen::MatrixXd& entries) {
  const int n = static_cast<int>(entries.rows()) / 2;
  Eigen::MatrixXd omega = symplectic_form(n);
  return (entries * omega * entries.transpose() - omega).cwiseAbs().maxCoeff();
}

bool is_symplectic(const Eigen::MatrixXd& entries, double tol) {
  if (entries.rows() != entries.cols() || entries.rows() % 2 != 0) return false;
  return symplectic_defect(entries) <= tol;
}

Eigen::Matrix2d rotation_matrix(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, s, -s, c;
  return r;
}

Eigen::Matrix2d squeeze_matrix(double s, double phi) {
  Eigen::Matrix2d d;
  d << std::exp(-s), 0.0, 0.0, std::exp(s);
  return rotation_matrix(-phi) * d * rotation_matrix(phi);
}

Eigen::Matrix4d two_mode_squeeze_matrix(double s) {
  const double ch = std::cosh(s), sh = std::sinh(s);
  Eigen::Matrix4d m;
  m << ch, 0, sh, 0,
       0, ch, 0, -sh,
       sh, 0, ch, 0,
       0, -sh, 0, ch;
  return m;
}

Eigen::Matrix4d beamsplitter_matrix(double theta, double phi) {
  const double c = std::cos(theta), s = std::sin(theta);
  const double cf = std::cos(phi), sf = std::sin(phi);
  Eigen::Matrix4d m;
  m << c, 0, s * cf, -s * sf,
       0, c, s * sf, s * cf,
       -s * cf, -s * sf, c, 0,
       s * sf, -s * cf, 0, c;
  return m;
}

}  // namespace cvsim
