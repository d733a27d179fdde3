#include "cvsim/gaussian_state.hpp"

#include <cmath>
#include <complex>
#include <utility>

#include "cvsim/errors.hpp"

namespace cvsim {

GaussianState::GaussianState(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (cov.rows() != mean.size() || cov.cols() != mean.size() || mean.size() % 2 != 0) {
    throw ShapeMismatch("mean/cov dimensions inconsistent");
  }
}

GaussianState GaussianState::vacuum(int num_modes) {
  if (num_modes < 0) throw InvalidParameter("negative mode count");
  GaussianState st;
  st.mean = Eigen::VectorXd::Zero(2 * num_modes);
  st.cov = Eigen::MatrixXd::Identity(2 * num_modes, 2 * num_modes);
  return st;
}

void GaussianState::check_mode(int mode) const {
  if (mode < 0 || mode >= num_modes()) throw ModeIndexError(mode, num_modes());
}

void GaussianState::apply_block(const std::vector<int>& modes,
                                const Eigen::MatrixXd& block) {
  std::vector<int> q;
  q.reserve(2 * modes.size());
  for (int m : modes) {
    check_mode(m);
    q.push_back(2 * m);
    q.push_back(2 * m + 1);
  }
  mean(q) = (block * mean(q)).eval();
  cov(q, Eigen::all) = (block * cov(q, Eigen::all)).eval();
  cov(Eigen::all, q) = (cov(Eigen::all, q) * block.transpose()).eval();
  // Restore symmetry on the touched rows/columns only; a full-matrix pass
  // would cost O(N^2) per gate.
  const int n = static_cast<int>(mean.size());
  for (int i : q) {
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (cov(i, j) + cov(j, i));
      cov(i, j) = v;
      cov(j, i) = v;
    }
  }
}

void GaussianState::displace(int mode, double dx, double dp) {
  check_mode(mode);
  if (!std::isfinite(dx) || !std::isfinite(dp)) {
    throw InvalidParameter("non-finite displacement");
  }
  mean(2 * mode) += dx;
  mean(2 * mode + 1) += dp;
}

void GaussianState::phase_rotate(int mode, double theta) {
  check_mode(mode);
  if (!std::isfinite(theta)) throw InvalidParameter("non-finite rotation angle");
  apply_block({mode}, rotation_matrix(theta));
}

void GaussianState::squeeze(int mode, double s, double phi) {
  check_mode(mode);
  if (!std::isfinite(s) || !std::isfinite(phi)) {
    throw InvalidParameter("non-finite squeeze parameter");
  }
  apply_block({mode}, squeeze_matrix(s, phi));
}

void GaussianState::two_mode_squeeze(int mode_a, int mode_b, double s) {
  check_mode(mode_a);
  check_mode(mode_b);
  if (mode_a == mode_b) throw InvalidParameter("two-mode squeeze needs distinct modes");
  if (!std::isfinite(s)) throw InvalidParameter("non-finite squeeze parameter");
  apply_block({mode_a, mode_b}, two_mode_squeeze_matrix(s));
}

void GaussianState::beamsplitter(int mode_a, int mode_b, double theta, double phi) {
  check_mode(mode_a);
  check_mode(mode_b);
  if (mode_a == mode_b) throw InvalidParameter("beamsplitter needs distinct modes");
  if (!std::isfinite(theta) || !std::isfinite(phi)) {
    throw InvalidParameter("non-finite beamsplitter angle");
  }
  apply_block({mode_a, mode_b}, beamsplitter_matrix(theta, phi));
}

void GaussianState::apply_symplectic(const SymplecticMatrix& s) {
  if (s.entries.rows() != s.entries.cols() ||
      s.entries.rows() != 2 * static_cast<long>(s.modes.size())) {
    throw ShapeMismatch("symplectic matrix size does not match touched modes");
  }
  const double defect = symplectic_defect(s.entries);
  if (defect > kTauSym) throw NonSymplecticError(defect);
  apply_block(s.modes, s.entries);
}

void GaussianState::append_mode(const Eigen::Vector2d& mode_mean,
                                const Eigen::Matrix2d& mode_cov) {
  const int n = static_cast<int>(mean.size());
  Eigen::VectorXd new_mean(n + 2);
  new_mean.head(n) = mean;
  new_mean.tail(2) = mode_mean;
  Eigen::MatrixXd new_cov = Eigen::MatrixXd::Zero(n + 2, n + 2);
  new_cov.topLeftCorner(n, n) = cov;
  new_cov.bottomRightCorner(2, 2) = mode_cov;
  mean = std::move(new_mean);
  cov = std::move(new_cov);
}

void GaussianState::append_vacuum(int count) {
  for (int i = 0; i < count; ++i) {
    append_mode(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity());
  }
}

void GaussianState::remove_mode(int mode) {
  check_mode(mode);
  std::vector<int> keep;
  keep.reserve(mean.size() - 2);
  for (int i = 0; i < static_cast<int>(mean.size()); ++i) {
    if (i != 2 * mode && i != 2 * mode + 1) keep.push_back(i);
  }
  mean = mean(keep).eval();
  cov = cov(keep, keep).eval();
}

GaussianState GaussianState::reduced(const std::vector<int>& modes) const {
  std::vector<int> q;
  q.reserve(2 * modes.size());
  for (int m : modes) {
    check_mode(m);
    q.push_back(2 * m);
    q.push_back(2 * m + 1);
  }
  GaussianState out;
  out.mean = mean(q).eval();
  out.cov = cov(q, q).eval();
  return out;
}

double GaussianState::symmetry_defect() const {
  if (mean.size() == 0) return 0.0;
  return (cov - cov.transpose()).cwiseAbs().maxCoeff();
}

double GaussianState::min_uncertainty_eig() const {
  if (mean.size() == 0) return 0.0;
  Eigen::MatrixXcd h = cov.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * symplectic_form(num_modes());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool GaussianState::satisfies_uncertainty(double tol) const {
  return min_uncertainty_eig() >= -tol;
}

GaussianState vacuum_state(int num_modes) { return GaussianState::vacuum(num_modes); }

GaussianState displace(GaussianState state, int mode, double dx, double dp) {
  state.displace(mode, dx, dp);
  return state;
}

GaussianState phase_rotate(GaussianState state, int mode, double theta) {
  state.phase_rotate(mode, theta);
  return state;
}

GaussianState squeeze(GaussianState state, int mode, double s, double phi) {
  state.squeeze(mode, s, phi);
  return state;
}

GaussianState two_mode_squeeze(GaussianState state, int mode_a, int mode_b, double s) {
  state.two_mode_squeeze(mode_a, mode_b, s);
  return state;
}

GaussianState beamsplitter(GaussianState state, int mode_a, int mode_b,
                           double theta, double phi) {
  state.beamsplitter(mode_a, mode_b, theta, phi);
  return state;
}

GaussianState apply_symplectic(GaussianState state, const SymplecticMatrix& s) {
  state.apply_symplectic(s);
  return state;
}

}  // namespace cvsim
