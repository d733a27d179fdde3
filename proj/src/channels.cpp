#include "cvsim/channels.hpp"

#include <cmath>
#include <complex>
#include <set>

#include "cvsim/errors.hpp"

namespace cvsim {

GaussianChannel GaussianChannel::identity(std::vector<int> modes) {
  const int n = 2 * static_cast<int>(modes.size());
  return {Eigen::MatrixXd::Identity(n, n), Eigen::MatrixXd::Zero(n, n),
          std::move(modes), std::nullopt};
}

GaussianChannel GaussianChannel::loss(int mode, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidParameter("loss transmissivity must be in [0, 1]");
  }
  return {std::sqrt(eta) * Eigen::Matrix2d::Identity(),
          (1.0 - eta) * Eigen::Matrix2d::Identity(),
          {mode},
          std::nullopt};
}

GaussianChannel GaussianChannel::amplifier(int mode, double gain) {
  if (!(gain >= 1.0)) throw InvalidParameter("amplifier gain must be >= 1");
  return {std::sqrt(gain) * Eigen::Matrix2d::Identity(),
          (gain - 1.0) * Eigen::Matrix2d::Identity(),
          {mode},
          std::nullopt};
}

GaussianChannel GaussianChannel::added_noise(int mode, double n) {
  if (!(n >= 0.0)) throw InvalidParameter("noise variance must be >= 0");
  return {Eigen::Matrix2d::Identity(), n * Eigen::Matrix2d::Identity(),
          {mode}, std::nullopt};
}

double GaussianChannel::cp_eigenvalue_floor() const {
  const int m = static_cast<int>(modes.size());
  const Eigen::MatrixXd omega = symplectic_form(m);
  Eigen::MatrixXcd h = y.cast<std::complex<double>>();
  h += std::complex<double>(0.0, 1.0) * (omega - x * omega * x.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void GaussianChannel::validate() const {
  const long n = 2 * static_cast<long>(modes.size());
  if (x.rows() != n || x.cols() != n || y.rows() != n || y.cols() != n) {
    throw ShapeMismatch("channel matrices must be 2M x 2M for M target modes");
  }
  if (displacement && displacement->size() != n) {
    throw ShapeMismatch("channel displacement must have length 2M");
  }
  if ((y - y.transpose()).cwiseAbs().maxCoeff() > kTauSym) {
    throw ShapeMismatch("channel noise matrix Y is not symmetric");
  }
  const double floor = cp_eigenvalue_floor();
  if (floor < -kTauPsd) throw CPViolation(floor);
}

GaussianChannel compose(const GaussianChannel& first, const GaussianChannel& second) {
  if (first.modes != second.modes) {
    throw ShapeMismatch("composed channels must target the same modes");
  }
  GaussianChannel out;
  out.modes = first.modes;
  out.x = second.x * first.x;
  out.y = second.x * first.y * second.x.transpose() + second.y;
  if (first.displacement || second.displacement) {
    const long n = out.x.rows();
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    if (first.displacement) d = second.x * (*first.displacement);
    if (second.displacement) d += *second.displacement;
    out.displacement = d;
  }
  return out;
}

void apply_channel_inplace(GaussianState& state, const GaussianChannel& ch) {
  ch.validate();
  std::set<int> distinct(ch.modes.begin(), ch.modes.end());
  if (distinct.size() != ch.modes.size()) {
    throw InvalidParameter("channel target modes must be distinct");
  }
  std::vector<int> q;
  q.reserve(2 * ch.modes.size());
  for (int m : ch.modes) {
    state.check_mode(m);
    q.push_back(2 * m);
    q.push_back(2 * m + 1);
  }
  state.mean(q) = (ch.x * state.mean(q)).eval();
  if (ch.displacement) state.mean(q) += *ch.displacement;
  state.cov(q, Eigen::all) = (ch.x * state.cov(q, Eigen::all)).eval();
  state.cov(Eigen::all, q) = (state.cov(Eigen::all, q) * ch.x.transpose()).eval();
  state.cov(q, q) = (state.cov(q, q) + ch.y).eval();
  const int n = static_cast<int>(state.mean.size());
  for (int i : q) {
    for (int j = 0; j < n; ++j) {
      const double v = 0.5 * (state.cov(i, j) + state.cov(j, i));
      state.cov(i, j) = v;
      state.cov(j, i) = v;
    }
  }
}

void loss_inplace(GaussianState& state, int mode, double eta) {
  apply_channel_inplace(state, GaussianChannel::loss(mode, eta));
}

void amplify_inplace(GaussianState& state, int mode, double gain) {
  apply_channel_inplace(state, GaussianChannel::amplifier(mode, gain));
}

void add_noise_inplace(GaussianState& state, int mode, double n) {
  apply_channel_inplace(state, GaussianChannel::added_noise(mode, n));
}

GaussianState apply_channel(GaussianState state, const GaussianChannel& ch) {
  apply_channel_inplace(state, ch);
  return state;
}

GaussianState loss(GaussianState state, int mode, double eta) {
  loss_inplace(state, mode, eta);
  return state;
}

GaussianState amplify(GaussianState state, int mode, double gain) {
  amplify_inplace(state, mode, gain);
  return state;
}

GaussianState add_noise(GaussianState state, int mode, double n) {
  add_noise_inplace(state, mode, n);
  return state;
}

}  // namespace cvsim
