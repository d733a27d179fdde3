#include "cvsim/measurements.hpp"

#include <cmath>
#include <vector>

#include "cvsim/channels.hpp"
#include "cvsim/errors.hpp"

namespace cvsim {

namespace {

constexpr double kPinvCutoff = 1e-12;
constexpr double kProbFloor = 1e-300;

// Conditions every other variable on quadrature index `qi` taking value
// `outcome`, then drops the owning mode. Column-major single pass into a
// fresh state; the mirror copy at the end keeps the hot loop contiguous.
GaussianState condition_on_quadrature(const GaussianState& state, int mode,
                                      int qi, double outcome) {
  const int n = static_cast<int>(state.mean.size());
  const double var = state.cov(qi, qi);
  const double w = var > kPinvCutoff ? 1.0 / var : 0.0;
  const double shift = w * (outcome - state.mean(qi));

  const int m = n - 2;
  const int cut = 2 * mode;  // removed rows cut, cut + 1

  Eigen::VectorXd sigma(m);
  sigma.head(cut) = state.cov.col(qi).head(cut);
  sigma.tail(m - cut) = state.cov.col(qi).tail(m - cut);

  GaussianState out;
  out.mean.resize(m);
  out.mean.head(cut) = state.mean.head(cut) + shift * sigma.head(cut);
  out.mean.tail(m - cut) = state.mean.tail(m - cut) + shift * sigma.tail(m - cut);
  out.cov.resize(m, m);
  for (int b = 0; b < m; ++b) {
    const int j = b < cut ? b : b + 2;
    const double sw = sigma(b) * w;
    const double* col = state.cov.col(j).data();
    double* out_col = out.cov.col(b).data();
    const double* sig = sigma.data();
    for (int a = 0; a < cut; ++a) out_col[a] = col[a] - sig[a] * sw;
    for (int a = cut; a < m; ++a) out_col[a] = col[a + 2] - sig[a] * sw;
  }
  return out;
}

// Conditions the rest of the state on the mode's (x, p) pair measured with a
// smoothing covariance (vacuum unit for heterodyne / vacuum projection), then
// drops the mode.
GaussianState condition_on_pair(const GaussianState& state, int mode,
                                const Eigen::Vector2d& outcome,
                                const Eigen::Matrix2d& smoothing) {
  const int n = static_cast<int>(state.mean.size());
  const int qx = 2 * mode, qp = 2 * mode + 1;
  Eigen::Matrix2d smoothed = state.cov.block<2, 2>(qx, qx) + smoothing;
  Eigen::Matrix2d w = smoothed.inverse();
  Eigen::Vector2d delta = outcome - state.mean.segment<2>(qx);

  const int m = n - 2;
  const int cut = qx;  // removed rows qx, qp

  Eigen::MatrixXd c(m, 2);  // cross-covariances with the measured pair
  c.col(0).head(cut) = state.cov.col(qx).head(cut);
  c.col(0).tail(m - cut) = state.cov.col(qx).tail(m - cut);
  c.col(1).head(cut) = state.cov.col(qp).head(cut);
  c.col(1).tail(m - cut) = state.cov.col(qp).tail(m - cut);
  Eigen::MatrixXd cw = c * w;

  GaussianState out;
  out.mean.resize(m);
  out.mean.head(cut) = state.mean.head(cut);
  out.mean.tail(m - cut) = state.mean.tail(m - cut);
  out.mean += cw * delta;
  out.cov.resize(m, m);
  for (int b = 0; b < m; ++b) {
    const int j = b < cut ? b : b + 2;
    const double c0 = c(b, 0), c1 = c(b, 1);
    const double* col = state.cov.col(j).data();
    const double* cw0 = cw.col(0).data();
    const double* cw1 = cw.col(1).data();
    double* out_col = out.cov.col(b).data();
    for (int a = 0; a < cut; ++a) out_col[a] = col[a] - (cw0[a] * c0 + cw1[a] * c1);
    for (int a = cut; a < m; ++a) {
      out_col[a] = col[a + 2] - (cw0[a] * c0 + cw1[a] * c1);
    }
  }
  return out;
}

void check_efficiency(double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw InvalidParameter("measurement efficiency must be in (0, 1]");
  }
}

}  // namespace

MeasurementResult homodyne(GaussianState state, int mode, double angle,
                           double efficiency, NormalSource& rng) {
  state.check_mode(mode);
  check_efficiency(efficiency);
  if (efficiency < 1.0) loss_inplace(state, mode, efficiency);
  state.phase_rotate(mode, -angle);
  const int qi = 2 * mode;
  const double mu = state.mean(qi);
  const double var = std::max(state.cov(qi, qi), 0.0);
  const double outcome = mu + std::sqrt(var) * rng.next_normal();
  MeasurementResult res;
  res.outcome.kind = OutcomeKind::Homodyne;
  res.outcome.mode = mode;
  res.outcome.value = outcome;
  res.outcome.angle = angle;
  res.outcome.efficiency = efficiency;
  res.state = condition_on_quadrature(state, mode, qi, outcome);
  return res;
}

GaussianState homodyne_conditioned(GaussianState state, int mode, double angle,
                                   double efficiency, double outcome) {
  state.check_mode(mode);
  check_efficiency(efficiency);
  if (efficiency < 1.0) loss_inplace(state, mode, efficiency);
  state.phase_rotate(mode, -angle);
  return condition_on_quadrature(state, mode, 2 * mode, outcome);
}

MeasurementResult heterodyne(GaussianState state, int mode, NormalSource& rng) {
  state.check_mode(mode);
  const int qx = 2 * mode;
  Eigen::Matrix2d m =
      state.cov.block<2, 2>(qx, qx) + Eigen::Matrix2d::Identity();
  Eigen::LLT<Eigen::Matrix2d> llt(m);
  Eigen::Vector2d z(rng.next_normal(), rng.next_normal());
  Eigen::Vector2d outcome = state.mean.segment<2>(qx) + llt.matrixL() * z;
  MeasurementResult res;
  res.outcome.kind = OutcomeKind::Heterodyne;
  res.outcome.mode = mode;
  res.outcome.value = outcome(0);
  res.outcome.value_p = outcome(1);
  res.state = condition_on_pair(state, mode, outcome, Eigen::Matrix2d::Identity());
  return res;
}

GaussianState heterodyne_conditioned(GaussianState state, int mode,
                                     double outcome_x, double outcome_p) {
  state.check_mode(mode);
  return condition_on_pair(state, mode, {outcome_x, outcome_p},
                           Eigen::Matrix2d::Identity());
}

double vacuum_projection_prob(const GaussianState& state, int mode) {
  state.check_mode(mode);
  const int qx = 2 * mode;
  Eigen::Matrix2d m =
      state.cov.block<2, 2>(qx, qx) + Eigen::Matrix2d::Identity();
  const double det = m.determinant();
  Eigen::Vector2d r = state.mean.segment<2>(qx);
  const double quad = r.dot(m.inverse() * r);
  const double p = 2.0 / std::sqrt(det) * std::exp(-0.5 * quad);
  return std::min(p, 1.0);
}

std::pair<double, GaussianState> condition_on_no_absorption(GaussianState state,
                                                            int mode) {
  state.check_mode(mode);
  const double p = vacuum_projection_prob(state, mode);
  if (p < kProbFloor) throw DegenerateOutcome(p);
  GaussianState post = condition_on_pair(state, mode, Eigen::Vector2d::Zero(),
                                         Eigen::Matrix2d::Identity());
  return {p, std::move(post)};
}

void condition_on_absorption(const GaussianState& state, int mode) {
  state.check_mode(mode);
  const double p_absorb = 1.0 - vacuum_projection_prob(state, mode);
  throw NonGaussianOutcome("Corollary 2", p_absorb);
}

}  // namespace cvsim
