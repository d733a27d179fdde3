#include <doctest.h>

#include <cmath>

#include "cvsim/errors.hpp"
#include "cvsim/gaussian_state.hpp"
#include "test_util.hpp"

using namespace cvsim;

namespace {
double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}
}  // namespace

TEST_SUITE("gaussian-core") {

TEST_CASE("vacuum state") {
  auto st = vacuum_state(1);
  CHECK(st.num_modes() == 1);
  CHECK(st.mean.isZero(0.0));
  CHECK(st.cov.isIdentity(0.0));

  auto empty = vacuum_state(0);
  CHECK(empty.num_modes() == 0);
  CHECK(empty.mean.size() == 0);

  auto three = vacuum_state(3);
  CHECK(three.mean.size() == 6);
  CHECK(three.cov.isIdentity(0.0));

  CHECK_THROWS_AS(vacuum_state(-1), InvalidParameter);
}

TEST_CASE("displacement") {
  auto st = vacuum_state(1);
  auto same = displace(st, 0, 0.0, 0.0);
  CHECK(same == st);

  auto moved = displace(st, 0, 2.0, -1.0);
  CHECK(moved.mean(0) == 2.0);
  CHECK(moved.mean(1) == -1.0);
  CHECK(moved.cov.isIdentity(0.0));

  auto back = displace(moved, 0, -2.0, 1.0);
  CHECK(back == st);

  CHECK_THROWS_AS(displace(st, 1, 0.1, 0.1), ModeIndexError);
}

TEST_CASE("phase rotation") {
  RandomStream rng(11);
  auto st = test::random_state(rng, 2, 6);
  auto same = phase_rotate(st, 0, 0.0);
  CHECK(same == st);

  auto full_turn = phase_rotate(st, 1, 2.0 * M_PI);
  CHECK(max_abs(full_turn.cov - st.cov) < 1e-10);
  CHECK((full_turn.mean - st.mean).cwiseAbs().maxCoeff() < 1e-10);

  // Quarter turn swaps the variances of an x-squeezed vacuum.
  auto sq = squeeze(vacuum_state(1), 0, 0.5, 0.0);
  auto rot = phase_rotate(sq, 0, M_PI / 2.0);
  CHECK(rot.cov(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(rot.cov(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

  CHECK_THROWS_AS(phase_rotate(st, 7, 0.3), ModeIndexError);
}

TEST_CASE("single-mode squeezing") {
  auto st = vacuum_state(1);
  CHECK(squeeze(st, 0, 0.0, 0.0) == st);

  auto sq = squeeze(st, 0, 0.5, 0.0);
  CHECK(sq.cov(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(sq.cov(1, 1) == doctest::Approx(std::exp(1.0)).epsilon(1e-14));
  CHECK(sq.cov(0, 1) == doctest::Approx(0.0));

  // Mean photon number of squeezed vacuum: (tr cov - 2) / 4 = sinh(s)^2.
  auto sq4 = squeeze(st, 0, 0.4, 0.0);
  const double n_mean = (sq4.cov.trace() - 2.0) / 4.0;
  CHECK(n_mean == doctest::Approx(std::sinh(0.4) * std::sinh(0.4)).epsilon(1e-12));

  CHECK_THROWS_AS(squeeze(st, 0, std::nan(""), 0.0), InvalidParameter);
  CHECK_THROWS_AS(squeeze(st, 3, 0.1, 0.0), ModeIndexError);
}

TEST_CASE("two-mode squeezing") {
  auto st = vacuum_state(2);
  CHECK(two_mode_squeeze(st, 0, 1, 0.0) == st);

  auto tms = two_mode_squeeze(st, 0, 1, 0.3);
  const double ch = std::cosh(0.6), sh = std::sinh(0.6);
  CHECK(tms.cov(0, 0) == doctest::Approx(ch).epsilon(1e-14));
  CHECK(tms.cov(1, 1) == doctest::Approx(ch).epsilon(1e-14));
  CHECK(tms.cov(0, 2) == doctest::Approx(sh).epsilon(1e-14));
  CHECK(tms.cov(1, 3) == doctest::Approx(-sh).epsilon(1e-14));
  CHECK(tms.satisfies_uncertainty());

  CHECK_THROWS_AS(two_mode_squeeze(st, 1, 1, 0.3), InvalidParameter);
  CHECK_THROWS_AS(two_mode_squeeze(st, 0, 2, 0.3), ModeIndexError);
}

TEST_CASE("beamsplitter") {
  auto st = vacuum_state(2);
  CHECK(beamsplitter(st, 0, 1, 0.0, 0.0) == st);

  // Vacuum is invariant under any passive coupler.
  auto mixed = beamsplitter(st, 0, 1, 0.7, 1.3);
  CHECK(max_abs(mixed.cov - Eigen::MatrixXd::Identity(4, 4)) < 1e-14);

  // Oppositely squeezed vacua through a 50:50 splitter reproduce the
  // two-mode squeezed covariance.
  const double s = 0.35;
  auto opp = squeeze(squeeze(st, 0, s, 0.0), 1, -s, 0.0);
  auto split = beamsplitter(opp, 0, 1, M_PI / 4.0, 0.0);
  auto tms = two_mode_squeeze(st, 0, 1, s);
  CHECK(max_abs(split.cov - tms.cov) < 1e-12);
}

TEST_CASE("apply_symplectic") {
  RandomStream rng(3);
  auto st = test::random_state(rng, 2, 6);

  SymplecticMatrix ident{Eigen::MatrixXd::Identity(4, 4), {0, 1}};
  CHECK(apply_symplectic(st, ident) == st);

  SymplecticMatrix rot{rotation_matrix(0.77), {1}};
  CHECK(apply_symplectic(st, rot) == phase_rotate(st, 1, 0.77));

  SymplecticMatrix bad{2.0 * Eigen::MatrixXd::Identity(2, 2), {0}};
  CHECK_THROWS_AS(apply_symplectic(st, bad), NonSymplecticError);
  try {
    apply_symplectic(st, bad);
  } catch (const NonSymplecticError& e) {
    CHECK(e.defect == doctest::Approx(3.0));
  }

  SymplecticMatrix misshaped{Eigen::MatrixXd::Identity(4, 4), {0}};
  CHECK_THROWS_AS(apply_symplectic(st, misshaped), ShapeMismatch);
}

TEST_CASE("gate matrices are symplectic") {
  RandomStream rng(17);
  for (int i = 0; i < 50; ++i) {
    CHECK(is_symplectic(rotation_matrix(test::uniform(rng, -4, 4))));
    CHECK(is_symplectic(
        squeeze_matrix(test::uniform(rng, -1, 1), test::uniform(rng, -4, 4))));
    CHECK(is_symplectic(two_mode_squeeze_matrix(test::uniform(rng, -1, 1))));
    CHECK(is_symplectic(
        beamsplitter_matrix(test::uniform(rng, -4, 4), test::uniform(rng, -4, 4))));
  }
}

TEST_CASE("composition of symplectics") {
  RandomStream rng(29);
  for (int i = 0; i < 20; ++i) {
    auto s1 = test::random_symplectic(rng, 3);
    auto s2 = test::random_symplectic(rng, 3);
    auto st = test::random_state(rng, 3, 6);

    std::vector<int> all = {0, 1, 2};
    auto two_steps = apply_symplectic(apply_symplectic(st, {s1, all}), {s2, all});
    auto one_step = apply_symplectic(st, {Eigen::MatrixXd(s2 * s1), all});
    CHECK(max_abs(two_steps.cov - one_step.cov) < kTauNum);
    CHECK((two_steps.mean - one_step.mean).cwiseAbs().maxCoeff() < kTauNum);
  }
}

TEST_CASE("unitary circuits keep purity") {
  RandomStream rng(31);
  for (int i = 0; i < 20; ++i) {
    auto st = test::random_state(rng, 3, 10);
    CHECK(st.cov.determinant() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(st.symmetry_defect() <= kTauSym);
    CHECK(st.satisfies_uncertainty());
  }
}

TEST_CASE("single-mode gates leave other modes bit-identical") {
  RandomStream rng(37);
  auto st = test::random_state(rng, 3, 8);
  auto moved = squeeze(phase_rotate(st, 1, 0.9), 1, 0.4, 0.2);
  for (int i = 0; i < 6; ++i) {
    if (i == 2 || i == 3) continue;
    CHECK(moved.mean(i) == st.mean(i));
    for (int j = 0; j < 6; ++j) {
      if (j == 2 || j == 3) continue;
      CHECK(moved.cov(i, j) == st.cov(i, j));
    }
  }
}

TEST_CASE("reduced and append") {
  RandomStream rng(41);
  auto st = test::random_state(rng, 3, 8);
  auto marginal = st.reduced({2, 0});
  CHECK(marginal.num_modes() == 2);
  CHECK(marginal.mean(0) == st.mean(4));
  CHECK(marginal.cov(0, 2) == st.cov(4, 0));

  auto grown = st;
  grown.append_vacuum();
  CHECK(grown.num_modes() == 4);
  CHECK(grown.cov(6, 6) == 1.0);
  CHECK(grown.cov(6, 0) == 0.0);

  grown.remove_mode(3);
  CHECK(grown == st);
}

}  // TEST_SUITE
