#include <doctest.h>

#include <cmath>

#include "cvsim/errors.hpp"
#include "cvsim/executor.hpp"
#include "cvsim/fock_oracle.hpp"
#include "cvsim/measurements.hpp"
#include "cvsim/parser.hpp"
#include "test_util.hpp"

using namespace cvsim;

namespace {

CircuitProgram parse_ok(const std::string& src) {
  auto res = parse(src);
  REQUIRE(res.ok());
  return *res.program;
}

OracleRun run_oracle(const std::string& src, int cutoff = 30,
                     std::uint64_t seed = 1,
                     const std::map<std::string, double>* forced = nullptr) {
  RandomStream rng(seed);
  OracleOptions opt;
  opt.cutoff = cutoff;
  return oracle_execute(parse_ok(src), opt, rng, forced);
}

}  // namespace

TEST_SUITE("fock-oracle") {

TEST_CASE("identity program keeps the vacuum amplitude") {
  auto run = run_oracle("mode a; mode b;");
  CHECK(run.state.amplitudes(0) == std::complex<double>(1.0, 0.0));
  CHECK(run.state.norm2() == doctest::Approx(1.0));
  CHECK(run.state.num_visible() == 2);
}

TEST_CASE("squeezed vacuum has even photon support only") {
  auto run = run_oracle("mode a; squeeze a 0.5 0;");
  double odd = 0.0;
  for (int n = 1; n < run.state.cutoff; n += 2) {
    odd += std::norm(run.state.amplitudes(n));
  }
  CHECK(odd < 1e-24);  // amplitudes themselves below 1e-12
  CHECK(run.state.norm2() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("single photon splits 50:50") {
  auto run = run_oracle("mode a init=fock(1); mode b; bs a b (pi/4) 0;", 12);
  const int d = run.state.cutoff;
  const double p10 = std::norm(run.state.amplitudes(1 * d + 0));
  const double p01 = std::norm(run.state.amplitudes(0 * d + 1));
  CHECK(p10 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p01 == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p10 + p01 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("moments of elementary states") {
  auto vac = run_oracle("mode a;");
  auto [vm, vc] = moments(vac.state);
  CHECK(vm.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((vc - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  auto coh = run_oracle("mode a init=coherent(1,0);");
  auto [cm, cc] = moments(coh.state);
  CHECK(cm(0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cm(1) == doctest::Approx(0.0));
  CHECK((cc - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);

  auto sq = run_oracle("mode a init=squeezed(0.4,0);");
  auto [sm, sc] = moments(sq.state);
  CHECK(sc(0, 0) == doctest::Approx(std::exp(-0.8)).epsilon(1e-9));
  CHECK(sc(1, 1) == doctest::Approx(std::exp(0.8)).epsilon(1e-9));

  // Mean photon number of squeezed vacuum.
  const double n_mean = (sc.trace() - 2.0) / 4.0;
  CHECK(n_mean == doctest::Approx(std::sinh(0.4) * std::sinh(0.4)).epsilon(1e-8));

  auto th = run_oracle("mode a init=thermal(0.6);");
  auto [tm, tc] = moments(th.state);
  CHECK((tc - 2.2 * Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(tm.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-mode squeezing matches the engine covariance") {
  auto run = run_oracle("mode a; mode b; tms a b 0.3;");
  auto engine = two_mode_squeeze(vacuum_state(2), 0, 1, 0.3);
  auto rep = compare(engine, run.state, 1e-6);
  CHECK(rep.pass);
  CHECK(rep.max_cov_dev < 1e-6);
}

TEST_CASE("gauge agreement: quarter rotation moves the squeezed axis the same way") {
  auto run = run_oracle("mode a; squeeze a 0.5 0; rotate a (pi/2);");
  auto [m, c] = moments(run.state);
  CHECK(m.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(c(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
  CHECK(c(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-8));

  auto engine = phase_rotate(squeeze(vacuum_state(1), 0, 0.5, 0.0), 0, M_PI / 2.0);
  CHECK(compare(engine, run.state, 1e-7).pass);
}

TEST_CASE("displacement sign conventions agree with the engine") {
  auto run = run_oracle("mode a; displace a 0.7 -0.4; rotate a 0.6;");
  auto engine = phase_rotate(displace(vacuum_state(1), 0, 0.7, -0.4), 0, 0.6);
  CHECK(compare(engine, run.state, 1e-8).pass);
}

TEST_CASE("squeeze along a rotated axis agrees with the engine") {
  auto run = run_oracle("mode a; squeeze a 0.45 0.8; displace a 0.3 0.2;");
  auto engine = displace(squeeze(vacuum_state(1), 0, 0.45, 0.8), 0, 0.3, 0.2);
  CHECK(compare(engine, run.state, 1e-8).pass);
}

TEST_CASE("channel dilations reproduce the engine maps") {
  // loss
  auto lossy = run_oracle("mode a init=squeezed(0.5,0); displace a 0.4 -0.2; loss a 0.7;");
  auto engine = loss(displace(squeeze(vacuum_state(1), 0, 0.5, 0.0), 0, 0.4, -0.2), 0, 0.7);
  CHECK(compare(engine, lossy.state, 1e-7).pass);

  // amplifier
  auto amped = run_oracle("mode a init=coherent(0.5,0.1); amplify a 1.6;", 40);
  auto engine_amp = amplify(displace(vacuum_state(1), 0, 0.5, 0.1), 0, 1.6);
  CHECK(compare(engine_amp, amped.state, 1e-6).pass);

  // additive noise
  auto noisy = run_oracle("mode a init=coherent(0.4,-0.3); noise a 0.8;", 40);
  auto engine_noise = add_noise(displace(vacuum_state(1), 0, 0.4, -0.3), 0, 0.8);
  CHECK(compare(engine_noise, noisy.state, 1e-6).pass);
}

TEST_CASE("vacuum probabilities") {
  auto vac = run_oracle("mode a;");
  CHECK(vacuum_prob(vac.state, 0) == doctest::Approx(1.0));

  auto one = run_oracle("mode a init=fock(1);");
  CHECK(vacuum_prob(one.state, 0) == doctest::Approx(0.0));

  auto sq = run_oracle("mode a init=squeezed(0.5,0);");
  CHECK(vacuum_prob(sq.state, 0) ==
        doctest::Approx(1.0 / std::cosh(0.5)).epsilon(1e-9));

  auto coh = run_oracle("mode a init=coherent(2,0);");
  CHECK(vacuum_prob(coh.state, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));

  auto tms = run_oracle("mode a; mode b; tms a b 0.8;");
  auto engine_pair = two_mode_squeeze(vacuum_state(2), 0, 1, 0.8);
  auto [p_engine, cond] = condition_on_no_absorption(engine_pair, 0);
  CHECK(vacuum_prob(tms.state, 0) == doctest::Approx(p_engine).epsilon(1e-6));
  (void)cond;
}

TEST_CASE("forced homodyne conditioning matches the Schur update") {
  const double m = 0.41;
  std::map<std::string, double> forced{{"m", m}};
  auto run = run_oracle("mode a; mode b; tms a b 0.6; m = homodyne a 0 1.0;", 40, 1,
                        &forced);
  REQUIRE(run.outcomes.size() == 1);
  CHECK(run.outcomes[0].second == m);

  auto engine = homodyne_conditioned(two_mode_squeeze(vacuum_state(2), 0, 1, 0.6),
                                     0, 0.0, 1.0, m);
  auto rep = compare(engine, run.state, 1e-6);
  CHECK(rep.pass);
}

TEST_CASE("forced lossy homodyne matches the engine") {
  const double m = -0.23;
  std::map<std::string, double> forced{{"m", m}};
  auto run = run_oracle(
      "mode a init=squeezed(0.4,0.3); mode b; bs a b 0.7 0.2;"
      "m = homodyne a 0.5 0.8;",
      30, 1, &forced);
  auto engine_state = beamsplitter(
      squeeze(vacuum_state(2), 0, 0.4, 0.3), 0, 1, 0.7, 0.2);
  auto engine = homodyne_conditioned(engine_state, 0, 0.5, 0.8, m);
  CHECK(compare(engine, run.state, 1e-6).pass);
}

TEST_CASE("forced heterodyne conditioning matches the engine") {
  const double mx = 0.52, mp = -0.31;
  std::map<std::string, double> forced{{"r_x", mx}, {"r_p", mp}};
  auto run = run_oracle("mode a; mode b; tms a b 0.5; r = heterodyne a;", 30, 1,
                        &forced);
  REQUIRE(run.outcomes.size() == 2);
  CHECK(run.outcomes[0].second == doctest::Approx(mx).epsilon(1e-12));
  CHECK(run.outcomes[1].second == doctest::Approx(mp).epsilon(1e-12));

  auto engine = heterodyne_conditioned(two_mode_squeeze(vacuum_state(2), 0, 1, 0.5),
                                       0, mx, mp);
  CHECK(compare(engine, run.state, 1e-6).pass);
}

TEST_CASE("vacuum projection conditioning matches the engine") {
  auto run = run_oracle("mode a; mode b; tms a b 0.8; p = vacproject a;");
  auto engine_pair = two_mode_squeeze(vacuum_state(2), 0, 1, 0.8);
  auto [p_engine, engine] = condition_on_no_absorption(engine_pair, 0);
  CHECK(run.outcomes[0].second == doctest::Approx(p_engine).epsilon(1e-6));
  CHECK(compare(engine, run.state, 1e-6).pass);
}

TEST_CASE("compare reports deviations honestly") {
  auto vac_run = run_oracle("mode a; mode b;");
  auto rep = compare(vacuum_state(2), vac_run.state, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.max_mean_dev == doctest::Approx(0.0));
  CHECK(rep.max_cov_dev < 1e-12);

  // Negative control: flipped squeeze sign must be flagged with a deviation
  // near |e^{2s} - e^{-2s}|.
  const double s = 0.4;
  auto flipped = run_oracle("mode a; squeeze a -0.4 0;");
  auto engine = squeeze(vacuum_state(1), 0, s, 0.0);
  auto bad = compare(engine, flipped.state, 1e-5);
  CHECK_FALSE(bad.pass);
  CHECK(bad.max_cov_dev ==
        doctest::Approx(std::exp(2 * s) - std::exp(-2 * s)).epsilon(1e-6));

  CHECK_THROWS_AS(compare(vacuum_state(1), vac_run.state, 1e-6), ShapeMismatch);
}

TEST_CASE("unitary programs preserve the norm") {
  auto run = run_oracle(
      "mode a; mode b; squeeze a 0.5 0.2; tms a b 0.4; bs a b 0.9 0.4;"
      "rotate b 1.1; displace a 0.5 0.5;");
  CHECK(run.state.norm2() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(run.state.leakage < 1e-6);
}

TEST_CASE("kerr evolution is a non-Gaussian witness") {
  auto gauss = run_oracle("mode a; squeeze a 0.4 0;");
  CHECK(std::abs(fourth_cumulant_x(gauss.state, 0)) < 1e-6);

  auto kerred = run_oracle("mode a; squeeze a 0.4 0; kerr a 0.35;");
  CHECK(std::abs(fourth_cumulant_x(kerred.state, 0)) > 1e-5 * 10);
}

TEST_CASE("conditioning on a one-photon count yields a non-Gaussian state") {
  std::map<std::string, double> forced{{"n", 1.0}};
  auto run = run_oracle("mode a; mode b; tms a b 0.5; n = photoncount a;", 25, 1,
                        &forced);
  CHECK(run.outcomes[0].second == 1.0);
  // The partner mode collapses to a single-photon state: kappa4 = -12.
  CHECK(fourth_cumulant_x(run.state, 0) == doctest::Approx(-12.0).epsilon(1e-6));
}

TEST_CASE("photon counting samples the number distribution") {
  // Coherent state |alpha|^2 = 0.49: counts follow Poisson(0.49).
  int zeros = 0;
  const int shots = 400;
  for (int i = 0; i < shots; ++i) {
    RandomStream rng(7, i);
    OracleOptions opt;
    opt.cutoff = 20;
    auto run = oracle_execute(parse_ok("mode a init=coherent(1.4,0); n = photoncount a;"),
                              opt, rng, nullptr);
    if (run.outcomes[0].second == 0.0) ++zeros;
  }
  const double p0 = std::exp(-0.49);
  const double se = std::sqrt(p0 * (1 - p0) / shots);
  CHECK(std::abs(static_cast<double>(zeros) / shots - p0) < 5 * se);
}

TEST_CASE("sampled homodyne outcomes track the Gaussian density") {
  double sum = 0, sum2 = 0;
  const int shots = 300;
  for (int i = 0; i < shots; ++i) {
    RandomStream rng(13, i);
    OracleOptions opt;
    opt.cutoff = 25;
    auto run = oracle_execute(
        parse_ok("mode a init=coherent(0.8,0.3); m = homodyne a 0 1.0;"), opt, rng,
        nullptr);
    sum += run.outcomes[0].second;
    sum2 += run.outcomes[0].second * run.outcomes[0].second;
  }
  const double mean = sum / shots;
  const double var = sum2 / shots - mean * mean;
  CHECK(std::abs(mean - 0.8) < 5.0 / std::sqrt(static_cast<double>(shots)));
  CHECK(std::abs(var - 1.0) < 5.0 * std::sqrt(2.0 / shots));
}

TEST_CASE("resource guards") {
  auto big = parse_ok("mode a; mode b; mode c; mode d;");
  RandomStream rng(1);
  OracleOptions opt;
  CHECK_THROWS_AS(oracle_execute(big, opt, rng, nullptr), ResourceLimitError);

  OracleOptions bad_cutoff;
  bad_cutoff.cutoff = 80;
  auto small = parse_ok("mode a;");
  CHECK_THROWS_AS(oracle_execute(small, bad_cutoff, rng, nullptr), ResourceLimitError);

  OracleOptions tiny_budget;
  tiny_budget.cutoff = 10;
  auto hot = parse_ok("mode a; squeeze a 1.4 0; squeeze a 1.4 0;");
  CHECK_THROWS_AS(oracle_execute(hot, tiny_budget, rng, nullptr),
                  TruncationBudgetExceeded);

  OracleOptions small_amps;
  small_amps.cutoff = 40;
  small_amps.max_amplitudes = 1000;
  auto two = parse_ok("mode a; mode b;");
  CHECK_THROWS_AS(oracle_execute(two, small_amps, rng, nullptr), ResourceLimitError);
}

TEST_CASE("quadrature wavefunctions are orthonormal on a fine grid") {
  const int d = 12;
  const double step = 0.01;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  for (double x = -20.0; x <= 20.0; x += step) {
    Eigen::VectorXd phi = quadrature_wavefunctions(d, x);
    gram += step * phi * phi.transpose();
  }
  CHECK((gram - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-6);
}

}  // TEST_SUITE
