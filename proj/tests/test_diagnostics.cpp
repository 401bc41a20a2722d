#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nsalpha/diagnostics.hpp"
#include "nsalpha/integrator.hpp"
#include "nsalpha/operators.hpp"
#include "nsalpha/verify.hpp"
#include "oracles.hpp"

using namespace nsalpha;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SimConfig stokes_config(int N, double alpha, double dt) {
  SimConfig c;
  c.L = kTwoPi;
  c.nu = 0.1;
  c.N = N;
  c.alpha = alpha;
  c.T = 1.0;
  c.dt = dt;
  c.grid_size = 10;
  c.noise = NoiseModel::none(N);
  c.nonlinear = false;
  return c;
}

}  // namespace

TEST_CASE("zero trajectory has zero functionals") {
  const auto b = StokesBasis::build(kTwoPi, 8, 10);
  const auto tr = run(stokes_config(8, 0.2, 0.1), SpectralField(b));
  for (int p : {1, 2, 3}) {
    const auto m = moment_functionals(tr, p, 0.2);
    CHECK(m.sup_ubar_alpha_2p == 0.0);
    CHECK(m.int_dissipation_p == 0.0);
    CHECK(m.sup_v_2p == 0.0);
    CHECK(m.sup_grad_ubar_alpha_2p == 0.0);
    CHECK(m.int_A_ubar_alpha_sq == 0.0);
    CHECK(m.sup_grad_v_2p == 0.0);
    CHECK(m.int_Av_sq == 0.0);
  }
}

TEST_CASE("single-mode decay against the closed form") {
  // u_bar_j(t) = c0 exp(-nu mu t), so
  //   int_0^T ||grad u_bar||_a^2 = c0^2 mu (1 + a^2 mu) (1 - exp(-2 nu mu T)) / (2 nu mu).
  const auto b = StokesBasis::build(kTwoPi, 8, 10);
  const int j = 5;
  const double c0 = 0.8, a = 0.4, nu = 0.1, mu = b->mu(j), T = 1.0;
  SpectralField u0(b);
  u0[j] = c0;
  const double exact = c0 * c0 * mu * (1 + a * a * mu) * (1 - std::exp(-2 * nu * mu * T)) / (2 * nu * mu);
  double prev_err = 0.0;
  for (double dt : {0.02, 0.01, 0.005}) {
    const auto tr = run(stokes_config(8, a, dt), u0);
    const auto m = moment_functionals(tr, 1, a);
    CHECK(m.sup_ubar_alpha_2p == doctest::Approx(c0 * c0 * (1 + a * a * mu)).epsilon(1e-14));
    CHECK(m.sup_v_2p == doctest::Approx(std::pow(c0 * (1 + a * a * mu), 2)).epsilon(1e-14));
    const double err = std::abs(m.int_dissipation_p - exact);
    CHECK(err < 0.05 * exact);
    if (prev_err > 0.0) CHECK(prev_err / err == doctest::Approx(2.0).epsilon(0.1));
    prev_err = err;
  }
}

TEST_CASE("p = 1 dissipation is the plain gradient integral") {
  std::mt19937_64 rng(1);
  const auto b = StokesBasis::build(kTwoPi, 8, 10);
  auto cfg = stokes_config(8, 0.3, 0.05);
  cfg.nonlinear = true;
  cfg.noise = NoiseModel::decaying(NoiseKind::additive, 0.2, 0.0, 3.0, *b);
  const auto tr = run(cfg, oracle::random(b, rng));
  const auto m1 = moment_functionals(tr, 1, 0.3);
  double direct = 0.0;
  for (std::size_t n = 0; n + 1 < tr.times.size(); ++n) direct += 0.05 * tr.diagnostics.grad_ubar_alpha_sq[n];
  CHECK(m1.int_dissipation_p == doctest::Approx(direct).epsilon(1e-14));
  const auto m2 = moment_functionals(tr, 2, 0.3);
  double sup = 0.0;
  for (double x : tr.diagnostics.ubar_alpha_sq) sup = std::max(sup, x * x);
  CHECK(m2.sup_ubar_alpha_2p == doctest::Approx(sup).epsilon(1e-14));
  CHECK_THROWS_AS(moment_functionals(tr, 1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(moment_functionals(tr, 0, 0.3), std::invalid_argument);
  Trajectory broken = tr;
  broken.diagnostics.Av_sq.clear();
  CHECK_THROWS_AS(moment_functionals(broken, 1, 0.3), std::invalid_argument);
}

TEST_CASE("norm comparison under the filter-scale hypothesis") {
  std::mt19937_64 rng(2);
  const auto b = StokesBasis::build(kTwoPi, 16, 10);
  const double mu_N = b->mu_max();
  const auto s0 = initial_state(oracle::random(b, rng), 0.0);
  CHECK(calc4_check(s0, mu_N).status == CheckStatus::holds);
  for (int t = 0; t < 500; ++t) {
    const auto s = initial_state(oracle::random(b, rng), 1.0 / std::sqrt(mu_N));
    const auto r = calc4_check(s, mu_N);
    CHECK(r.status == CheckStatus::holds);
    CHECK(r.gradient_status == CheckStatus::holds);
  }
  const auto big = initial_state(oracle::random(b, rng), 2.0 / std::sqrt(mu_N));
  CHECK(calc4_check(big, mu_N).status == CheckStatus::hypothesis_not_satisfied);
  CHECK(std::string(to_string(CheckStatus::hypothesis_not_satisfied)) == "hypothesis not satisfied");
}

TEST_CASE("monotonicity gap agrees with a quadrature oracle") {
  std::mt19937_64 rng(3);
  const auto b = StokesBasis::build(kTwoPi, 8, 8);
  const double nu = 0.1, a = 0.4, kappa = 0.3;
  const auto model = NoiseModel::decaying(NoiseKind::diagonal_multiplicative, 0.1, 0.2, 3.0, *b);
  const auto u1 = oracle::random(b, rng), u2 = oracle::random(b, rng);
  const auto w = u1 - u2;
  const auto v1 = helmholtz_apply(u1, FilterScale(a)), v2 = helmholtz_apply(u2, FilterScale(a));
  double viscous = 0.0, noise = 0.0;
  for (int j = 0; j < 8; ++j) {
    viscous += nu * b->mu(j) * (1 + a * a * b->mu(j)) * w[j] * w[j];
    noise += std::pow(model.lambda()[j] * w[j], 2);
  }
  const double conv = oracle::btilde_form(u1, v1, w, 16) - oracle::btilde_form(u2, v2, w, 16);
  const double l4 = oracle::grid_mean(b->length(), 16, [&](double x1, double x2) {
    const auto s = oracle::eval(u2, x1, x2);
    const double m = s.u[0] * s.u[0] + s.u[1] * s.u[1];
    return m * m;
  });
  const double expect = viscous + conv + kappa / (nu * nu * nu) * l4 * w.l2_norm_sq() - noise;
  const auto r = monotonicity_gap(u1, u2, a, nu, model, kappa);
  CHECK(r.gap == doctest::Approx(expect).epsilon(1e-10));
  CHECK(r.kappa_used == kappa);
  CHECK(r.cp_used == doctest::Approx(1.0));
  CHECK(r.hypothesis_satisfied);
  CHECK(monotonicity_gap(u1, u1, a, nu, model, kappa).gap == 0.0);
}

TEST_CASE("calibrated kappa makes additive gaps non-negative") {
  const auto b = StokesBasis::build(kTwoPi, 12, 10);
  const double nu = 0.1, a = 0.35;
  const auto model = NoiseModel::decaying(NoiseKind::additive, 0.3, 0.0, 3.0, *b);
  const auto cal = calibrate_kappa(b, a, nu, model, 300, 5);
  CHECK(cal.kappa == doctest::Approx(2.0 * cal.max_required));
  CHECK(cal.max_required > 0.0);
  const auto sweep = monotonicity_sweep(b, a, nu, model, cal.kappa, 500, 6);
  CHECK(sweep.status == CheckStatus::holds);
  CHECK(sweep.min_gap >= -1e-10);
}

TEST_CASE("required kappa is the exact threshold for the worst direction") {
  std::mt19937_64 rng(4);
  const auto b = StokesBasis::build(kTwoPi, 8, 8);
  const double nu = 0.1, a = 0.3;
  const auto model = NoiseModel::decaying(NoiseKind::diagonal_multiplicative, 0.0, 0.2, 3.0, *b);
  const auto u2 = oracle::random(b, rng, 3.0);
  const double k = required_kappa(u2, a, nu, model);
  REQUIRE(k > 0.0);
  // At k the minimum over w is zero; slightly below it some w goes negative.
  double min_at = 1e300, min_below = 1e300;
  for (int t = 0; t < 4000; ++t) {
    auto w = oracle::random(b, rng);
    w *= 1.0 / std::sqrt(w.l2_norm_sq());
    min_at = std::min(min_at, monotonicity_gap(u2 + w, u2, a, nu, model, k).gap);
    min_below = std::min(min_below, monotonicity_gap(u2 + w, u2, a, nu, model, 0.5 * k).gap);
  }
  CHECK(min_at >= -1e-10);
  CHECK(min_below < min_at);
}

TEST_CASE("violating the noise threshold produces negative gaps") {
  const auto b = StokesBasis::build(kTwoPi, 8, 10);
  const double nu = 0.1, a = 0.3;
  const double threshold = std::sqrt(nu) * std::sqrt(b->mu(0)) / std::sqrt(2.0);
  const auto model =
      NoiseModel::decaying(NoiseKind::diagonal_multiplicative, 0.0, 4.0 * threshold, 3.0, *b);
  CHECK_FALSE(validate_s2(model, nu, *b).monotonicity_ok);
  // Adversarial pairs: u2 = 0 removes the kappa weight, w along the lowest mode.
  double worst = 0.0;
  for (int j = 0; j < 8; ++j) {
    SpectralField u1(b);
    u1[j] = 1e-2;
    const auto r = monotonicity_gap(u1, SpectralField(b), a, nu, model, 1e3);
    CHECK_FALSE(r.hypothesis_satisfied);
    worst = std::min(worst, r.gap);
  }
  CHECK(worst < 0.0);
  const auto sweep = monotonicity_sweep(b, a, nu, model, 1.0, 10, 1);
  CHECK(sweep.status == CheckStatus::hypothesis_not_satisfied);
}

TEST_CASE("rho weight") {
  Trajectory tr;
  tr.dt = 0.1;
  tr.times = {0.0, 0.1, 0.2, 0.3};
  tr.diagnostics.v_l4_4 = {0.0, 0.0, 0.0, 0.0};
  for (double r : rho_weight(tr, 2.0, 0.5)) CHECK(r == 0.0);
  tr.diagnostics.v_l4_4 = {3.0, 3.0, 3.0, 3.0};
  const auto rho = rho_weight(tr, 2.0, 0.5);
  for (std::size_t n = 0; n < rho.size(); ++n) {
    CHECK(rho[n] == doctest::Approx(2.0 * 2.0 / 0.125 * 3.0 * tr.times[n]).epsilon(1e-14));
  }
  tr.diagnostics.v_l4_4 = {1.0, 0.0, 5.0, 2.0};
  const auto r2 = rho_weight(tr, 1.0, 1.0);
  for (std::size_t n = 1; n < r2.size(); ++n) CHECK(r2[n] >= r2[n - 1]);
  tr.diagnostics.v_l4_4.clear();
  CHECK_THROWS_AS(rho_weight(tr, 1.0, 1.0), std::invalid_argument);
}
