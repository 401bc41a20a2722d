#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nsalpha/diagnostics.hpp"
#include "nsalpha/integrator.hpp"
#include "oracles.hpp"

using namespace nsalpha;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SimConfig base_config(int N, double alpha, double T, double dt) {
  SimConfig c;
  c.L = kTwoPi;
  c.nu = 0.1;
  c.N = N;
  c.alpha = alpha;
  c.T = T;
  c.dt = dt;
  c.grid_size = StokesBasis::min_grid_size(StokesBasis::max_wavenumber_for(N));
  c.noise = NoiseModel::none(N);
  c.seed = 1;
  return c;
}

// ||u(T)||_a^2 + 2 nu sum dt ||grad u_n||_a^2 - ||u(0)||_a^2 for a noise-free run.
double energy_defect(const SimConfig& cfg, const SpectralField& u0) {
  const auto tr = run(cfg, u0);
  const auto& d = tr.diagnostics;
  double diss = 0.0;
  for (std::size_t n = 0; n + 1 < d.size(); ++n) diss += cfg.dt * d.grad_ubar_alpha_sq[n];
  return d.ubar_alpha_sq.back() + 2.0 * cfg.nu * diss - d.ubar_alpha_sq.front();
}

}  // namespace

TEST_CASE("initial state") {
  std::mt19937_64 rng(1);
  const auto b = StokesBasis::build(kTwoPi, 12, 10);
  const auto u0 = oracle::random(b, rng);
  const auto s0 = initial_state(u0, 0.0);
  for (int j = 0; j < 12; ++j) {
    CHECK(s0.v[j] == u0[j]);
    CHECK(s0.u_bar[j] == u0[j]);
  }
  CHECK(s0.t == 0.0);
  SpectralField e(b);
  e[9] = 1.0;
  CHECK(initial_state(e, 0.4).v[9] == doctest::Approx(1.0 + 0.16 * b->mu(9)));

  const double a = 1.0 / std::sqrt(b->mu_max());
  for (int t = 0; t < 100; ++t) {
    const auto u = oracle::random(b, rng);
    const auto s = initial_state(u, a);
    CHECK(std::sqrt(grad_norm_sq(s.v)) <= 2.0 * std::sqrt(grad_norm_sq(s.u_bar)));
  }
  // Projection from a larger basis keeps the leading coefficients.
  const auto small = StokesBasis::build(kTwoPi, 4, 10);
  const auto p = initial_state(u0, small, 0.0);
  for (int j = 0; j < 4; ++j) CHECK(p.u_bar[j] == u0[j]);
}

TEST_CASE("drift") {
  std::mt19937_64 rng(2);
  const auto b = StokesBasis::build(kTwoPi, 16, 10);
  const auto zero = initial_state(SpectralField(b), 0.3);
  CHECK(drift_R(zero, 0.1).l2_norm_sq() == 0.0);
  const auto s = initial_state(oracle::random(b, rng), 0.3);
  const auto lin = drift_R(s, 0.1, false);
  const auto Av = apply_stokes(s.v);
  for (int j = 0; j < 16; ++j) CHECK(lin[j] == doctest::Approx(0.1 * Av[j]).epsilon(1e-15));
  const auto full = drift_R(s, 0.1, true);
  CHECK(std::abs(inner(full - 0.1 * Av, s.u_bar)) < 1e-10);
}

TEST_CASE("hand-computed step on two modes") {
  // Both modes carry k = (0, 1), so B~ vanishes and the step is
  // v' = (v + (sigma + lambda c) dW) / (1 + nu dt mu), u' = v' / (1 + alpha^2 mu).
  const auto b = StokesBasis::build(kTwoPi, 2, 10);
  REQUIRE(b->mode(0).k == std::array<int, 2>{0, 1});
  REQUIRE(b->mode(1).k == std::array<int, 2>{0, 1});
  auto cfg = base_config(2, 0.5, 0.01, 0.01);
  cfg.noise = NoiseModel::from_vectors(NoiseKind::diagonal_multiplicative, {0.2, 0.2}, {0.1, 0.1});
  const auto s = initial_state(SpectralField(b, {0.6, -0.8}), 0.5);
  const auto next = step(s, cfg, WienerIncrement{{0.05, -0.02}, 0.01});
  CHECK(std::abs(next.v[0] - 0.763 / 1.001) < 1e-12);
  CHECK(std::abs(next.v[1] - (-1.0024 / 1.001)) < 1e-12);
  CHECK(std::abs(next.u_bar[0] - 0.763 / 1.001 / 1.25) < 1e-12);
  CHECK(std::abs(next.u_bar[1] - (-1.0024 / 1.001 / 1.25)) < 1e-12);
  CHECK(next.t == doctest::Approx(0.01));
  CHECK_THROWS_AS(step(s, cfg, WienerIncrement{{0.05, -0.02}, 0.02}), std::invalid_argument);
}

TEST_CASE("nonlinear step matches the quadrature oracle") {
  std::mt19937_64 rng(3);
  const auto b = StokesBasis::build(kTwoPi, 8, 8);
  auto cfg = base_config(8, 0.3, 0.05, 0.05);
  cfg.grid_size = 8;
  cfg.noise = NoiseModel::decaying(NoiseKind::additive, 0.5, 0.0, 3.0, *b);
  const auto s = initial_state(oracle::random(b, rng), 0.3);
  const auto inc = sample_increment(NoiseStream(5), 0, 0.05, 8);
  const auto next = step(s, cfg, inc);
  for (int j = 0; j < 8; ++j) {
    SpectralField e(b);
    e[j] = 1.0;
    const double bj = oracle::btilde_form(s.u_bar, s.v, e, 16);
    const double expect = (s.v[j] - 0.05 * bj + cfg.noise.sigma()[j] * inc.dW[j]) /
                          (1.0 + 0.1 * 0.05 * b->mu(j));
    CHECK(std::abs(next.v[j] - expect) < 1e-12);
    CHECK(std::abs(next.u_bar[j] - expect / (1.0 + 0.09 * b->mu(j))) < 1e-12);
  }
}

TEST_CASE("Stokes decay per mode") {
  const auto b = StokesBasis::build(kTwoPi, 12, 10);
  SpectralField u0(b);
  for (int j = 0; j < 12; ++j) u0[j] = 1.0 / (1 + j);
  auto cfg = base_config(12, 0.0, 1.0, 0.01);
  cfg.nonlinear = false;
  cfg.snapshot_stride = 10;
  const auto tr = run(cfg, u0);
  const auto& last = tr.snapshots.back();
  CHECK(last.t == doctest::Approx(1.0));
  for (int j = 0; j < 12; ++j) {
    const double discrete = u0[j] * std::pow(1.0 + 0.1 * 0.01 * b->mu(j), -100);
    CHECK(last.v[j] == doctest::Approx(discrete).epsilon(1e-12));
    CHECK(std::abs(last.v[j] - u0[j] * std::exp(-0.1 * b->mu(j))) < 0.01 * u0[j]);
  }
}

TEST_CASE("alpha = 0 keeps v and u_bar equal") {
  std::mt19937_64 rng(4);
  const auto b = StokesBasis::build(kTwoPi, 12, 10);
  auto cfg = base_config(12, 0.0, 0.1, 0.01);
  cfg.noise = NoiseModel::decaying(NoiseKind::diagonal_multiplicative, 0.2, 0.1, 3.0, *b);
  cfg.snapshot_stride = 1;
  const auto tr = run(cfg, oracle::random(b, rng));
  for (const auto& s : tr.snapshots) CHECK(s.v == s.u_bar);
}

TEST_CASE("coupling invariant and divergence along a run") {
  std::mt19937_64 rng(5);
  const auto b = StokesBasis::build(kTwoPi, 20, 10);
  auto cfg = base_config(20, 0.4, 0.2, 0.01);
  cfg.grid_size = 10;
  cfg.noise = NoiseModel::decaying(NoiseKind::diagonal_multiplicative, 0.3, 0.2, 3.0, *b);
  const auto path = WienerPath::sample(NoiseStream(3), cfg.steps(), cfg.dt, 20);
  auto s = initial_state(oracle::random(b, rng), b, cfg.alpha);
  for (int n = 0; n < cfg.steps(); ++n) {
    s = step(s, cfg, path.increment(n, 20), n);
    const auto back = helmholtz_apply(s.u_bar, FilterScale(cfg.alpha));
    for (int j = 0; j < 20; ++j) CHECK(std::abs(back[j] - s.v[j]) < 1e-12 * std::max(1.0, std::abs(s.v[j])));
    CHECK(max_divergence(s.u_bar) < 1e-12);
  }
}

TEST_CASE("implicit viscosity is unconditionally stable") {
  std::mt19937_64 rng(6);
  const auto b = StokesBasis::build(kTwoPi, 16, 10);
  for (double dt : {0.01, 1.0, 100.0}) {
    auto cfg = base_config(16, 0.2, 10 * dt, dt);
    cfg.nonlinear = false;
    const auto tr = run(cfg, oracle::random(b, rng));
    for (std::size_t n = 1; n < tr.diagnostics.size(); ++n) {
      CHECK(tr.diagnostics.v_sq[n] <= tr.diagnostics.v_sq[n - 1]);
    }
  }
}

TEST_CASE("run bookkeeping") {
  std::mt19937_64 rng(7);
  const auto b = StokesBasis::build(kTwoPi, 8, 10);
  auto cfg = base_config(8, 0.3, 0.05, 0.05);
  cfg.noise = NoiseModel::decaying(NoiseKind::additive, 0.3, 0.0, 3.0, *b);
  const auto u0 = oracle::random(b, rng);
  const auto tr = run(cfg, u0);
  REQUIRE(tr.times.size() == 2);
  CHECK(tr.times[0] == 0.0);
  CHECK(tr.times[1] == 0.05);
  CHECK(tr.diagnostics.size() == 2);
  CHECK(tr.diagnostics.v_l4_4.size() == 2);

  cfg.T = 0.5;
  cfg.seed = 99;
  const auto a = run(cfg, u0), c = run(cfg, u0);
  CHECK(a.diagnostics.ubar_alpha_sq == c.diagnostics.ubar_alpha_sq);
  CHECK(a.diagnostics.v_l4_4 == c.diagnostics.v_l4_4);
  for (std::size_t n = 1; n < a.times.size(); ++n) CHECK(a.times[n] > a.times[n - 1]);
}

TEST_CASE("config validation names the field") {
  auto cfg = base_config(8, 0.3, 0.5, 0.01);
  CHECK_NOTHROW(cfg.validate());
  auto bad = cfg;
  bad.dt = 0.03;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("SimConfig.dt"));
  bad = cfg;
  bad.nu = 0.0;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("SimConfig.nu"));
  bad = cfg;
  bad.dt = 1.0;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("SimConfig.dt"));
  bad = cfg;
  bad.noise = NoiseModel::none(4);
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("SimConfig.noise"));
  bad = cfg;
  bad.grid_size = 9;
  CHECK_THROWS_WITH(bad.validate(), doctest::Contains("SimConfig.grid_size"));
}

TEST_CASE("non-finite state aborts with a blow-up error") {
  // Needs several shells: on the lowest two the projected nonlinearity can vanish.
  const auto b = StokesBasis::build(kTwoPi, 16, 10);
  SpectralField u0(b);
  for (int j = 0; j < 16; ++j) u0[j] = 1e60 * ((j * 7) % 5 < 2 ? 1.0 : -0.6 - 0.1 * j);
  const auto cfg = base_config(16, 0.0, 5.0, 0.5);
  try {
    (void)run(cfg, u0);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.step() >= 0);
    CHECK(std::isfinite(e.last_finite_energy()));
    CHECK(std::string(e.what()).find("e+") != std::string::npos);
  }
}

TEST_CASE("noise-free energy law defect is first order") {
  const auto b = StokesBasis::build(kTwoPi, 16, 10);
  SpectralField u0(b);
  u0[0] = 0.7;
  u0[3] = -0.5;
  u0[5] = 0.4;
  u0[9] = 0.3;
  auto cfg = base_config(16, 0.3, 1.0, 0.01);
  const double d1 = energy_defect(cfg, u0);
  cfg.dt = 0.005;
  const double d2 = energy_defect(cfg, u0);
  CHECK(std::abs(d1) < 0.01);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.1));
}
