#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsalpha/harness.hpp"

using namespace nsalpha;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ExperimentSetup small_setup(NoiseSpec noise, bool nonlinear = true) {
  ExperimentSetup s;
  s.L = kTwoPi;
  s.nu = 0.1;
  s.T = 0.2;
  s.dt = 0.01;
  s.grid_size = 10;
  s.noise = noise;
  s.nonlinear = nonlinear;
  const auto b = StokesBasis::build(kTwoPi, 32, 10);
  s.u0 = SpectralField(b);
  s.u0[0] = std::sqrt(0.5);
  s.u0[2] = std::sqrt(0.5);
  return s;
}

}  // namespace

TEST_CASE("alpha schedule") {
  AlphaSchedule s;
  CHECK(alpha_for_N(1, s, kTwoPi) == doctest::Approx(1.0));
  // mu_N = 4 for N = 9..12.
  CHECK(StokesBasis::eigenvalue_for(kTwoPi, 10) == doctest::Approx(4.0));
  CHECK(alpha_for_N(10, s, kTwoPi) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-14));
  CHECK(alpha_for_N(10, s, kTwoPi) == doctest::Approx(0.353553).epsilon(1e-6));
  s.exponent = 0.5;
  CHECK(alpha_for_N(10, s, kTwoPi) == doctest::Approx(0.5));
  s = AlphaSchedule{0.5, 2.0, 0.75, AlphaPick::min};
  const double lo = alpha_for_N(16, s, kTwoPi);
  s.pick = AlphaPick::max;
  const double hi = alpha_for_N(16, s, kTwoPi);
  s.pick = AlphaPick::geometric_mean;
  const double mid = alpha_for_N(16, s, kTwoPi);
  CHECK(hi == doctest::Approx(4.0 * lo));
  CHECK(mid == doctest::Approx(2.0 * lo));
  CHECK_THROWS(alpha_for_N(0, s, kTwoPi));
  CHECK_THROWS((AlphaSchedule{2.0, 1.0}.validate()));
  CHECK(alpha_pick_from_string("geometric_mean") == AlphaPick::geometric_mean);
  CHECK_THROWS(alpha_pick_from_string("median"));
}

TEST_CASE("self-comparison gives identically zero error") {
  const auto setup = small_setup({NoiseKind::diagonal_multiplicative, 0.1, 0.2, 3.0});
  const int N[] = {32};
  PairedRunOptions opt;
  opt.alpha_override = 0.0;
  const auto res = paired_run(setup, N, 32, AlphaSchedule{}, 3, opt);
  REQUIRE(res.size() == 1);
  CHECK(res[0].v_err_sq.size() == 21);
  for (double e : res[0].v_err_sq) CHECK(e == 0.0);
  for (double e : res[0].ubar_err_sq) CHECK(e == 0.0);
}

TEST_CASE("noise-free linear pair matches the scalar recurrence") {
  // Mode 0 only: v_N(n) = c (1 + a^2) r^n and v_ref(n) = c r^n with r = 1/(1 + nu dt).
  auto setup = small_setup({NoiseKind::additive, 0.0, 0.0, 3.0}, false);
  setup.u0 = SpectralField(setup.u0.basis_ptr());
  setup.u0[0] = 0.9;
  const int N[] = {4, 8};
  const auto res = paired_run(setup, N, 16, AlphaSchedule{}, 1);
  for (const auto& e : res) {
    const double a2 = e.alpha * e.alpha;
    for (std::size_t n = 0; n < e.v_err_sq.size(); ++n) {
      const double r = std::pow(1.0 + 0.1 * 0.01, -static_cast<double>(n));
      CHECK(e.v_err_sq[n] == doctest::Approx(std::pow(0.9 * a2 * r, 2)).epsilon(1e-12));
      CHECK(e.ubar_err_sq[n] == doctest::Approx(0.0).epsilon(1e-30));
    }
  }
}

TEST_CASE("paired_run rejects N above the reference") {
  const auto setup = small_setup({NoiseKind::additive, 0.1, 0.0, 3.0});
  const int N[] = {4, 36};
  CHECK_THROWS_AS(paired_run(setup, N, 32, AlphaSchedule{}, 1), std::invalid_argument);
}

TEST_CASE("Monte-Carlo aggregation") {
  SeedRecord a, b;
  a.N = b.N = 8;
  a.strong_error_sup = 3.0;
  b.strong_error_sup = 7.0;
  a.moments.sup_ubar_alpha_2p = b.moments.sup_ubar_alpha_2p = 1.5;
  const SeedRecord two[] = {a, b};
  const auto c = mc_aggregate(two);
  CHECK(c.strong_error_sup.mean == 5.0);
  CHECK(c.strong_error_sup.stderr_ == doctest::Approx(2.0));
  CHECK(c.sup_ubar_alpha_2p.stderr_ == 0.0);
  CHECK_FALSE(c.flagged);
  const SeedRecord one[] = {a};
  const auto f = mc_aggregate(one);
  CHECK(f.flagged);
  CHECK_FALSE(f.strong_error_sup.has_stderr);
  CHECK(f.strong_error_sup.mean == 3.0);
  b.N = 4;
  const SeedRecord mixed[] = {a, b};
  CHECK_THROWS(mc_aggregate(mixed));
}

TEST_CASE("ladder aggregation matches direct recomputation and is thread-independent") {
  const auto setup = small_setup({NoiseKind::diagonal_multiplicative, 0.2, 0.2, 3.0});
  const int N[] = {4, 8, 16};
  const auto r1 = convergence_ladder(setup, N, 32, AlphaSchedule{}, 10, 4, 1);
  const auto r3 = convergence_ladder(setup, N, 32, AlphaSchedule{}, 10, 4, 3);
  REQUIRE(r1.rows.size() == 12);
  for (std::size_t i = 0; i < r1.rows.size(); ++i) {
    CHECK(r1.rows[i].strong_error_sup == r3.rows[i].strong_error_sup);
    CHECK(r1.rows[i].moments.int_Av_sq == r3.rows[i].moments.int_Av_sq);
  }
  for (std::size_t k = 0; k < 3; ++k) {
    double sum = 0.0, sum2 = 0.0;
    for (int s = 0; s < 4; ++s) {
      const auto& row = r1.rows[static_cast<std::size_t>(s) * 3 + k];
      CHECK(row.N == N[k]);
      CHECK(row.seed == static_cast<std::uint64_t>(10 + s));
      sum += row.strong_error_final;
      sum2 += row.strong_error_final * row.strong_error_final;
    }
    const double mean = sum / 4;
    const double sd = std::sqrt((sum2 - 4 * mean * mean) / 3);
    CHECK(r1.summary[k].strong_error_final.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(r1.summary[k].strong_error_final.stderr_ == doctest::Approx(sd / 2).epsilon(1e-8));
  }
}

TEST_CASE("moment ensemble reports both sup orders") {
  const auto setup = small_setup({NoiseKind::additive, 0.3, 0.0, 3.0});
  const auto e = moment_ensemble(setup, 8, 0.3, 1, 6, 2);
  CHECK(e.per_seed.size() == 6);
  CHECK(e.sup_of_mean_ubar_alpha_2p <= e.mean_of_sup_ubar_alpha_2p * (1 + 1e-14));
  const auto again = moment_ensemble(setup, 8, 0.3, 1, 6, 1);
  CHECK(again.mean_of_sup_ubar_alpha_2p == e.mean_of_sup_ubar_alpha_2p);
}

TEST_CASE("parallel_for propagates exceptions") {
  std::vector<int> out(20, 0);
  parallel_for(out.size(), [&](std::size_t i) { out[i] = static_cast<int>(i * i); }, 4);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  CHECK_THROWS_AS(parallel_for(5, [](std::size_t i) { if (i == 3) throw std::runtime_error("x"); }, 2),
                  std::runtime_error);
}
