#include "nsalpha/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "nsalpha/operators.hpp"

namespace nsalpha {

std::vector<PropertyResult> trilinear_identities(const BasisPtr& basis, int samples,
                                                 std::uint64_t seed, double tolerance) {
  std::vector<PropertyResult> r = {
      {"btilde_antisymmetry", 0.0, tolerance, samples},
      {"btilde_skew", 0.0, tolerance, samples},
      {"btilde_decomposition", 0.0, tolerance, samples},
      {"ns_skew", 0.0, tolerance, samples},
      {"ns_enstrophy", 0.0, tolerance, samples},
  };
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const auto u = random_field(basis, rng);
    const auto v = random_field(basis, rng);
    const auto w = random_field(basis, rng);
    const double b_uvw = trilinear_btilde(u, v, w);
    const double b_wvu = trilinear_btilde(w, v, u);
    auto bump = [&](int i, double x) { r[i].max_residual = std::max(r[i].max_residual, std::abs(x)); };
    bump(0, trilinear_btilde(u, v, u));
    bump(1, b_uvw + b_wvu);
    bump(2, b_uvw - (trilinear_ns(u, v, w) - trilinear_ns(w, v, u)));
    bump(3, trilinear_ns(u, v, v));
    bump(4, trilinear_ns(u, u, apply_stokes(u)));
  }
  return r;
}

BoundRatios bound_ratios(const BasisPtr& basis, int samples, std::uint64_t seed) {
  BoundRatios b;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const auto u = random_field(basis, rng);
    const auto v = random_field(basis, rng);
    const auto w = random_field(basis, rng);
    b.btilde = std::max(b.btilde, btilde_bound_ratio(u, v, w));
    b.ns = std::max(b.ns, ns_bound_ratio(u, v, w));
  }
  return b;
}

namespace {

// Basis function j and its two partial derivatives at grid point (x1, x2).
struct ModeSample {
  double f[2];
  double d1[2];
  double d2[2];
};

ModeSample evaluate_mode(const LatticeMode& m, double L, double x1, double x2) {
  const double kappa = 2.0 * std::numbers::pi / L;
  const double phase = kappa * (m.k[0] * x1 + m.k[1] * x2);
  const double c = std::cos(phase), s = std::sin(phase);
  const double val = m.parity == Parity::cos ? c : s;
  const double dval = m.parity == Parity::cos ? -s : c;
  ModeSample out{};
  for (int i = 0; i < 2; ++i) {
    out.f[i] = std::numbers::sqrt2 * m.pol[i] * val;
    out.d1[i] = std::numbers::sqrt2 * m.pol[i] * dval * kappa * m.k[0];
    out.d2[i] = std::numbers::sqrt2 * m.pol[i] * dval * kappa * m.k[1];
  }
  return out;
}

}  // namespace

std::vector<double> weak_stokes_solve(const SpectralField& v, double alpha) {
  const auto& basis = v.basis();
  const int n = basis.size();
  const int G = basis.grid_size();
  const double L = basis.length();
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  std::vector<ModeSample> vals(static_cast<std::size_t>(n));
  const double w = 1.0 / (static_cast<double>(G) * G);
  for (int i1 = 0; i1 < G; ++i1) {
    for (int i2 = 0; i2 < G; ++i2) {
      const double x1 = L * i1 / G, x2 = L * i2 / G;
      double vf[2] = {0.0, 0.0};
      for (int j = 0; j < n; ++j) {
        vals[j] = evaluate_mode(basis.mode(j), L, x1, x2);
        vf[0] += v[j] * vals[j].f[0];
        vf[1] += v[j] * vals[j].f[1];
      }
      for (int a = 0; a < n; ++a) {
        const auto& ea = vals[a];
        rhs(a) += w * (vf[0] * ea.f[0] + vf[1] * ea.f[1]);
        for (int b = 0; b < n; ++b) {
          const auto& eb = vals[b];
          mass(a, b) += w * (ea.f[0] * eb.f[0] + ea.f[1] * eb.f[1]);
          stiff(a, b) += w * (ea.d1[0] * eb.d1[0] + ea.d1[1] * eb.d1[1] + ea.d2[0] * eb.d2[0] +
                              ea.d2[1] * eb.d2[1]);
        }
      }
    }
  }
  const Eigen::MatrixXd lhs = mass + alpha * alpha * stiff;
  const Eigen::VectorXd c = lhs.ldlt().solve(rhs);
  return {c.data(), c.data() + n};
}

std::vector<PropertyResult> filter_identities(const BasisPtr& basis,
                                              const std::vector<double>& alphas, int samples,
                                              std::uint64_t seed, double tolerance) {
  std::vector<PropertyResult> r = {
      {"filter_apply_roundtrip", 0.0, tolerance, 0},
      {"apply_filter_roundtrip", 0.0, tolerance, 0},
      {"filter_weak_stokes_solve", 0.0, tolerance, 0},
  };
  std::mt19937_64 rng(seed);
  for (double alpha : alphas) {
    const FilterScale s(alpha);
    for (int k = 0; k < samples; ++k) {
      const auto v = random_field(basis, rng);
      const auto u = helmholtz_filter(v, s);
      const auto back = helmholtz_apply(u, s);
      const auto again = helmholtz_filter(helmholtz_apply(v, s), s);
      const auto dense = weak_stokes_solve(v, alpha);
      for (int j = 0; j < v.size(); ++j) {
        r[0].max_residual = std::max(r[0].max_residual, std::abs(again[j] - v[j]));
        r[1].max_residual = std::max(r[1].max_residual, std::abs(back[j] - v[j]));
        r[2].max_residual = std::max(r[2].max_residual, std::abs(dense[j] - u[j]));
      }
      for (auto& p : r) ++p.samples;
    }
  }
  return r;
}

MonotonicitySweep monotonicity_sweep(const BasisPtr& basis, double alpha, double nu,
                                     const NoiseModel& model, double kappa, int pairs,
                                     std::uint64_t seed, double tolerance) {
  MonotonicitySweep m;
  m.pairs = pairs;
  m.kappa = kappa;
  m.s2 = validate_s2(model, nu, *basis);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_amp(std::log(0.1), std::log(10.0));
  m.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < pairs; ++k) {
    const auto u1 = random_field(basis, rng, std::exp(log_amp(rng)));
    const auto u2 = random_field(basis, rng, std::exp(log_amp(rng)));
    m.min_gap = std::min(m.min_gap, monotonicity_gap(u1, u2, alpha, nu, model, kappa).gap);
  }
  if (!m.s2.monotonicity_ok) {
    m.status = CheckStatus::hypothesis_not_satisfied;
  } else {
    m.status = m.min_gap >= -tolerance ? CheckStatus::holds : CheckStatus::violated;
  }
  return m;
}

}  // namespace nsalpha
