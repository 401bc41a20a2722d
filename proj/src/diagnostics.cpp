#include "nsalpha/diagnostics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nsalpha/operators.hpp"

namespace nsalpha {

namespace {

double max_pow(const std::vector<double>& xs, int p) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::pow(x, p));
  return m;
}

// Left-endpoint rectangle rule over the recorded times.
template <class F>
double left_rule(std::size_t n_points, double dt, F&& f) {
  double acc = 0.0;
  for (std::size_t n = 0; n + 1 < n_points; ++n) acc += dt * f(n);
  return acc;
}

}  // namespace

MomentFunctionals moment_functionals(const Trajectory& traj, int p, double alpha) {
  if (p < 1) throw std::invalid_argument("moment exponent p must be >= 1");
  if (std::abs(alpha - traj.alpha) > 1e-14 * std::max(1.0, alpha)) {
    throw std::invalid_argument("moment_functionals: alpha does not match the trajectory");
  }
  const auto& d = traj.diagnostics;
  const std::size_t n = d.size();
  if (n == 0 || d.grad_ubar_alpha_sq.size() != n || d.A_ubar_alpha_sq.size() != n ||
      d.v_sq.size() != n || d.grad_v_sq.size() != n || d.Av_sq.size() != n) {
    throw std::invalid_argument("moment_functionals: trajectory is missing diagnostic series");
  }
  MomentFunctionals m;
  m.p = p;
  m.sup_ubar_alpha_2p = max_pow(d.ubar_alpha_sq, p);
  m.int_dissipation_p = left_rule(n, traj.dt, [&](std::size_t i) {
    return std::pow(d.ubar_alpha_sq[i], p - 1) * d.grad_ubar_alpha_sq[i];
  });
  m.sup_v_2p = max_pow(d.v_sq, p);
  m.sup_grad_ubar_alpha_2p = max_pow(d.grad_ubar_alpha_sq, p);
  m.int_A_ubar_alpha_sq = left_rule(n, traj.dt, [&](std::size_t i) { return d.A_ubar_alpha_sq[i]; });
  m.sup_grad_v_2p = max_pow(d.grad_v_sq, p);
  m.int_Av_sq = left_rule(n, traj.dt, [&](std::size_t i) { return d.Av_sq[i]; });
  return m;
}

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::holds: return "holds";
    case CheckStatus::violated: return "violated";
    case CheckStatus::hypothesis_not_satisfied: return "hypothesis not satisfied";
  }
  return "unknown";
}

NormComparison calc4_check(const GalerkinState& state, double mu_N) {
  if (!(mu_N > 0.0)) throw std::invalid_argument("calc4_check: mu_N must be positive");
  NormComparison r;
  const FilterScale s(state.alpha);
  const auto norm = alpha_norm_sq(state.u_bar, s);
  r.v_norm = std::sqrt(state.v.l2_norm_sq());
  r.bound = std::sqrt(2.0 * norm.total);
  r.grad_v_norm = std::sqrt(grad_norm_sq(state.v));
  r.grad_bound = std::sqrt(2.0 * (norm.grad_l2_sq + norm.alpha_sq * stokes_norm_sq(state.u_bar)));
  if (state.alpha > (1.0 + 1e-12) / std::sqrt(mu_N)) return r;
  r.status = r.v_norm <= r.bound + 1e-10 ? CheckStatus::holds : CheckStatus::violated;
  r.gradient_status =
      r.grad_v_norm <= r.grad_bound + 1e-10 ? CheckStatus::holds : CheckStatus::violated;
  return r;
}

MonotonicityReport monotonicity_gap(const SpectralField& u1_bar, const SpectralField& u2_bar,
                                    double alpha, double nu, const NoiseModel& model,
                                    double kappa) {
  require_same_basis(u1_bar, u2_bar);
  if (!(nu > 0.0)) throw std::invalid_argument("monotonicity_gap: nu must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("monotonicity_gap: kappa must be positive");
  const FilterScale s(alpha);
  const auto s2 = validate_s2(model, nu, u1_bar.basis());

  const auto v1 = helmholtz_apply(u1_bar, s);
  const auto v2 = helmholtz_apply(u2_bar, s);
  const auto w = u1_bar - u2_bar;
  const auto wn = alpha_norm_sq(w, s);
  const double viscous = nu * (wn.grad_l2_sq + wn.alpha_sq * stokes_norm_sq(w));
  const double convective = trilinear_btilde(u1_bar, v1, w) - trilinear_btilde(u2_bar, v2, w);
  const double weight = kappa / (nu * nu * nu) * l4_norm4(u2_bar) * wn.l2_sq;
  const double noise = hs_distance_sq_l2(model, u1_bar, u2_bar);

  MonotonicityReport r;
  r.gap = viscous + convective + weight - noise;
  r.kappa_used = kappa;
  r.cp_used = s2.poincare;
  r.hypothesis_satisfied = s2.monotonicity_ok;
  return r;
}

double required_kappa(const SpectralField& u2_bar, double alpha, double nu,
                      const NoiseModel& model) {
  const auto& basis = u2_bar.basis_ptr();
  const int n = basis->size();
  const double a2 = alpha * alpha;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  SpectralField e(basis);
  for (int i = 0; i < n; ++i) {
    const double mu = basis->mu(i);
    e[i] = 1.0 + a2 * mu;
    const auto col = nonlinear_btilde(u2_bar, e);
    e[i] = 0.0;
    for (int j = 0; j < n; ++j) q(j, i) += col[j];
    double lam = 0.0;
    if (model.kind() != NoiseKind::additive) lam = model.lambda()[static_cast<std::size_t>(i)];
    q(i, i) += nu * mu * (1.0 + a2 * mu) - lam * lam;
  }
  const Eigen::MatrixXd sym = 0.5 * (q + q.transpose());
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(sym, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
  if (lmin >= 0.0) return 0.0;
  const double l4 = l4_norm4(u2_bar);
  if (l4 <= 0.0) return std::numeric_limits<double>::infinity();
  return -lmin * nu * nu * nu / l4;
}

KappaCalibration calibrate_kappa(const BasisPtr& basis, double alpha, double nu,
                                 const NoiseModel& model, int samples, std::uint64_t seed,
                                 double amp_lo, double amp_hi, double safety) {
  if (samples < 1) throw std::invalid_argument("calibrate_kappa: need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_amp(std::log(amp_lo), std::log(amp_hi));
  KappaCalibration c;
  c.samples = samples;
  c.safety = safety;
  for (int s = 0; s < samples; ++s) {
    const auto u2 = random_field(basis, rng, std::exp(log_amp(rng)));
    c.max_required = std::max(c.max_required, required_kappa(u2, alpha, nu, model));
  }
  c.kappa = safety * c.max_required;
  return c;
}

std::vector<double> rho_weight(const Trajectory& traj_z, double kappa, double nu) {
  const auto& l4 = traj_z.diagnostics.v_l4_4;
  if (l4.empty() || l4.size() != traj_z.times.size()) {
    throw std::invalid_argument("rho_weight: trajectory is missing the L^4 series");
  }
  const double c = 2.0 * kappa / (nu * nu * nu);
  std::vector<double> rho(l4.size(), 0.0);
  for (std::size_t n = 1; n < l4.size(); ++n) rho[n] = rho[n - 1] + c * traj_z.dt * l4[n - 1];
  return rho;
}

SpectralField random_field(const BasisPtr& basis, std::mt19937_64& rng, double amplitude) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField u(basis);
  const double scale = amplitude / std::sqrt(static_cast<double>(basis->size()));
  for (int j = 0; j < u.size(); ++j) u[j] = scale * normal(rng);
  return u;
}

double btilde_bound_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  const double denom = std::pow(l4_norm4(u), 0.25) * std::sqrt(grad_norm_sq(v)) *
                       std::pow(w.l2_norm_sq(), 0.25) * std::pow(grad_norm_sq(w), 0.25);
  return denom > 0.0 ? std::abs(trilinear_btilde(u, v, w)) / denom : 0.0;
}

double ns_bound_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  const double denom = std::sqrt(u.l2_norm_sq()) * std::sqrt(grad_norm_sq(v)) *
                       std::pow(w.l2_norm_sq(), 0.25) * std::pow(stokes_norm_sq(w), 0.25);
  return denom > 0.0 ? std::abs(trilinear_ns(u, v, w)) / denom : 0.0;
}

}  // namespace nsalpha
