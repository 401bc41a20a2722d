#include "nsalpha/integrator.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace nsalpha {

namespace {

[[noreturn]] void bad_config(const std::string& key, const std::string& why) {
  throw std::invalid_argument("SimConfig." + key + ": " + why);
}

bool all_finite(const SpectralField& f) {
  for (double c : f.coeffs()) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

void record(DiagnosticSeries& d, const GalerkinState& s, const SpectralField& drift,
            double noise_sq) {
  const double a2 = s.alpha * s.alpha;
  const auto& u = s.u_bar;
  double l2 = 0.0, g2 = 0.0, a2sum = 0.0, a3sum = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double mu = u.basis().mu(j);
    const double c2 = u[j] * u[j];
    l2 += c2;
    g2 += mu * c2;
    a2sum += mu * mu * c2;
    a3sum += mu * mu * mu * c2;
  }
  d.ubar_l2_sq.push_back(l2);
  d.ubar_alpha_sq.push_back(l2 + a2 * g2);
  d.grad_ubar_alpha_sq.push_back(g2 + a2 * a2sum);
  d.A_ubar_alpha_sq.push_back(a2sum + a2 * a3sum);
  d.v_sq.push_back(s.v.l2_norm_sq());
  d.grad_v_sq.push_back(grad_norm_sq(s.v));
  d.Av_sq.push_back(stokes_norm_sq(s.v));
  d.ubar_l4_4.push_back(l4_norm4(u));
  d.v_l4_4.push_back(l4_norm4(s.v));
  d.drift_sq.push_back(drift.l2_norm_sq());
  d.noise_sq.push_back(noise_sq);
}

double alpha_energy(const GalerkinState& s) {
  return alpha_norm_sq(s.u_bar, FilterScale(s.alpha)).total;
}

// Shared by step() and run(): btilde is B~(u_bar, v) at the current state.
GalerkinState advance(const GalerkinState& s, const SimConfig& cfg, std::span<const double> dW,
                      const SpectralField& btilde, SpectralField* noise_out, int step_index) {
  const auto noise = g_apply(cfg.noise, s.u_bar, dW);
  GalerkinState next;
  next.alpha = s.alpha;
  next.t = s.t + cfg.dt;
  next.v = s.v;
  for (int j = 0; j < next.v.size(); ++j) {
    const double explicit_part = s.v[j] - cfg.dt * btilde[j] + noise[j];
    next.v[j] = explicit_part / (1.0 + cfg.nu * cfg.dt * s.v.basis().mu(j));
  }
  next.u_bar = helmholtz_filter(next.v, FilterScale(s.alpha));
  if (!all_finite(next.v) || !std::isfinite(alpha_energy(next))) {
    throw BlowUpError(step_index, alpha_energy(s));
  }
  if (noise_out) *noise_out = noise;
  return next;
}

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

BlowUpError::BlowUpError(int step, double last_energy)
    : std::runtime_error("numerical blow-up at step " + std::to_string(step) +
                         " (last finite ||u_bar||_alpha^2 = " + shortest(last_energy) + ")"),
      step_(step),
      last_energy_(last_energy) {}

int SimConfig::steps() const { return static_cast<int>(std::llround(T / dt)); }

void SimConfig::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) bad_config("L", "must be positive");
  if (!(nu > 0.0) || !std::isfinite(nu)) bad_config("nu", "must be positive");
  if (N < 1) bad_config("N", "must be >= 1");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) bad_config("alpha", "must be >= 0");
  if (!(T > 0.0) || !std::isfinite(T)) bad_config("T", "must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) bad_config("dt", "must be positive");
  if (dt > T * (1.0 + 1e-12)) bad_config("dt", "must not exceed T");
  if (std::abs(steps() * dt - T) > 1e-9 * T) bad_config("dt", "T must be an integer multiple of dt");
  if (grid_size <= 0 || grid_size % 2 != 0) bad_config("grid_size", "must be a positive even integer");
  if (noise.size() != N) {
    bad_config("noise", "has " + std::to_string(noise.size()) + " coordinates, expected N = " +
                            std::to_string(N));
  }
  if (p_moment < 1) bad_config("p_moment", "must be >= 1");
  if (snapshot_stride < 0) bad_config("snapshot_stride", "must be >= 0");
}

GalerkinState initial_state(const SpectralField& u0, const BasisPtr& basis, double alpha) {
  GalerkinState s;
  s.t = 0.0;
  s.alpha = alpha;
  s.u_bar = change_basis(u0, basis);
  s.v = helmholtz_apply(s.u_bar, FilterScale(alpha));
  return s;
}

GalerkinState initial_state(const SpectralField& u0, double alpha) {
  return initial_state(u0, u0.basis_ptr(), alpha);
}

SpectralField drift_R(const GalerkinState& state, double nu, bool nonlinear) {
  SpectralField r = apply_stokes(state.v);
  r *= nu;
  if (nonlinear) r += nonlinear_btilde(state.u_bar, state.v);
  return r;
}

GalerkinState step(const GalerkinState& state, const SimConfig& cfg, std::span<const double> dW,
                   int step_index) {
  const SpectralField btilde =
      cfg.nonlinear ? nonlinear_btilde(state.u_bar, state.v) : SpectralField(state.v.basis_ptr());
  return advance(state, cfg, dW, btilde, nullptr, step_index);
}

GalerkinState step(const GalerkinState& state, const SimConfig& cfg, const WienerIncrement& inc,
                   int step_index) {
  if (std::abs(inc.dt - cfg.dt) > 1e-15 * cfg.dt) {
    throw std::invalid_argument("Wiener increment dt does not match the configured dt");
  }
  return step(state, cfg, std::span<const double>(inc.dW), step_index);
}

Trajectory run(const SimConfig& cfg, const SpectralField& u0, const WienerPath& path) {
  cfg.validate();
  const int n_steps = cfg.steps();
  if (path.steps() < n_steps) {
    throw std::invalid_argument("Wiener path has " + std::to_string(path.steps()) +
                                " steps, run needs " + std::to_string(n_steps));
  }
  if (std::abs(path.dt() - cfg.dt) > 1e-15 * cfg.dt) {
    throw std::invalid_argument("Wiener path dt does not match the configured dt");
  }
  const auto basis = StokesBasis::build(cfg.L, cfg.N, cfg.grid_size);
  auto state = initial_state(u0, basis, cfg.alpha);

  Trajectory traj;
  traj.dt = cfg.dt;
  traj.alpha = cfg.alpha;
  traj.times.reserve(static_cast<std::size_t>(n_steps) + 1);

  auto keep = [&](int n, const GalerkinState& s) {
    if (cfg.snapshot_stride > 0 && (n % cfg.snapshot_stride == 0 || n == n_steps)) {
      traj.snapshots.push_back({s.t, std::vector<double>(s.v.coeffs().begin(), s.v.coeffs().end()),
                                std::vector<double>(s.u_bar.coeffs().begin(), s.u_bar.coeffs().end())});
    }
  };

  SpectralField noise(basis);
  for (int n = 0; n < n_steps; ++n) {
    const SpectralField btilde =
        cfg.nonlinear ? nonlinear_btilde(state.u_bar, state.v) : SpectralField(basis);
    SpectralField drift = apply_stokes(state.v);
    drift *= cfg.nu;
    drift += btilde;
    auto next = advance(state, cfg, path.increment(n, cfg.N), btilde, &noise, n);
    traj.times.push_back(n * cfg.dt);
    record(traj.diagnostics, state, drift, noise.l2_norm_sq());
    keep(n, state);
    state = std::move(next);
    state.t = (n + 1) * cfg.dt;
  }
  traj.times.push_back(n_steps * cfg.dt);
  record(traj.diagnostics, state, drift_R(state, cfg.nu, cfg.nonlinear), 0.0);
  keep(n_steps, state);
  return traj;
}

Trajectory run(const SimConfig& cfg, const SpectralField& u0) {
  cfg.validate();
  const auto path = WienerPath::sample(NoiseStream(cfg.seed), cfg.steps(), cfg.dt, cfg.N);
  return run(cfg, u0, path);
}

}  // namespace nsalpha
