#ifndef NSALPHA_INTEGRATOR_HPP
#define NSALPHA_INTEGRATOR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsalpha/noise.hpp"
#include "nsalpha/operators.hpp"
#include "nsalpha/spectral_basis.hpp"

namespace nsalpha {

struct SimConfig {
  double L = 0.0;
  double nu = 0.0;
  int N = 0;
  double alpha = 0.0;
  double T = 0.0;
  double dt = 0.0;
  int grid_size = 0;
  NoiseModel noise;
  std::uint64_t seed = 0;
  int p_moment = 1;
  /// Test hook: drop B~ from the drift (Stokes / Ornstein-Uhlenbeck dynamics).
  bool nonlinear = true;
  /// Keep (v, u_bar) every this many steps in the trajectory; 0 keeps none.
  int snapshot_stride = 0;

  /// Number of time steps, round(T / dt).
  int steps() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Galerkin unknowns at one time: v = (I + alpha^2 A) u_bar.
struct GalerkinState {
  double t = 0.0;
  SpectralField v;
  SpectralField u_bar;
  double alpha = 0.0;
};

/// Per-time-point scalar diagnostics, one entry per recorded time.
struct DiagnosticSeries {
  std::vector<double> ubar_l2_sq;          // ||u_bar||^2
  std::vector<double> ubar_alpha_sq;       // ||u_bar||_alpha^2
  std::vector<double> grad_ubar_alpha_sq;  // ||grad u_bar||_alpha^2
  std::vector<double> A_ubar_alpha_sq;     // ||A u_bar||_alpha^2
  std::vector<double> v_sq;                // ||v||^2
  std::vector<double> grad_v_sq;           // ||grad v||^2
  std::vector<double> Av_sq;               // ||A v||^2
  std::vector<double> ubar_l4_4;           // ||u_bar||_{L^4}^4
  std::vector<double> v_l4_4;              // ||v||_{L^4}^4
  std::vector<double> drift_sq;            // ||R(u_bar)||^2
  std::vector<double> noise_sq;            // ||g(u_bar) dW||^2 over the step (0 at the last time)

  std::size_t size() const { return ubar_alpha_sq.size(); }
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> v;
  std::vector<double> u_bar;
};

struct Trajectory {
  double dt = 0.0;
  double alpha = 0.0;
  std::vector<double> times;
  DiagnosticSeries diagnostics;
  std::vector<Snapshot> snapshots;
};

/// Non-finite state during time stepping.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(int step, double last_energy);
  int step() const { return step_; }
  double last_finite_energy() const { return last_energy_; }

 private:
  int step_;
  double last_energy_;
};

/// u_bar = P_N u0 (u0 may live on any prefix-compatible basis), v = (I + alpha^2 A) u_bar.
GalerkinState initial_state(const SpectralField& u0, const BasisPtr& basis, double alpha);
GalerkinState initial_state(const SpectralField& u0, double alpha);

/// R(u_bar) = nu A v + B~(u_bar, v); the nonlinear part is skipped when nonlinear == false.
SpectralField drift_R(const GalerkinState& state, double nu, bool nonlinear = true);

/// One semi-implicit Euler-Maruyama step:
///   v'_j = (v_j - dt B~(u_bar, v)_j + (g(u_bar) dW)_j) / (1 + nu dt mu_j),
///   u_bar' = (I + alpha^2 A)^{-1} v'.
GalerkinState step(const GalerkinState& state, const SimConfig& cfg, std::span<const double> dW,
                   int step_index = 0);
GalerkinState step(const GalerkinState& state, const SimConfig& cfg, const WienerIncrement& inc,
                   int step_index = 0);

/// Integrate from t = 0 to T driven by the leading cfg.N coordinates of path.
Trajectory run(const SimConfig& cfg, const SpectralField& u0, const WienerPath& path);
/// Integrate with a path sampled from NoiseStream(cfg.seed).
Trajectory run(const SimConfig& cfg, const SpectralField& u0);

}  // namespace nsalpha

#endif  // NSALPHA_INTEGRATOR_HPP
