#ifndef NSALPHA_NOISE_HPP
#define NSALPHA_NOISE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nsalpha/spectral_basis.hpp"

namespace nsalpha {

enum class NoiseKind { additive, diagonal_multiplicative };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

/// Diagonal diffusion coefficient g acting on the truncated cylindrical
/// Wiener process W = sum_k beta_k e_k (noise space identified with H):
///   additive:                 (g(u) dW)_j = sigma_j dW_j
///   diagonal_multiplicative:  (g(u) dW)_j = (sigma_j + lambda_j c_j(u)) dW_j
class NoiseModel {
 public:
  NoiseModel() = default;

  /// sigma_j = sigma0 (mu_1/mu_j)^{s/2}, lambda_j = lambda0 (mu_1/mu_j)^{s/2}.
  /// With this normalization L_g = |lambda0|.  Requires s > 1.
  static NoiseModel decaying(NoiseKind kind, double sigma0, double lambda0, double decay_s,
                             const StokesBasis& basis);
  /// Explicit per-mode amplitudes (lambda ignored for additive).
  static NoiseModel from_vectors(NoiseKind kind, std::vector<double> sigma,
                                 std::vector<double> lambda, double decay_s = 0.0);
  /// g = 0 on m coordinates.
  static NoiseModel none(int m);

  NoiseKind kind() const { return kind_; }
  int size() const { return static_cast<int>(sigma_.size()); }
  std::span<const double> sigma() const { return sigma_; }
  std::span<const double> lambda() const { return lambda_; }
  double decay_s() const { return decay_s_; }
  bool is_zero() const;

  /// max_j |lambda_j| (0 for additive noise).
  double lipschitz() const;

 private:
  NoiseKind kind_ = NoiseKind::additive;
  std::vector<double> sigma_;
  std::vector<double> lambda_;
  double decay_s_ = 0.0;
};

/// Resolution-independent description of a decaying noise model; realized
/// on a concrete basis with NoiseModel::decaying.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::additive;
  double sigma0 = 0.0;
  double lambda0 = 0.0;
  double decay_s = 2.0;

  NoiseModel realize(const StokesBasis& basis) const {
    return NoiseModel::decaying(kind, sigma0, lambda0, decay_s, basis);
  }
};

/// Increments beta_k(t + dt) - beta_k(t), k = 1..M.
struct WienerIncrement {
  std::vector<double> dW;
  double dt = 0.0;
};

/// Counter-based Gaussian stream: the draw for (seed, step, coordinate) is a
/// pure function of the triple, so a length-M' sample is bit-identical to the
/// first M' coordinates of a length-M sample.
class NoiseStream {
 public:
  explicit NoiseStream(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

  /// Standard normal for (seed, step, coordinate).
  double standard_normal(std::uint64_t step, std::uint64_t coordinate) const;
  /// Uniform in (0, 1] for (seed, step, coordinate, lane).
  double uniform(std::uint64_t step, std::uint64_t coordinate, std::uint64_t lane) const;

 private:
  std::uint64_t seed_;
};

WienerIncrement sample_increment(const NoiseStream& stream, std::uint64_t step, double dt, int m);

/// A pre-sampled Wiener path: increments for steps 0..n_steps-1 on M
/// coordinates.  Runs at resolution N <= M consume the leading N coordinates.
class WienerPath {
 public:
  WienerPath() = default;
  static WienerPath sample(const NoiseStream& stream, int n_steps, double dt, int m);

  int steps() const { return steps_; }
  int coordinates() const { return coords_; }
  double dt() const { return dt_; }
  /// Leading m coordinates of the increment at step n.
  std::span<const double> increment(int n, int m) const;
  WienerIncrement increment_copy(int n, int m) const;

 private:
  int steps_ = 0;
  int coords_ = 0;
  double dt_ = 0.0;
  std::vector<double> data_;
};

/// g(u) dW as a spectral field.
SpectralField g_apply(const NoiseModel& model, const SpectralField& u, std::span<const double> dW);
SpectralField g_apply(const NoiseModel& model, const SpectralField& u, const WienerIncrement& inc);

/// ||g(u)||^2 in L_2(K, L^2) = sum_j (sigma_j + lambda_j c_j)^2.
double hs_norm_sq_l2(const NoiseModel& model, const SpectralField& u);
/// ||g(u)||^2 in L_2(K, H^1), H^1 normed by ||grad .||: sum_j mu_j (sigma_j + lambda_j c_j)^2.
double hs_norm_sq_h1(const NoiseModel& model, const SpectralField& u);
/// ||g(u) - g(v)||^2 in L_2(K, L^2).
double hs_distance_sq_l2(const NoiseModel& model, const SpectralField& u, const SpectralField& v);

struct S2Report {
  double lipschitz = 0.0;  // L_g
  double k1 = 0.0;
  double k2 = 0.0;
  double poincare = 0.0;   // C_P = mu_1^{-1/2}
  double threshold = 0.0;  // sqrt(nu) / (C_P sqrt 2)
  bool monotonicity_ok = false;
};

/// Lipschitz/growth constants of the model and the local-monotonicity
/// hypothesis L_g <= sqrt(nu)/(C_P sqrt 2).
///   K1^2 = 2 sum mu_k sigma_k^2,  K2^2 = 2 max_k mu_k lambda_k^2.
S2Report validate_s2(const NoiseModel& model, double nu, const StokesBasis& basis);

}  // namespace nsalpha

#endif  // NSALPHA_NOISE_HPP
