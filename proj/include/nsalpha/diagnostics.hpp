#ifndef NSALPHA_DIAGNOSTICS_HPP
#define NSALPHA_DIAGNOSTICS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "nsalpha/integrator.hpp"
#include "nsalpha/noise.hpp"
#include "nsalpha/spectral_basis.hpp"

namespace nsalpha {

/// Pathwise a-priori-estimate functionals of one trajectory.  Suprema are
/// maxima over the recorded times; integrals use the left-endpoint rectangle
/// rule at the trajectory dt.
struct MomentFunctionals {
  int p = 1;
  double sup_ubar_alpha_2p = 0.0;        // sup_t ||u_bar||_alpha^{2p}
  double int_dissipation_p = 0.0;        // int ||u_bar||_alpha^{2(p-1)} ||grad u_bar||_alpha^2
  double sup_v_2p = 0.0;                 // sup_t ||v||^{2p}
  double sup_grad_ubar_alpha_2p = 0.0;   // sup_t ||grad u_bar||_alpha^{2p}
  double int_A_ubar_alpha_sq = 0.0;      // int ||A u_bar||_alpha^2
  double sup_grad_v_2p = 0.0;            // sup_t ||grad v||^{2p}
  double int_Av_sq = 0.0;                // int ||A v||^2
};

MomentFunctionals moment_functionals(const Trajectory& traj, int p, double alpha);

enum class CheckStatus { holds, violated, hypothesis_not_satisfied };

const char* to_string(CheckStatus s);

/// ||v|| <= sqrt2 ||u_bar||_alpha and ||grad v|| <= sqrt2 ||grad u_bar||_alpha,
/// valid when alpha <= mu_N^{-1/2}.
struct NormComparison {
  CheckStatus status = CheckStatus::hypothesis_not_satisfied;
  CheckStatus gradient_status = CheckStatus::hypothesis_not_satisfied;
  double v_norm = 0.0;
  double bound = 0.0;
  double grad_v_norm = 0.0;
  double grad_bound = 0.0;
};

NormComparison calc4_check(const GalerkinState& state, double mu_N);

struct MonotonicityReport {
  double gap = 0.0;
  double kappa_used = 0.0;
  double cp_used = 0.0;
  bool hypothesis_satisfied = false;
};

/// Left side of the local monotonicity inequality for w = u1_bar - u2_bar:
///   nu ||grad w||_alpha^2 + b~(u1, v1, w) - b~(u2, v2, w)
///   + (kappa/nu^3) ||u2_bar||_{L^4}^4 ||w||^2 - ||g(u1_bar) - g(u2_bar)||_HS^2,
/// with v_i = (I + alpha^2 A) u_i_bar.  The gap is computed regardless of the
/// L_g hypothesis; hypothesis_satisfied reports it.
MonotonicityReport monotonicity_gap(const SpectralField& u1_bar, const SpectralField& u2_bar,
                                    double alpha, double nu, const NoiseModel& model,
                                    double kappa);

/// Smallest kappa making the gap non-negative for every w at this u2_bar
/// (exact minimum eigenvalue of the gap's quadratic form in w).
double required_kappa(const SpectralField& u2_bar, double alpha, double nu,
                      const NoiseModel& model);

struct KappaCalibration {
  double kappa = 0.0;         // frozen value = safety * max_required
  double max_required = 0.0;
  int samples = 0;
  double safety = 0.0;
};

/// Randomized search over u2_bar with log-uniform amplitudes in [amp_lo, amp_hi].
KappaCalibration calibrate_kappa(const BasisPtr& basis, double alpha, double nu,
                                 const NoiseModel& model, int samples, std::uint64_t seed,
                                 double amp_lo = 0.1, double amp_hi = 10.0, double safety = 2.0);

/// rho(t_n) = (2 kappa / nu^3) sum_{m<n} dt ||z(t_m)||_{L^4}^4 over the
/// trajectory's v series; rho(0) = 0.
std::vector<double> rho_weight(const Trajectory& traj_z, double kappa, double nu);

/// Random field with i.i.d. normal coefficients scaled to expected L^2 norm amplitude.
SpectralField random_field(const BasisPtr& basis, std::mt19937_64& rng, double amplitude = 1.0);

/// |b~(u,v,w)| / (||u||_{L^4} ||grad v|| ||w||^{1/2} ||grad w||^{1/2}).
double btilde_bound_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w);
/// |((u.grad)v, w)| / (||u|| ||grad v|| ||w||^{1/2} ||A w||^{1/2}).
double ns_bound_ratio(const SpectralField& u, const SpectralField& v, const SpectralField& w);

}  // namespace nsalpha

#endif  // NSALPHA_DIAGNOSTICS_HPP
