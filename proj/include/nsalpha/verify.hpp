#ifndef NSALPHA_VERIFY_HPP
#define NSALPHA_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nsalpha/diagnostics.hpp"
#include "nsalpha/noise.hpp"
#include "nsalpha/spectral_basis.hpp"

namespace nsalpha {

struct PropertyResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  int samples = 0;
  bool passed() const { return max_residual < tolerance; }
};

/// Maxima over random triples of
///   |b~(u,v,u)|, |b~(u,v,w) + b~(w,v,u)|,
///   |b~(u,v,w) - ([u.grad]v,w) + ([w.grad]v,u)|,
///   |([u.grad]v,v)|, |([z.grad]z, Az)|.
std::vector<PropertyResult> trilinear_identities(const BasisPtr& basis, int samples,
                                                 std::uint64_t seed, double tolerance = 1e-9);

/// Largest observed constants in the L^4 / H^1 bounds for b~ and the NS form.
struct BoundRatios {
  double btilde = 0.0;
  double ns = 0.0;
};
BoundRatios bound_ratios(const BasisPtr& basis, int samples, std::uint64_t seed);

/// Dense Galerkin solve of alpha^2 (grad u, grad phi) + (u, phi) = (v, phi)
/// with matrices assembled by grid quadrature of directly evaluated basis
/// functions.  Returns the coefficients of u.
std::vector<double> weak_stokes_solve(const SpectralField& v, double alpha);

/// Filter/apply round trips and agreement with the dense weak solve, each
/// over the given alphas.
std::vector<PropertyResult> filter_identities(const BasisPtr& basis,
                                              const std::vector<double>& alphas, int samples,
                                              std::uint64_t seed, double tolerance = 1e-12);

struct MonotonicitySweep {
  CheckStatus status = CheckStatus::hypothesis_not_satisfied;
  double min_gap = 0.0;
  int pairs = 0;
  double kappa = 0.0;
  S2Report s2;
};

/// Gap over random pairs with log-uniform amplitudes in [0.1, 10].  The gap
/// is evaluated even when the L_g hypothesis fails; status then reports it.
MonotonicitySweep monotonicity_sweep(const BasisPtr& basis, double alpha, double nu,
                                     const NoiseModel& model, double kappa, int pairs,
                                     std::uint64_t seed, double tolerance = 1e-10);

}  // namespace nsalpha

#endif  // NSALPHA_VERIFY_HPP
