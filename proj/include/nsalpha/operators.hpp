#ifndef NSALPHA_OPERATORS_HPP
#define NSALPHA_OPERATORS_HPP

#include "nsalpha/spectral_basis.hpp"

namespace nsalpha {

/// Filter length alpha >= 0 of the Helmholtz filter (I + alpha^2 A)^{-1}.
struct FilterScale {
  double alpha = 0.0;

  explicit FilterScale(double a);
  double sq() const { return alpha * alpha; }
};

/// ||u||_alpha^2 = ||u||^2 + alpha^2 ||grad u||^2, with its parts.
struct AlphaNormReport {
  double l2_sq = 0.0;
  double grad_l2_sq = 0.0;
  double alpha_sq = 0.0;
  double total = 0.0;
};

/// Stokes operator A: coefficient j scaled by mu_j.
SpectralField apply_stokes(const SpectralField& u);
/// Diagonal power A^s (s may be fractional or negative).
SpectralField apply_stokes_power(const SpectralField& u, double s);

/// (I + alpha^2 A) u.
SpectralField helmholtz_apply(const SpectralField& u, FilterScale s);
/// (I + alpha^2 A)^{-1} v, the differential filter.
SpectralField helmholtz_filter(const SpectralField& v, FilterScale s);

AlphaNormReport alpha_norm_sq(const SpectralField& u, FilterScale s);

/// ||grad u||^2 = sum mu_j c_j^2.
double grad_norm_sq(const SpectralField& u);
/// ||A u||^2 = sum mu_j^2 c_j^2.
double stokes_norm_sq(const SpectralField& u);

/// P_N Leray[-u x (curl v)] with the 2D convention
///   curl v = d1 v2 - d2 v1,   u x w := (u2 w, -u1 w).
/// Products are formed on the dealiased basis grid.
SpectralField nonlinear_btilde(const SpectralField& u, const SpectralField& v);

/// b~(u, v, w) = -(u x (curl v), w).
double trilinear_btilde(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// P_N Leray[(u . grad) v].
SpectralField advection(const SpectralField& u, const SpectralField& v);

/// ((u . grad) v, w).
double trilinear_ns(const SpectralField& u, const SpectralField& v, const SpectralField& w);

/// ||u||_{L^4}^4 = mean |u|^4, by quadrature on the basis's quartic grid.
double l4_norm4(const SpectralField& u);

/// Scalar vorticity d1 u2 - d2 u1 sampled on the basis grid.
std::vector<double> vorticity(const SpectralField& u);

/// max over the basis grid of |div u| computed spectrally.
double max_divergence(const SpectralField& u);

}  // namespace nsalpha

#endif  // NSALPHA_OPERATORS_HPP
