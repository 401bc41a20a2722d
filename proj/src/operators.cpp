#include "nsalpha/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nsalpha {

namespace {

// Derivatives are applied to these as i*kappa multipliers.
struct GridSpectrum {
  const FourierGrid* grid;
  std::array<std::vector<cplx>, 2> hat;
};

GridSpectrum spectrum_of(const SpectralField& u, const FourierGrid& grid) {
  return {&grid, fourier_coefficients(u, grid)};
}

// Lattice wavenumber stored at flat index i (only |k| < G/2 is ever populated).
std::array<int, 2> lattice_at(const FourierGrid& grid, std::size_t i) {
  const int g = grid.size();
  const int a = static_cast<int>(i / static_cast<std::size_t>(g));
  const int b = static_cast<int>(i % static_cast<std::size_t>(g));
  return {a <= g / 2 ? a : a - g, b <= g / 2 ? b : b - g};
}

std::vector<double> to_grid(std::vector<cplx> hat, const FourierGrid& grid) {
  grid.backward(hat);
  std::vector<double> out(hat.size());
  for (std::size_t i = 0; i < hat.size(); ++i) out[i] = hat[i].real();
  return out;
}

// d/dx_axis of component comp, sampled.
std::vector<double> derivative(const GridSpectrum& s, int comp, int axis, double length) {
  const double scale = 2.0 * std::numbers::pi / length;
  std::vector<cplx> hat = s.hat[comp];
  for (std::size_t i = 0; i < hat.size(); ++i) {
    if (hat[i] == cplx(0.0)) continue;
    const auto k = lattice_at(*s.grid, i);
    hat[i] *= cplx(0.0, scale * k[axis]);
  }
  return to_grid(std::move(hat), *s.grid);
}

std::vector<double> curl_on_grid(const GridSpectrum& s, double length) {
  const double scale = 2.0 * std::numbers::pi / length;
  std::vector<cplx> hat(s.hat[0].size());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto k = lattice_at(*s.grid, i);
    hat[i] = cplx(0.0, scale * k[0]) * s.hat[1][i] - cplx(0.0, scale * k[1]) * s.hat[0][i];
  }
  return to_grid(std::move(hat), *s.grid);
}

SpectralField scaled(const SpectralField& u, auto&& factor) {
  SpectralField out = u;
  for (int j = 0; j < out.size(); ++j) out[j] *= factor(u.basis().mu(j));
  return out;
}

}  // namespace

FilterScale::FilterScale(double a) : alpha(a) {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw std::invalid_argument("filter scale alpha must be finite and >= 0");
  }
}

SpectralField apply_stokes(const SpectralField& u) {
  return scaled(u, [](double mu) { return mu; });
}

SpectralField apply_stokes_power(const SpectralField& u, double s) {
  return scaled(u, [s](double mu) { return std::pow(mu, s); });
}

SpectralField helmholtz_apply(const SpectralField& u, FilterScale s) {
  const double a2 = s.sq();
  return scaled(u, [a2](double mu) { return 1.0 + a2 * mu; });
}

SpectralField helmholtz_filter(const SpectralField& v, FilterScale s) {
  const double a2 = s.sq();
  SpectralField out = v;
  for (int j = 0; j < out.size(); ++j) out[j] = v[j] / (1.0 + a2 * v.basis().mu(j));
  return out;
}

double grad_norm_sq(const SpectralField& u) {
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) acc += u.basis().mu(j) * u[j] * u[j];
  return acc;
}

double stokes_norm_sq(const SpectralField& u) {
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double mu = u.basis().mu(j);
    acc += mu * mu * u[j] * u[j];
  }
  return acc;
}

AlphaNormReport alpha_norm_sq(const SpectralField& u, FilterScale s) {
  AlphaNormReport r;
  r.l2_sq = u.l2_norm_sq();
  r.grad_l2_sq = grad_norm_sq(u);
  r.alpha_sq = s.sq();
  r.total = r.l2_sq + r.alpha_sq * r.grad_l2_sq;
  return r;
}

SpectralField nonlinear_btilde(const SpectralField& u, const SpectralField& v) {
  require_same_basis(u, v);
  const auto& basis = u.basis();
  const auto& grid = basis.grid();
  const auto uphys = to_physical(u, grid);
  const auto omega = curl_on_grid(spectrum_of(v, grid), basis.length());
  // -u x omega = (-u2 omega, u1 omega)
  PhysicalField prod(grid.size());
  for (std::size_t i = 0; i < grid.points(); ++i) {
    prod.comp[0][i] = -uphys.comp[1][i] * omega[i];
    prod.comp[1][i] = uphys.comp[0][i] * omega[i];
  }
  return to_spectral(prod, u.basis_ptr());
}

double trilinear_btilde(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  require_same_basis(u, w);
  return inner(nonlinear_btilde(u, v), w);
}

SpectralField advection(const SpectralField& u, const SpectralField& v) {
  require_same_basis(u, v);
  const auto& basis = u.basis();
  const auto& grid = basis.grid();
  const auto uphys = to_physical(u, grid);
  const auto spec = spectrum_of(v, grid);
  PhysicalField prod(grid.size());
  for (int c = 0; c < 2; ++c) {
    const auto d1 = derivative(spec, c, 0, basis.length());
    const auto d2 = derivative(spec, c, 1, basis.length());
    for (std::size_t i = 0; i < grid.points(); ++i) {
      prod.comp[c][i] = uphys.comp[0][i] * d1[i] + uphys.comp[1][i] * d2[i];
    }
  }
  return to_spectral(prod, u.basis_ptr());
}

double trilinear_ns(const SpectralField& u, const SpectralField& v, const SpectralField& w) {
  require_same_basis(u, w);
  return inner(advection(u, v), w);
}

double l4_norm4(const SpectralField& u) {
  const auto& grid = u.basis().quartic_grid();
  const auto f = to_physical(u, grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const double s = f.comp[0][i] * f.comp[0][i] + f.comp[1][i] * f.comp[1][i];
    acc += s * s;
  }
  return acc / static_cast<double>(grid.points());
}

std::vector<double> vorticity(const SpectralField& u) {
  return curl_on_grid(spectrum_of(u, u.basis().grid()), u.basis().length());
}

double max_divergence(const SpectralField& u) {
  const auto& grid = u.basis().grid();
  const auto spec = spectrum_of(u, grid);
  const double scale = 2.0 * std::numbers::pi / u.basis().length();
  std::vector<cplx> hat(grid.points());
  for (std::size_t i = 0; i < hat.size(); ++i) {
    const auto k = lattice_at(grid, i);
    hat[i] = cplx(0.0, scale * k[0]) * spec.hat[0][i] + cplx(0.0, scale * k[1]) * spec.hat[1][i];
  }
  const auto div = to_grid(std::move(hat), grid);
  double m = 0.0;
  for (double d : div) m = std::max(m, std::abs(d));
  return m;
}

}  // namespace nsalpha
