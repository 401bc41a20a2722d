#include "nsalpha/spectral_basis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <string>

namespace nsalpha {

namespace {

// FFTW's planner is not re-entrant; execution with new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::vector<LatticeMode> enumerate_half_lattice(double length, int radius) {
  std::vector<LatticeMode> out;
  const double scale = 2.0 * std::numbers::pi / length;
  for (int k1 = 0; k1 <= radius; ++k1) {
    for (int k2 = -radius; k2 <= radius; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const int n2 = k1 * k1 + k2 * k2;
      if (n2 > radius * radius) continue;
      const double norm = std::sqrt(static_cast<double>(n2));
      for (Parity p : {Parity::cos, Parity::sin}) {
        LatticeMode m;
        m.k = {k1, k2};
        m.mu = scale * scale * n2;
        m.pol = {-k2 / norm, k1 / norm};
        m.parity = p;
        out.push_back(m);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const LatticeMode& a, const LatticeMode& b) {
    if (a.norm_sq() != b.norm_sq()) return a.norm_sq() < b.norm_sq();
    if (a.k != b.k) return a.k < b.k;
    return a.parity == Parity::cos && b.parity == Parity::sin;
  });
  return out;
}

std::vector<LatticeMode> first_modes(double length, int n_modes) {
  for (int radius = 1;; ++radius) {
    auto all = enumerate_half_lattice(length, radius);
    if (static_cast<int>(all.size()) >= n_modes) {
      all.resize(static_cast<std::size_t>(n_modes));
      return all;
    }
  }
}

int kmax_of(const std::vector<LatticeMode>& modes) {
  int kmax = 0;
  for (const auto& m : modes) kmax = std::max({kmax, std::abs(m.k[0]), std::abs(m.k[1])});
  return kmax;
}

int even_above(int n) { return (n % 2 == 0) ? n + 2 : n + 1; }

}  // namespace

// ---------------------------------------------------------------------------
// FourierGrid

FourierGrid::FourierGrid(double length, int size) : length_(length), size_(size) {
  if (size <= 0) throw std::invalid_argument("grid size must be positive");
  std::vector<cplx> scratch(points());
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_2d(size, size, buf, buf, FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  backward_plan_ = fftw_plan_dft_2d(size, size, buf, buf, FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
}

FourierGrid::~FourierGrid() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

std::size_t FourierGrid::index(int k1, int k2) const {
  const int a = ((k1 % size_) + size_) % size_;
  const int b = ((k2 % size_) + size_) % size_;
  return static_cast<std::size_t>(a) * size_ + b;
}

void FourierGrid::forward(std::span<cplx> data) const {
  if (data.size() != points()) throw std::invalid_argument("FourierGrid::forward: size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
  const double scale = 1.0 / static_cast<double>(points());
  for (auto& z : data) z *= scale;
}

void FourierGrid::backward(std::span<cplx> data) const {
  if (data.size() != points()) throw std::invalid_argument("FourierGrid::backward: size mismatch");
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), buf, buf);
}

// ---------------------------------------------------------------------------
// StokesBasis

int StokesBasis::min_grid_size(int max_wavenumber) { return even_above(3 * max_wavenumber); }

int StokesBasis::max_wavenumber_for(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("basis needs N >= 1 modes");
  return kmax_of(first_modes(1.0, n_modes));
}

double StokesBasis::eigenvalue_for(double length, int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("basis needs N >= 1 modes");
  if (!(length > 0.0)) throw std::invalid_argument("torus length must be positive");
  return first_modes(length, n_modes).back().mu;
}

BasisPtr StokesBasis::build(double length, int n_modes, int grid_size) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("torus length must be positive and finite");
  }
  if (n_modes < 1) throw std::invalid_argument("basis needs N >= 1 modes");
  if (grid_size <= 0 || grid_size % 2 != 0) {
    throw std::invalid_argument("grid size must be a positive even integer");
  }
  auto modes = first_modes(length, n_modes);
  const int kmax = kmax_of(modes);
  if (grid_size < min_grid_size(kmax)) {
    throw std::invalid_argument("grid size " + std::to_string(grid_size) +
                                " too small for dealiasing: need >= " +
                                std::to_string(min_grid_size(kmax)) + " for kmax " +
                                std::to_string(kmax));
  }
  std::shared_ptr<StokesBasis> b(new StokesBasis());
  b->length_ = length;
  b->kmax_ = kmax;
  b->modes_ = std::move(modes);
  b->grid_ = std::make_unique<FourierGrid>(length, grid_size);
  b->quartic_grid_ = std::make_unique<FourierGrid>(length, even_above(4 * kmax));
  return b;
}

std::array<double, 2> StokesBasis::wavevector(int j) const {
  const double scale = 2.0 * std::numbers::pi / length_;
  const auto& m = mode(j);
  return {scale * m.k[0], scale * m.k[1]};
}

bool StokesBasis::same_as(const StokesBasis& other) const {
  return this == &other ||
         (length_ == other.length_ && size() == other.size() && grid_size() == other.grid_size());
}

bool StokesBasis::prefix_compatible(const StokesBasis& other) const {
  if (length_ != other.length_) return false;
  const int n = std::min(size(), other.size());
  for (int j = 0; j < n; ++j) {
    if (mode(j).k != other.mode(j).k || mode(j).parity != other.mode(j).parity) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(BasisPtr basis)
    : basis_(std::move(basis)), coeffs_(static_cast<std::size_t>(basis_->size()), 0.0) {}

SpectralField::SpectralField(BasisPtr basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != basis_->size()) {
    throw BasisMismatch("coefficient vector length " + std::to_string(coeffs_.size()) +
                        " does not match basis size " + std::to_string(basis_->size()));
  }
}

double SpectralField::l2_norm_sq() const {
  return std::inner_product(coeffs_.begin(), coeffs_.end(), coeffs_.begin(), 0.0);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_basis(*this, other);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += other.coeffs_[j];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_basis(*this, other);
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= other.coeffs_[j];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

double inner(const SpectralField& a, const SpectralField& b) {
  require_same_basis(a, b);
  return std::inner_product(a.coeffs().begin(), a.coeffs().end(), b.coeffs().begin(), 0.0);
}

void require_same_basis(const SpectralField& a, const SpectralField& b) {
  if (!a.basis_ptr() || !b.basis_ptr() || !a.basis().same_as(b.basis())) {
    throw BasisMismatch("spectral fields live on different bases");
  }
}

// ---------------------------------------------------------------------------
// Transforms

std::array<std::vector<cplx>, 2> fourier_coefficients(const SpectralField& u,
                                                      const FourierGrid& g) {
  const auto& basis = u.basis();
  if (g.size() <= 2 * basis.max_wavenumber()) {
    throw std::invalid_argument("grid of size " + std::to_string(g.size()) +
                                " cannot resolve wavenumber " +
                                std::to_string(basis.max_wavenumber()));
  }
  std::array<std::vector<cplx>, 2> out{std::vector<cplx>(g.points()),
                                       std::vector<cplx>(g.points())};
  const double half_root2 = std::numbers::sqrt2 / 2.0;
  for (int j = 0; j < u.size(); ++j) {
    const auto& m = basis.mode(j);
    const double c = u[j];
    if (c == 0.0) continue;
    // cos: c sqrt2 pol (e^{i th} + e^{-i th}) / 2
    // sin: c sqrt2 pol (e^{i th} - e^{-i th}) / (2i)
    const cplx plus = (m.parity == Parity::cos) ? cplx(c * half_root2, 0.0)
                                                : cplx(0.0, -c * half_root2);
    const std::size_t ip = g.index(m.k[0], m.k[1]);
    const std::size_t im = g.index(-m.k[0], -m.k[1]);
    for (int d = 0; d < 2; ++d) {
      out[d][ip] += m.pol[d] * plus;
      out[d][im] += m.pol[d] * std::conj(plus);
    }
  }
  return out;
}


PhysicalField to_physical(const SpectralField& u) { return to_physical(u, u.basis().grid()); }

PhysicalField to_physical(const SpectralField& u, const FourierGrid& grid) {
  auto hat = fourier_coefficients(u, grid);
  PhysicalField out(grid.size());
  for (int d = 0; d < 2; ++d) {
    grid.backward(hat[d]);
    for (std::size_t i = 0; i < grid.points(); ++i) out.comp[d][i] = hat[d][i].real();
  }
  return out;
}

FourierVectorField fourier_transform(const PhysicalField& f, double length) {
  FourierGrid grid(length, f.grid_size);
  FourierVectorField out;
  out.grid_size = f.grid_size;
  out.length = length;
  for (int d = 0; d < 2; ++d) {
    if (f.comp[d].size() != grid.points()) {
      throw std::invalid_argument("physical field has inconsistent component sizes");
    }
    out.comp[d].assign(f.comp[d].begin(), f.comp[d].end());
    grid.forward(out.comp[d]);
  }
  return out;
}

namespace {

SpectralField extract_modes(const std::array<std::vector<cplx>, 2>& hat, int grid_size,
                            const BasisPtr& basis) {
  if (grid_size <= 2 * basis->max_wavenumber()) {
    throw std::invalid_argument("grid of size " + std::to_string(grid_size) +
                                " cannot resolve the basis wavenumbers");
  }
  auto wrap = [grid_size](int k) { return ((k % grid_size) + grid_size) % grid_size; };
  SpectralField out(basis);
  for (int j = 0; j < basis->size(); ++j) {
    const auto& m = basis->mode(j);
    const std::size_t i =
        static_cast<std::size_t>(wrap(m.k[0])) * grid_size + wrap(m.k[1]);
    // (f, sqrt2 pol cos th) = sqrt2 pol.Re f_hat ; (f, sqrt2 pol sin th) = -sqrt2 pol.Im f_hat
    double acc = 0.0;
    for (int d = 0; d < 2; ++d) {
      acc += m.pol[d] * (m.parity == Parity::cos ? hat[d][i].real() : -hat[d][i].imag());
    }
    out[j] = std::numbers::sqrt2 * acc;
  }
  return out;
}

}  // namespace

SpectralField to_spectral(const PhysicalField& f, const BasisPtr& basis) {
  if (f.grid_size <= 0 || f.comp[0].size() != f.comp[1].size() ||
      f.comp[0].size() != static_cast<std::size_t>(f.grid_size) * f.grid_size) {
    throw std::invalid_argument("to_spectral: malformed physical field");
  }
  const FourierGrid* grid = &basis->grid();
  std::unique_ptr<FourierGrid> owned;
  if (f.grid_size != grid->size()) {
    if (f.grid_size == basis->quartic_grid().size()) {
      grid = &basis->quartic_grid();
    } else {
      owned = std::make_unique<FourierGrid>(basis->length(), f.grid_size);
      grid = owned.get();
    }
  }
  std::array<std::vector<cplx>, 2> hat;
  for (int d = 0; d < 2; ++d) {
    hat[d].assign(f.comp[d].begin(), f.comp[d].end());
    grid->forward(hat[d]);
  }
  return extract_modes(hat, f.grid_size, basis);
}

FourierVectorField leray_project(const FourierVectorField& f) {
  FourierVectorField out = f;
  const int g = f.grid_size;
  for (int a = 0; a < g; ++a) {
    for (int b = 0; b < g; ++b) {
      const int k1 = a <= g / 2 ? a : a - g;
      const int k2 = b <= g / 2 ? b : b - g;
      const std::size_t i = static_cast<std::size_t>(a) * g + b;
      if (k1 == 0 && k2 == 0) {
        out.comp[0][i] = out.comp[1][i] = 0.0;
        continue;
      }
      const double n2 = static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
      const cplx kdotf = (static_cast<double>(k1) * f.comp[0][i] + static_cast<double>(k2) * f.comp[1][i]) / n2;
      out.comp[0][i] = f.comp[0][i] - static_cast<double>(k1) * kdotf;
      out.comp[1][i] = f.comp[1][i] - static_cast<double>(k2) * kdotf;
    }
  }
  return out;
}

SpectralField leray_project(const FourierVectorField& f, const BasisPtr& basis) {
  if (f.length != basis->length()) throw BasisMismatch("leray_project: domain length mismatch");
  const auto projected = leray_project(f);
  return extract_modes(projected.comp, projected.grid_size, basis);
}

SpectralField truncate(const SpectralField& u, int m) {
  if (m < 1 || m > u.size()) {
    throw std::invalid_argument("truncate: need 1 <= M <= N, got M = " + std::to_string(m));
  }
  SpectralField out = u;
  for (int j = m; j < out.size(); ++j) out[j] = 0.0;
  return out;
}

SpectralField change_basis(const SpectralField& u, const BasisPtr& target) {
  if (!u.basis().prefix_compatible(*target)) {
    throw BasisMismatch("change_basis: bases are not prefix-compatible");
  }
  SpectralField out(target);
  const int n = std::min(u.size(), out.size());
  for (int j = 0; j < n; ++j) out[j] = u[j];
  return out;
}

}  // namespace nsalpha
