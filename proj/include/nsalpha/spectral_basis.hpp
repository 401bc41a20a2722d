#ifndef NSALPHA_SPECTRAL_BASIS_HPP
#define NSALPHA_SPECTRAL_BASIS_HPP

#include <array>
#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace nsalpha {

using cplx = std::complex<double>;

enum class Parity { cos, sin };

/// One real Stokes eigenfunction on the torus (0,L)^2:
///   e = sqrt(2) * pol * cos(2 pi k.x / L)   or   sqrt(2) * pol * sin(2 pi k.x / L)
/// with pol = k_perp / |k|.  The lattice vector k lives on the half-lattice
/// (k1 > 0, or k1 == 0 and k2 > 0).
struct LatticeMode {
  std::array<int, 2> k{};
  double mu = 0.0;
  std::array<double, 2> pol{};
  Parity parity = Parity::cos;

  int norm_sq() const { return k[0] * k[0] + k[1] * k[1]; }
};

class BasisMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Uniform periodic grid with cached complex 2D FFT plans.
///
/// forward() maps samples to Fourier coefficients normalized as grid means,
/// f_hat(k) = (1/G^2) sum_x f(x) exp(-i kappa.x), and backward() is its
/// inverse (plain trigonometric sum).  Both act in place and are safe to call
/// concurrently from several threads on distinct buffers.
class FourierGrid {
 public:
  FourierGrid(double length, int size);
  ~FourierGrid();
  FourierGrid(const FourierGrid&) = delete;
  FourierGrid& operator=(const FourierGrid&) = delete;

  int size() const { return size_; }
  double length() const { return length_; }
  std::size_t points() const { return static_cast<std::size_t>(size_) * size_; }

  /// Storage index of lattice wavenumber (k1, k2); negative values wrap.
  std::size_t index(int k1, int k2) const;
  /// Storage index of physical grid point (i1, i2), x = (i1, i2) L / G.
  std::size_t point(int i1, int i2) const { return static_cast<std::size_t>(i1) * size_ + i2; }

  void forward(std::span<cplx> data) const;
  void backward(std::span<cplx> data) const;

 private:
  double length_;
  int size_;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Velocity samples on a G x G grid.  Component c at point (i1, i2) is
/// comp[c][i1 * G + i2].
struct PhysicalField {
  int grid_size = 0;
  std::array<std::vector<double>, 2> comp;

  PhysicalField() = default;
  explicit PhysicalField(int g)
      : grid_size(g),
        comp{std::vector<double>(static_cast<std::size_t>(g) * g, 0.0),
             std::vector<double>(static_cast<std::size_t>(g) * g, 0.0)} {}
  std::size_t points() const { return comp[0].size(); }
};

/// Complex Fourier coefficients of a (not necessarily divergence-free)
/// periodic vector field, laid out as FourierGrid::index.
struct FourierVectorField {
  int grid_size = 0;
  double length = 0.0;
  std::array<std::vector<cplx>, 2> comp;
};

/// Ordered, immutable table of the first N Stokes eigenpairs on (0,L)^2.
///
/// Ordering is (mu ascending, k lexicographic, cos before sin), so the table
/// for N is a prefix of the table for any N' > N with the same L.
class StokesBasis {
 public:
  static std::shared_ptr<const StokesBasis> build(double length, int n_modes, int grid_size);

  /// Smallest even grid size whose products of two basis fields are
  /// alias-free against the basis (G > 3 kmax).
  static int min_grid_size(int max_wavenumber);
  /// Largest |k_i| over the first n_modes modes, independent of grid.
  static int max_wavenumber_for(int n_modes);
  /// mu_N for the first n_modes modes on (0,L)^2.
  static double eigenvalue_for(double length, int n_modes);

  double length() const { return length_; }
  int size() const { return static_cast<int>(modes_.size()); }
  int grid_size() const { return grid_->size(); }
  int max_wavenumber() const { return kmax_; }

  const std::vector<LatticeMode>& modes() const { return modes_; }
  const LatticeMode& mode(int j) const { return modes_[static_cast<std::size_t>(j)]; }
  double mu(int j) const { return mode(j).mu; }
  double mu_max() const { return modes_.back().mu; }
  /// Physical wavevector 2 pi k / L of mode j.
  std::array<double, 2> wavevector(int j) const;

  /// Grid used for quadratic products (size grid_size()).
  const FourierGrid& grid() const { return *grid_; }
  /// Finer grid on which quartic integrands (L^4 norms) are exact.
  const FourierGrid& quartic_grid() const { return *quartic_grid_; }

  /// True when both bases describe the same modes on the same grid.
  bool same_as(const StokesBasis& other) const;
  /// True when the shorter mode table is a prefix of the longer one.
  bool prefix_compatible(const StokesBasis& other) const;

 private:
  StokesBasis() = default;

  double length_ = 0.0;
  int kmax_ = 0;
  std::vector<LatticeMode> modes_;
  std::unique_ptr<FourierGrid> grid_;
  std::unique_ptr<FourierGrid> quartic_grid_;
};

using BasisPtr = std::shared_ptr<const StokesBasis>;

/// Divergence-free, mean-zero velocity field stored as coefficients over a
/// StokesBasis.  Coefficients are orthonormal: the L^2 norm (mean-integral
/// convention) equals the Euclidean norm of coeffs.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(BasisPtr basis);
  SpectralField(BasisPtr basis, std::vector<double> coeffs);

  const StokesBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  int size() const { return static_cast<int>(coeffs_.size()); }

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double operator[](int j) const { return coeffs_[static_cast<std::size_t>(j)]; }
  double& operator[](int j) { return coeffs_[static_cast<std::size_t>(j)]; }

  double l2_norm_sq() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);

 private:
  BasisPtr basis_;
  std::vector<double> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

/// Coefficient inner product (= L^2 inner product of the fields).
double inner(const SpectralField& a, const SpectralField& b);

/// Throws BasisMismatch unless a and b share a basis.
void require_same_basis(const SpectralField& a, const SpectralField& b);

/// Complex Fourier coefficients of u's two components, laid out on grid
/// (G > 2 kmax required).
std::array<std::vector<cplx>, 2> fourier_coefficients(const SpectralField& u,
                                                      const FourierGrid& grid);

/// Sample u on the basis grid.
PhysicalField to_physical(const SpectralField& u);
/// Sample u on an arbitrary grid of size G > 2 kmax.
PhysicalField to_physical(const SpectralField& u, const FourierGrid& grid);

/// Galerkin projection P_N onto the basis of a sampled field.  Exact for
/// band-limited fields the grid resolves.  Because every e_j is
/// divergence-free this is also P_N composed with the Leray projector.
SpectralField to_spectral(const PhysicalField& f, const BasisPtr& basis);

/// Fourier coefficients of a sampled vector field.
FourierVectorField fourier_transform(const PhysicalField& f, double length);
/// Per-wavevector Leray projector (I - k k^T / |k|^2); drops k = 0.
FourierVectorField leray_project(const FourierVectorField& f);
/// Leray projection followed by Galerkin truncation onto basis.
SpectralField leray_project(const FourierVectorField& f, const BasisPtr& basis);

/// P_M: zero all coefficients with index >= M (keeps the first M modes).
SpectralField truncate(const SpectralField& u, int m);

/// Re-express u in a prefix-compatible basis: shared leading coefficients are
/// copied, the rest zero-filled (P_N when shrinking, zero-padding when growing).
SpectralField change_basis(const SpectralField& u, const BasisPtr& target);

}  // namespace nsalpha

#endif  // NSALPHA_SPECTRAL_BASIS_HPP
