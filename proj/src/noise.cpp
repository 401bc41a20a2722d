#include "nsalpha/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nsalpha {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t counter_key(std::uint64_t seed, std::uint64_t step, std::uint64_t coord,
                                    std::uint64_t lane) {
  std::uint64_t h = splitmix64(seed ^ 0x5851f42d4c957f2dULL);
  h = splitmix64(h ^ step);
  h = splitmix64(h ^ (coord * 0xd1342543de82ef95ULL));
  return splitmix64(h ^ (lane * 0xa0761d6478bd642fULL));
}

void check_size(const NoiseModel& model, const SpectralField& u) {
  if (model.size() != u.size()) {
    throw std::invalid_argument("noise model has " + std::to_string(model.size()) +
                                " coordinates but field has " + std::to_string(u.size()) +
                                " modes");
  }
}

double coefficient(const NoiseModel& model, const SpectralField& u, int j) {
  const double s = model.sigma()[static_cast<std::size_t>(j)];
  if (model.kind() == NoiseKind::additive) return s;
  return s + model.lambda()[static_cast<std::size_t>(j)] * u[j];
}

}  // namespace

std::string to_string(NoiseKind kind) {
  return kind == NoiseKind::additive ? "additive" : "diagonal_multiplicative";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  if (name == "additive") return NoiseKind::additive;
  if (name == "diagonal_multiplicative" || name == "multiplicative") {
    return NoiseKind::diagonal_multiplicative;
  }
  throw std::invalid_argument("unknown noise kind '" + name + "'");
}

NoiseModel NoiseModel::decaying(NoiseKind kind, double sigma0, double lambda0, double decay_s,
                                const StokesBasis& basis) {
  if (!(decay_s > 1.0)) throw std::invalid_argument("noise decay exponent must exceed 1");
  NoiseModel m;
  m.kind_ = kind;
  m.decay_s_ = decay_s;
  const double mu1 = basis.mu(0);
  for (int j = 0; j < basis.size(); ++j) {
    const double w = std::pow(mu1 / basis.mu(j), decay_s / 2.0);
    m.sigma_.push_back(sigma0 * w);
    m.lambda_.push_back(kind == NoiseKind::additive ? 0.0 : lambda0 * w);
  }
  return m;
}

NoiseModel NoiseModel::from_vectors(NoiseKind kind, std::vector<double> sigma,
                                    std::vector<double> lambda, double decay_s) {
  if (kind == NoiseKind::additive) lambda.assign(sigma.size(), 0.0);
  if (sigma.size() != lambda.size()) {
    throw std::invalid_argument("noise sigma and lambda must have equal length");
  }
  NoiseModel m;
  m.kind_ = kind;
  m.sigma_ = std::move(sigma);
  m.lambda_ = std::move(lambda);
  m.decay_s_ = decay_s;
  return m;
}

NoiseModel NoiseModel::none(int m) {
  return from_vectors(NoiseKind::additive, std::vector<double>(static_cast<std::size_t>(m), 0.0),
                      {});
}

bool NoiseModel::is_zero() const {
  auto zero = [](double x) { return x == 0.0; };
  return std::all_of(sigma_.begin(), sigma_.end(), zero) &&
         std::all_of(lambda_.begin(), lambda_.end(), zero);
}

double NoiseModel::lipschitz() const {
  double l = 0.0;
  for (double x : lambda_) l = std::max(l, std::abs(x));
  return l;
}

double NoiseStream::uniform(std::uint64_t step, std::uint64_t coordinate,
                            std::uint64_t lane) const {
  const std::uint64_t bits = counter_key(seed_, step, coordinate, lane) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

double NoiseStream::standard_normal(std::uint64_t step, std::uint64_t coordinate) const {
  const double u1 = uniform(step, coordinate, 0);
  const double u2 = uniform(step, coordinate, 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

WienerIncrement sample_increment(const NoiseStream& stream, std::uint64_t step, double dt, int m) {
  if (!(dt > 0.0)) throw std::invalid_argument("Wiener increment needs dt > 0");
  if (m < 0) throw std::invalid_argument("Wiener increment needs M >= 0");
  WienerIncrement inc;
  inc.dt = dt;
  inc.dW.resize(static_cast<std::size_t>(m));
  const double sd = std::sqrt(dt);
  for (int k = 0; k < m; ++k) {
    inc.dW[static_cast<std::size_t>(k)] = sd * stream.standard_normal(step, static_cast<std::uint64_t>(k));
  }
  return inc;
}

WienerPath WienerPath::sample(const NoiseStream& stream, int n_steps, double dt, int m) {
  if (n_steps < 0 || m < 0) throw std::invalid_argument("Wiener path needs non-negative sizes");
  if (!(dt > 0.0)) throw std::invalid_argument("Wiener path needs dt > 0");
  WienerPath p;
  p.steps_ = n_steps;
  p.coords_ = m;
  p.dt_ = dt;
  p.data_.reserve(static_cast<std::size_t>(n_steps) * m);
  for (int n = 0; n < n_steps; ++n) {
    const auto inc = sample_increment(stream, static_cast<std::uint64_t>(n), dt, m);
    p.data_.insert(p.data_.end(), inc.dW.begin(), inc.dW.end());
  }
  return p;
}

std::span<const double> WienerPath::increment(int n, int m) const {
  if (n < 0 || n >= steps_) throw std::out_of_range("Wiener path step out of range");
  if (m < 0 || m > coords_) {
    throw std::invalid_argument("Wiener path has " + std::to_string(coords_) +
                                " coordinates, requested " + std::to_string(m));
  }
  return std::span<const double>(data_).subspan(static_cast<std::size_t>(n) * coords_,
                                                static_cast<std::size_t>(m));
}

WienerIncrement WienerPath::increment_copy(int n, int m) const {
  const auto s = increment(n, m);
  return WienerIncrement{std::vector<double>(s.begin(), s.end()), dt_};
}

SpectralField g_apply(const NoiseModel& model, const SpectralField& u,
                      std::span<const double> dW) {
  check_size(model, u);
  if (static_cast<int>(dW.size()) != model.size()) {
    throw std::invalid_argument("Wiener increment has " + std::to_string(dW.size()) +
                                " coordinates, noise model expects " +
                                std::to_string(model.size()));
  }
  SpectralField out(u.basis_ptr());
  for (int j = 0; j < out.size(); ++j) out[j] = coefficient(model, u, j) * dW[static_cast<std::size_t>(j)];
  return out;
}

SpectralField g_apply(const NoiseModel& model, const SpectralField& u,
                      const WienerIncrement& inc) {
  return g_apply(model, u, std::span<const double>(inc.dW));
}

double hs_norm_sq_l2(const NoiseModel& model, const SpectralField& u) {
  check_size(model, u);
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double c = coefficient(model, u, j);
    acc += c * c;
  }
  return acc;
}

double hs_norm_sq_h1(const NoiseModel& model, const SpectralField& u) {
  check_size(model, u);
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double c = coefficient(model, u, j);
    acc += u.basis().mu(j) * c * c;
  }
  return acc;
}

double hs_distance_sq_l2(const NoiseModel& model, const SpectralField& u,
                         const SpectralField& v) {
  require_same_basis(u, v);
  check_size(model, u);
  if (model.kind() == NoiseKind::additive) return 0.0;
  double acc = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double d = model.lambda()[static_cast<std::size_t>(j)] * (u[j] - v[j]);
    acc += d * d;
  }
  return acc;
}

S2Report validate_s2(const NoiseModel& model, double nu, const StokesBasis& basis) {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  if (model.size() != basis.size()) {
    throw std::invalid_argument("noise model size does not match basis size");
  }
  S2Report r;
  r.lipschitz = model.kind() == NoiseKind::additive ? 0.0 : model.lipschitz();
  double sum_sigma = 0.0;
  double max_lambda = 0.0;
  for (int j = 0; j < basis.size(); ++j) {
    const double mu = basis.mu(j);
    const double s = model.sigma()[static_cast<std::size_t>(j)];
    const double l = model.kind() == NoiseKind::additive ? 0.0 : model.lambda()[static_cast<std::size_t>(j)];
    sum_sigma += mu * s * s;
    max_lambda = std::max(max_lambda, mu * l * l);
  }
  r.k1 = std::sqrt(2.0 * sum_sigma);
  r.k2 = std::sqrt(2.0 * max_lambda);
  r.poincare = 1.0 / std::sqrt(basis.mu(0));
  r.threshold = std::sqrt(nu) / (r.poincare * std::numbers::sqrt2);
  // Closed half-line; the slack absorbs round-off between algebraically equal forms.
  r.monotonicity_ok = r.lipschitz <= r.threshold * (1.0 + 1e-12);
  return r;
}

}  // namespace nsalpha
