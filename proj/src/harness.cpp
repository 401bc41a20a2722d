#include "nsalpha/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace nsalpha {

std::string to_string(AlphaPick pick) {
  switch (pick) {
    case AlphaPick::min: return "min";
    case AlphaPick::max: return "max";
    case AlphaPick::geometric_mean: return "geometric_mean";
  }
  return "unknown";
}

AlphaPick alpha_pick_from_string(const std::string& name) {
  if (name == "min") return AlphaPick::min;
  if (name == "max") return AlphaPick::max;
  if (name == "geometric_mean") return AlphaPick::geometric_mean;
  throw std::invalid_argument("unknown alpha pick '" + name + "'");
}

void AlphaSchedule::validate() const {
  if (!(c_min > 0.0) || !std::isfinite(c_min)) throw std::invalid_argument("c_min must be positive");
  if (!(c_max >= c_min) || !std::isfinite(c_max)) {
    throw std::invalid_argument("c_max must be finite and >= c_min");
  }
  if (!std::isfinite(exponent)) throw std::invalid_argument("exponent must be finite");
}

double AlphaSchedule::coefficient() const {
  switch (pick) {
    case AlphaPick::min: return c_min;
    case AlphaPick::max: return c_max;
    case AlphaPick::geometric_mean: return std::sqrt(c_min * c_max);
  }
  return c_min;
}

double alpha_for_N(int N, const AlphaSchedule& sched, double L) {
  if (N < 1) throw std::invalid_argument("alpha_for_N: N must be >= 1");
  sched.validate();
  const double mu_N = StokesBasis::eigenvalue_for(L, N);
  return sched.coefficient() * std::pow(mu_N, -sched.exponent);
}

SimConfig ExperimentSetup::config_for(int N, double alpha, std::uint64_t seed) const {
  SimConfig cfg;
  cfg.L = L;
  cfg.nu = nu;
  cfg.N = N;
  cfg.alpha = alpha;
  cfg.T = T;
  cfg.dt = dt;
  cfg.grid_size = grid_size;
  cfg.seed = seed;
  cfg.p_moment = p_moment;
  cfg.nonlinear = nonlinear;
  cfg.snapshot_stride = 1;
  cfg.noise = noise.realize(*StokesBasis::build(L, N, grid_size));
  return cfg;
}

namespace {

// ||a - b||^2 with a zero-padded to the length of b.
double padded_distance_sq(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double d = (j < a.size() ? a[j] : 0.0) - b[j];
    acc += d * d;
  }
  return acc;
}

double max_of(const std::vector<double>& xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, x);
  return m;
}

}  // namespace

std::vector<ErrorSeries> paired_run(const ExperimentSetup& setup, std::span<const int> N_list,
                                    int N_ref, const AlphaSchedule& sched, std::uint64_t seed,
                                    const PairedRunOptions& opts) {
  if (N_list.empty()) throw std::invalid_argument("paired_run: empty N list");
  for (int N : N_list) {
    if (N < 1 || N > N_ref) {
      throw std::invalid_argument("paired_run: N = " + std::to_string(N) +
                                  " outside [1, N_ref = " + std::to_string(N_ref) + "]");
    }
  }
  const auto ref_cfg = setup.config_for(N_ref, 0.0, seed);
  ref_cfg.validate();
  const auto path = WienerPath::sample(NoiseStream(seed), ref_cfg.steps(), setup.dt, N_ref);
  const auto ref = run(ref_cfg, setup.u0, path);

  std::vector<ErrorSeries> out;
  out.reserve(N_list.size());
  for (int N : N_list) {
    const double alpha = opts.alpha_override ? *opts.alpha_override : alpha_for_N(N, sched, setup.L);
    const auto traj = run(setup.config_for(N, alpha, seed), setup.u0, path);
    ErrorSeries e;
    e.N = N;
    e.alpha = alpha;
    e.times = traj.times;
    for (std::size_t n = 0; n < traj.snapshots.size(); ++n) {
      e.v_err_sq.push_back(padded_distance_sq(traj.snapshots[n].v, ref.snapshots[n].v));
      e.ubar_err_sq.push_back(padded_distance_sq(traj.snapshots[n].u_bar, ref.snapshots[n].u_bar));
    }
    e.moments = moment_functionals(traj, setup.p_moment, alpha);
    out.push_back(std::move(e));
  }
  return out;
}

SeedRecord summarize(const ErrorSeries& series, std::uint64_t seed) {
  SeedRecord r;
  r.N = series.N;
  r.alpha = series.alpha;
  r.seed = seed;
  r.strong_error_sup = max_of(series.v_err_sq);
  r.strong_error_final = series.v_err_sq.empty() ? 0.0 : series.v_err_sq.back();
  r.ubar_error_sup = max_of(series.ubar_err_sq);
  r.ubar_error_final = series.ubar_err_sq.empty() ? 0.0 : series.ubar_err_sq.back();
  r.moments = series.moments;
  return r;
}

Estimate estimate(std::span<const double> xs) {
  Estimate e;
  if (xs.empty()) return e;
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.mean = sum / n;
  if (xs.size() < 2) return e;
  double ss = 0.0;
  for (double x : xs) ss += (x - e.mean) * (x - e.mean);
  e.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  e.has_stderr = true;
  return e;
}

ConvergenceRecord mc_aggregate(std::span<const SeedRecord> records) {
  if (records.empty()) throw std::invalid_argument("mc_aggregate: no records");
  ConvergenceRecord c;
  c.N = records.front().N;
  c.alpha = records.front().alpha;
  c.seeds = static_cast<int>(records.size());
  c.flagged = records.size() < 2;
  for (const auto& r : records) {
    if (r.N != c.N) throw std::invalid_argument("mc_aggregate: records mix different N");
  }
  auto field = [&](auto member) {
    std::vector<double> xs;
    xs.reserve(records.size());
    for (const auto& r : records) xs.push_back(member(r));
    return estimate(xs);
  };
  c.strong_error_sup = field([](const SeedRecord& r) { return r.strong_error_sup; });
  c.strong_error_final = field([](const SeedRecord& r) { return r.strong_error_final; });
  c.ubar_error_sup = field([](const SeedRecord& r) { return r.ubar_error_sup; });
  c.ubar_error_final = field([](const SeedRecord& r) { return r.ubar_error_final; });
  c.sup_ubar_alpha_2p = field([](const SeedRecord& r) { return r.moments.sup_ubar_alpha_2p; });
  c.int_dissipation_p = field([](const SeedRecord& r) { return r.moments.int_dissipation_p; });
  c.sup_v_2p = field([](const SeedRecord& r) { return r.moments.sup_v_2p; });
  c.sup_grad_ubar_alpha_2p =
      field([](const SeedRecord& r) { return r.moments.sup_grad_ubar_alpha_2p; });
  c.int_A_ubar_alpha_sq = field([](const SeedRecord& r) { return r.moments.int_A_ubar_alpha_sq; });
  c.sup_grad_v_2p = field([](const SeedRecord& r) { return r.moments.sup_grad_v_2p; });
  c.int_Av_sq = field([](const SeedRecord& r) { return r.moments.int_Av_sq; });
  return c;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads) {
  if (n == 0) return;
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

LadderResult convergence_ladder(const ExperimentSetup& setup, std::span<const int> N_list,
                                int N_ref, const AlphaSchedule& sched, std::uint64_t first_seed,
                                int n_seeds, int threads, const PairedRunOptions& opts) {
  if (n_seeds < 1) throw std::invalid_argument("convergence_ladder: need at least one seed");
  std::vector<std::vector<ErrorSeries>> per_seed(static_cast<std::size_t>(n_seeds));
  parallel_for(
      per_seed.size(),
      [&](std::size_t i) {
        per_seed[i] = paired_run(setup, N_list, N_ref, sched, first_seed + i, opts);
      },
      threads);

  LadderResult res;
  for (std::size_t i = 0; i < per_seed.size(); ++i) {
    for (const auto& e : per_seed[i]) res.rows.push_back(summarize(e, first_seed + i));
  }
  for (std::size_t k = 0; k < N_list.size(); ++k) {
    std::vector<SeedRecord> recs;
    for (std::size_t i = 0; i < per_seed.size(); ++i) recs.push_back(res.rows[i * N_list.size() + k]);
    res.summary.push_back(mc_aggregate(recs));
  }
  return res;
}

EnsembleResult moment_ensemble(const ExperimentSetup& setup, int N, double alpha,
                               std::uint64_t first_seed, int n_seeds, int threads) {
  if (n_seeds < 1) throw std::invalid_argument("moment_ensemble: need at least one seed");
  std::vector<Trajectory> trajs(static_cast<std::size_t>(n_seeds));
  parallel_for(
      trajs.size(),
      [&](std::size_t i) {
        auto cfg = setup.config_for(N, alpha, first_seed + i);
        cfg.snapshot_stride = 0;
        trajs[i] = run(cfg, setup.u0);
      },
      threads);

  EnsembleResult res;
  std::vector<SeedRecord> recs;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    res.per_seed.push_back(moment_functionals(trajs[i], setup.p_moment, alpha));
    SeedRecord r;
    r.N = N;
    r.alpha = alpha;
    r.seed = first_seed + i;
    r.moments = res.per_seed.back();
    recs.push_back(r);
  }
  res.summary = mc_aggregate(recs);
  res.mean_of_sup_ubar_alpha_2p = res.summary.sup_ubar_alpha_2p.mean;

  const std::size_t n_times = trajs.front().times.size();
  for (std::size_t t = 0; t < n_times; ++t) {
    double acc = 0.0;
    for (const auto& tr : trajs) acc += std::pow(tr.diagnostics.ubar_alpha_sq[t], setup.p_moment);
    res.sup_of_mean_ubar_alpha_2p = std::max(res.sup_of_mean_ubar_alpha_2p, acc / n_seeds);
  }
  return res;
}

}  // namespace nsalpha
