#ifndef NSALPHA_HARNESS_HPP
#define NSALPHA_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nsalpha/diagnostics.hpp"
#include "nsalpha/integrator.hpp"
#include "nsalpha/noise.hpp"

namespace nsalpha {

enum class AlphaPick { min, max, geometric_mean };

std::string to_string(AlphaPick pick);
AlphaPick alpha_pick_from_string(const std::string& name);

/// alpha_N = c * mu_N^{-exponent} with c chosen from [c_min, c_max] by pick.
struct AlphaSchedule {
  double c_min = 1.0;
  double c_max = 1.0;
  double exponent = 0.75;
  AlphaPick pick = AlphaPick::geometric_mean;

  void validate() const;
  double coefficient() const;
};

double alpha_for_N(int N, const AlphaSchedule& sched, double L);

/// Everything a ladder of runs shares: domain, physics, time grid, noise and
/// initial data.
struct ExperimentSetup {
  double L = 0.0;
  double nu = 0.0;
  double T = 0.0;
  double dt = 0.0;
  int grid_size = 0;
  NoiseSpec noise;
  SpectralField u0;
  int p_moment = 1;
  bool nonlinear = true;

  /// SimConfig for resolution N at filter scale alpha.
  SimConfig config_for(int N, double alpha, std::uint64_t seed) const;
};

/// Differences between one NS-alpha run and the shared-path reference.
struct ErrorSeries {
  int N = 0;
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<double> v_err_sq;     // ||v_N(t) - v_ref(t)||^2
  std::vector<double> ubar_err_sq;  // ||u_bar_N(t) - u_bar_ref(t)||^2
  MomentFunctionals moments;
};

struct PairedRunOptions {
  /// Replace the schedule and use this alpha for every N.
  std::optional<double> alpha_override;
};

/// One Wiener path sized for N_ref drives every run; the reference uses
/// alpha = 0 at N_ref.  Coefficients are compared after zero-padding to N_ref.
std::vector<ErrorSeries> paired_run(const ExperimentSetup& setup, std::span<const int> N_list,
                                    int N_ref, const AlphaSchedule& sched, std::uint64_t seed,
                                    const PairedRunOptions& opts = {});

struct SeedRecord {
  int N = 0;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  double strong_error_sup = 0.0;
  double strong_error_final = 0.0;
  double ubar_error_sup = 0.0;
  double ubar_error_final = 0.0;
  MomentFunctionals moments;
};

SeedRecord summarize(const ErrorSeries& series, std::uint64_t seed);

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  bool has_stderr = false;
};

/// Mean and standard error (n - 1 sample variance) of xs.
Estimate estimate(std::span<const double> xs);

struct ConvergenceRecord {
  int N = 0;
  double alpha = 0.0;
  int seeds = 0;
  Estimate strong_error_sup;
  Estimate strong_error_final;
  Estimate ubar_error_sup;
  Estimate ubar_error_final;
  Estimate sup_ubar_alpha_2p;
  Estimate int_dissipation_p;
  Estimate sup_v_2p;
  Estimate sup_grad_ubar_alpha_2p;
  Estimate int_A_ubar_alpha_sq;
  Estimate sup_grad_v_2p;
  Estimate int_Av_sq;
  /// Fewer than two seeds: no standard errors.
  bool flagged = false;
};

/// Aggregate records of one N over seeds; sup over time was taken per path.
ConvergenceRecord mc_aggregate(std::span<const SeedRecord> records);

struct LadderResult {
  std::vector<SeedRecord> rows;            // ordered by (seed index, N index)
  std::vector<ConvergenceRecord> summary;  // one per N in N_list order
};

/// paired_run over seeds [first_seed, first_seed + n_seeds), concurrently.
LadderResult convergence_ladder(const ExperimentSetup& setup, std::span<const int> N_list,
                                int N_ref, const AlphaSchedule& sched, std::uint64_t first_seed,
                                int n_seeds, int threads = 0, const PairedRunOptions& opts = {});

/// Moment statistics of a seed ensemble at fixed N.
struct EnsembleResult {
  std::vector<MomentFunctionals> per_seed;
  ConvergenceRecord summary;            // moment fields only
  double sup_of_mean_ubar_alpha_2p = 0.0;  // sup_t E ||u_bar||_alpha^{2p}
  double mean_of_sup_ubar_alpha_2p = 0.0;  // E sup_t ||u_bar||_alpha^{2p}
};

EnsembleResult moment_ensemble(const ExperimentSetup& setup, int N, double alpha,
                               std::uint64_t first_seed, int n_seeds, int threads = 0);

/// Run body(i) for i in [0, n) on a pool of threads; results must be written
/// to per-index slots so the outcome is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace nsalpha

#endif  // NSALPHA_HARNESS_HPP
