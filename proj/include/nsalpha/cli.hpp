#ifndef NSALPHA_CLI_HPP
#define NSALPHA_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsalpha/harness.hpp"
#include "nsalpha/noise.hpp"
#include "nsalpha/spectral_basis.hpp"

namespace nsalpha {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2, exit_blowup = 3 };

/// Invalid configuration; key_path is a dotted path such as "time.dt" or
/// "initial_condition.modes[1].k".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key_path, const std::string& why);
  const std::string& key_path() const { return key_path_; }

 private:
  std::string key_path_;
};

struct InitialMode {
  int k1 = 0;
  int k2 = 0;
  Parity parity = Parity::cos;
  double value = 0.0;
};

struct InitialCondition {
  std::string kind;  // "modes" or "random"
  std::vector<InitialMode> modes;
  double amplitude = 0.0;
  std::uint64_t seed = 0;
};

struct VerifySettings {
  int N = 0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> filter_alphas;
  int filter_N = 0;
  double monotonicity_alpha = 0.0;
  double kappa = 0.0;
};

/// Fully explicit run configuration; every key is required.
struct RunConfig {
  double L = 0.0;
  double nu = 0.0;
  double T = 0.0;
  double dt = 0.0;
  int N = 0;
  int grid_size = 0;
  double alpha = 0.0;
  NoiseSpec noise;
  InitialCondition initial;
  std::uint64_t seed = 0;
  int seeds = 0;
  int p_moment = 1;
  bool nonlinear = true;
  int threads = 0;
  AlphaSchedule schedule;
  std::vector<int> N_list;
  int N_ref = 0;
  std::optional<double> alpha_override;  // converge only; null in the file means "use the schedule"
  VerifySettings verify;

  nlohmann::json canonical;  // effective config, keys sorted

  /// Largest resolution any command needs.
  int max_N() const;
  /// Initial field on the basis of size max_N().
  SpectralField initial_field() const;
  ExperimentSetup setup() const;
};

/// Parse and validate; throws ConfigError.  seeds_override replaces run.seeds
/// (and is reflected in the canonical form).
RunConfig parse_config(const nlohmann::json& j, std::optional<int> seeds_override = {});
RunConfig load_config(const std::filesystem::path& path, std::optional<int> seeds_override = {});
nlohmann::json read_json_file(const std::filesystem::path& path);

std::string canonical_dump(const nlohmann::json& j);
std::string sha256_hex(const std::string& data);
std::string config_hash(const nlohmann::json& j);

/// Shortest decimal string that reads back to the same double.
std::string format_double(double x);

/// Write-temp-then-rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct CommandOptions {
  std::filesystem::path out_dir = ".";
  bool quiet = false;
};

int cmd_verify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_converge(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);
int cmd_estimate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log);

/// Full command-line entry point; returns the process exit code.
int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nsalpha

#endif  // NSALPHA_CLI_HPP
