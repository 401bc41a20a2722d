#include "nsalpha/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "nsalpha/diagnostics.hpp"
#include "nsalpha/integrator.hpp"
#include "nsalpha/verify.hpp"

namespace nsalpha {

using nlohmann::json;

ConfigError::ConfigError(std::string key_path, const std::string& why)
    : std::invalid_argument((key_path.empty() ? std::string("config") : key_path) + ": " + why),
      key_path_(std::move(key_path)) {}

namespace {

// One JSON object being read; every key must be consumed exactly once.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "must be an object");
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& at(const std::string& key) {
    if (!j_.contains(key)) throw ConfigError(key_path(key), "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(key_path(key), "must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key_path(key), "must be finite");
    return x;
  }

  double positive(const std::string& key) {
    const double x = number(key);
    if (!(x > 0.0)) throw ConfigError(key_path(key), "must be positive");
    return x;
  }

  double non_negative(const std::string& key) {
    const double x = number(key);
    if (!(x >= 0.0)) throw ConfigError(key_path(key), "must be non-negative");
    return x;
  }

  long long integer(const std::string& key, long long lo) {
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(key_path(key), "must be an integer");
    const auto x = v.get<long long>();
    if (x < lo) throw ConfigError(key_path(key), "must be >= " + std::to_string(lo));
    return x;
  }

  bool boolean(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_boolean()) throw ConfigError(key_path(key), "must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(key_path(key), "must be a string");
    return v.get<std::string>();
  }

  Section object(const std::string& key) { return Section(at(key), key_path(key)); }

  const json& array(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_array()) throw ConfigError(key_path(key), "must be a list");
    return v;
  }

  void finish() const {
    for (const auto& [k, _] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError(key_path(k), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<double> number_list(const json& arr, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) {
      throw ConfigError(path + "[" + std::to_string(i) + "]", "must be a number");
    }
    out.push_back(arr[i].get<double>());
  }
  return out;
}

}  // namespace

RunConfig parse_config(const json& j_in, std::optional<int> seeds_override) {
  json j = j_in;
  if (seeds_override) {
    if (*seeds_override < 1) throw ConfigError("--seeds", "must be >= 1");
    if (j.is_object() && j.contains("run") && j["run"].is_object()) j["run"]["seeds"] = *seeds_override;
  }
  RunConfig c;
  Section root(j, "");

  {
    Section s = root.object("domain");
    c.L = s.positive("L");
    s.finish();
  }
  {
    Section s = root.object("physics");
    c.nu = s.positive("nu");
    s.finish();
  }
  {
    Section s = root.object("time");
    c.T = s.positive("T");
    c.dt = s.positive("dt");
    if (c.dt > c.T * (1.0 + 1e-12)) throw ConfigError("time.dt", "must not exceed time.T");
    const double steps = std::round(c.T / c.dt);
    if (std::abs(steps * c.dt - c.T) > 1e-9 * c.T) {
      throw ConfigError("time.dt", "time.T must be an integer multiple of time.dt");
    }
    s.finish();
  }
  {
    Section s = root.object("galerkin");
    c.N = static_cast<int>(s.integer("N", 1));
    c.grid_size = static_cast<int>(s.integer("grid_size", 2));
    if (c.grid_size % 2 != 0) throw ConfigError("galerkin.grid_size", "must be even");
    c.alpha = s.non_negative("alpha");
    s.finish();
  }
  {
    Section s = root.object("noise");
    const auto kind = s.string("kind");
    try {
      c.noise.kind = noise_kind_from_string(kind);
    } catch (const std::exception& e) {
      throw ConfigError("noise.kind", e.what());
    }
    c.noise.sigma0 = s.non_negative("sigma0");
    c.noise.lambda0 = s.number("lambda0");
    if (c.noise.kind == NoiseKind::additive && c.noise.lambda0 != 0.0) {
      throw ConfigError("noise.lambda0", "must be 0 for additive noise");
    }
    c.noise.decay_s = s.number("decay_s");
    if (!(c.noise.decay_s > 1.0)) throw ConfigError("noise.decay_s", "must be > 1");
    s.finish();
  }
  {
    Section s = root.object("initial_condition");
    c.initial.kind = s.string("kind");
    if (c.initial.kind == "modes") {
      const auto& arr = s.array("modes");
      if (arr.empty()) throw ConfigError("initial_condition.modes", "must not be empty");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string path = "initial_condition.modes[" + std::to_string(i) + "]";
        Section m(arr[i], path);
        const auto& k = m.array("k");
        if (k.size() != 2 || !k[0].is_number_integer() || !k[1].is_number_integer()) {
          throw ConfigError(path + ".k", "must be a list of two integers");
        }
        InitialMode im;
        im.k1 = k[0].get<int>();
        im.k2 = k[1].get<int>();
        const auto parity = m.string("parity");
        if (parity == "cos") {
          im.parity = Parity::cos;
        } else if (parity == "sin") {
          im.parity = Parity::sin;
        } else {
          throw ConfigError(path + ".parity", "must be \"cos\" or \"sin\"");
        }
        im.value = m.number("value");
        m.finish();
        c.initial.modes.push_back(im);
      }
    } else if (c.initial.kind == "random") {
      c.initial.amplitude = s.non_negative("amplitude");
      c.initial.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
    } else {
      throw ConfigError("initial_condition.kind", "must be \"modes\" or \"random\"");
    }
    s.finish();
  }
  {
    Section s = root.object("run");
    c.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
    c.seeds = static_cast<int>(s.integer("seeds", 1));
    c.p_moment = static_cast<int>(s.integer("p_moment", 1));
    c.nonlinear = s.boolean("nonlinear");
    c.threads = static_cast<int>(s.integer("threads", 0));
    s.finish();
  }
  {
    Section s = root.object("schedule");
    c.schedule.c_min = s.positive("c_min");
    c.schedule.c_max = s.positive("c_max");
    if (c.schedule.c_max < c.schedule.c_min) throw ConfigError("schedule.c_max", "must be >= c_min");
    c.schedule.exponent = s.number("exponent");
    try {
      c.schedule.pick = alpha_pick_from_string(s.string("pick"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("schedule.pick", e.what());
    }
    s.finish();
  }
  {
    Section s = root.object("converge");
    const auto& arr = s.array("N_list");
    if (arr.empty()) throw ConfigError("converge.N_list", "must not be empty");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number_integer() || arr[i].get<long long>() < 1) {
        throw ConfigError("converge.N_list[" + std::to_string(i) + "]", "must be a positive integer");
      }
      c.N_list.push_back(arr[i].get<int>());
    }
    c.N_ref = static_cast<int>(s.integer("N_ref", 1));
    if (const auto& ov = s.at("alpha_override"); !ov.is_null()) {
      if (!ov.is_number() || !(ov.get<double>() >= 0.0)) {
        throw ConfigError("converge.alpha_override", "must be null or a number >= 0");
      }
      c.alpha_override = ov.get<double>();
    }
    for (std::size_t i = 0; i < c.N_list.size(); ++i) {
      if (c.N_list[i] > c.N_ref) {
        throw ConfigError("converge.N_list[" + std::to_string(i) + "]", "exceeds converge.N_ref");
      }
    }
    s.finish();
  }
  {
    Section s = root.object("verify");
    c.verify.N = static_cast<int>(s.integer("N", 1));
    c.verify.samples = static_cast<int>(s.integer("samples", 1));
    c.verify.seed = static_cast<std::uint64_t>(s.integer("seed", 0));
    c.verify.filter_N = static_cast<int>(s.integer("filter_N", 1));
    c.verify.filter_alphas = number_list(s.array("filter_alphas"), "verify.filter_alphas");
    for (std::size_t i = 0; i < c.verify.filter_alphas.size(); ++i) {
      const double a = c.verify.filter_alphas[i];
      if (!(a >= 0.0) || !std::isfinite(a)) {
        throw ConfigError("verify.filter_alphas[" + std::to_string(i) + "]", "must be >= 0");
      }
    }
    c.verify.monotonicity_alpha = s.non_negative("monotonicity_alpha");
    c.verify.kappa = s.positive("kappa");
    s.finish();
  }
  root.finish();

  const int need = StokesBasis::min_grid_size(StokesBasis::max_wavenumber_for(c.max_N()));
  if (c.grid_size < need) {
    throw ConfigError("galerkin.grid_size", "must be >= " + std::to_string(need) +
                                                " for N = " + std::to_string(c.max_N()));
  }
  // Resolves mode lookups now so a bad wavevector is reported as a config error.
  (void)c.initial_field();
  c.canonical = j;
  return c;
}

int RunConfig::max_N() const {
  int m = std::max({N, N_ref, verify.N, verify.filter_N});
  for (int n : N_list) m = std::max(m, n);
  return m;
}

SpectralField RunConfig::initial_field() const {
  const auto basis = StokesBasis::build(L, max_N(), grid_size);
  SpectralField u(basis);
  if (initial.kind == "random") {
    std::mt19937_64 rng(initial.seed);
    return random_field(basis, rng, initial.amplitude);
  }
  for (std::size_t i = 0; i < initial.modes.size(); ++i) {
    const auto& m = initial.modes[i];
    int found = -1;
    for (int j = 0; j < basis->size(); ++j) {
      const auto& bm = basis->mode(j);
      if (bm.k[0] == m.k1 && bm.k[1] == m.k2 && bm.parity == m.parity) found = j;
    }
    if (found < 0) {
      throw ConfigError("initial_condition.modes[" + std::to_string(i) + "].k",
                        "wavevector (" + std::to_string(m.k1) + ", " + std::to_string(m.k2) +
                            ") is not among the first " + std::to_string(max_N()) +
                            " basis modes (use k1 > 0, or k1 = 0 and k2 > 0)");
    }
    u[found] += m.value;
  }
  return u;
}

ExperimentSetup RunConfig::setup() const {
  ExperimentSetup s;
  s.L = L;
  s.nu = nu;
  s.T = T;
  s.dt = dt;
  s.grid_size = grid_size;
  s.noise = noise;
  s.u0 = initial_field();
  s.p_moment = p_moment;
  s.nonlinear = nonlinear;
  return s;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
}

RunConfig load_config(const std::filesystem::path& path, std::optional<int> seeds_override) {
  return parse_config(read_json_file(path), seeds_override);
}

std::string canonical_dump(const json& j) { return j.dump(); }

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::string config_hash(const json& j) { return sha256_hex(canonical_dump(j)); }

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

namespace {

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) s_ << (i ? "," : "") << header[i];
    s_ << '\n';
    width_ = header.size();
  }
  CsvWriter& operator<<(double x) { return cell(format_double(x)); }
  CsvWriter& operator<<(int x) { return cell(std::to_string(x)); }
  CsvWriter& operator<<(std::uint64_t x) { return cell(std::to_string(x)); }
  std::string str() const { return s_.str(); }

 private:
  CsvWriter& cell(const std::string& text) {
    s_ << (col_ ? "," : "") << text;
    if (++col_ == width_) {
      s_ << '\n';
      col_ = 0;
    }
    return *this;
  }
  std::ostringstream s_;
  std::size_t width_ = 0;
  std::size_t col_ = 0;
};

json estimate_json(const Estimate& e) {
  return {{"mean", e.mean}, {"stderr", e.has_stderr ? json(e.stderr_) : json(nullptr)}};
}

void write_manifest(const RunConfig& cfg, const CommandOptions& opt, const std::string& experiment,
                    const std::vector<std::string>& outputs) {
  json m;
  m["artifact_version"] = kArtifactVersion;
  m["config_hash"] = config_hash(cfg.canonical);
  m["experiment"] = experiment;
  m["outputs"] = outputs;
  m["config"] = cfg.canonical;
  write_file_atomic(opt.out_dir / (experiment + "_manifest.json"), m.dump(2) + "\n");
}

const std::vector<std::string> kMomentColumns = {
    "sup_ubar_alpha_2p",      "int_dissipation_p", "sup_v_2p",  "sup_grad_ubar_alpha_2p",
    "int_A_ubar_alpha_sq",    "sup_grad_v_2p",     "int_Av_sq"};

void put_moments(CsvWriter& w, const MomentFunctionals& m) {
  w << m.sup_ubar_alpha_2p << m.int_dissipation_p << m.sup_v_2p << m.sup_grad_ubar_alpha_2p
    << m.int_A_ubar_alpha_sq << m.sup_grad_v_2p << m.int_Av_sq;
}

json moments_json(const ConvergenceRecord& r) {
  return {{"sup_ubar_alpha_2p", estimate_json(r.sup_ubar_alpha_2p)},
          {"int_dissipation_p", estimate_json(r.int_dissipation_p)},
          {"sup_v_2p", estimate_json(r.sup_v_2p)},
          {"sup_grad_ubar_alpha_2p", estimate_json(r.sup_grad_ubar_alpha_2p)},
          {"int_A_ubar_alpha_sq", estimate_json(r.int_A_ubar_alpha_sq)},
          {"sup_grad_v_2p", estimate_json(r.sup_grad_v_2p)},
          {"int_Av_sq", estimate_json(r.int_Av_sq)}};
}

json property_json(const PropertyResult& p) {
  return {{"name", p.name},
          {"max_residual", p.max_residual},
          {"tolerance", p.tolerance},
          {"samples", p.samples},
          {"passed", p.passed()}};
}

}  // namespace

int cmd_verify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const auto& v = cfg.verify;
  const auto basis = StokesBasis::build(cfg.L, v.N, cfg.grid_size);
  const auto filter_basis = StokesBasis::build(cfg.L, v.filter_N, cfg.grid_size);

  std::vector<PropertyResult> props = trilinear_identities(basis, v.samples, v.seed);
  for (auto& p : filter_identities(filter_basis, v.filter_alphas, v.samples, v.seed + 1)) {
    props.push_back(p);
  }
  const auto ratios = bound_ratios(basis, v.samples, v.seed + 2);
  const auto model = cfg.noise.realize(*basis);
  const auto mono =
      monotonicity_sweep(basis, v.monotonicity_alpha, cfg.nu, model, v.kappa, v.samples, v.seed + 3);

  bool ok = mono.status != CheckStatus::violated;
  json report;
  report["properties"] = json::array();
  for (const auto& p : props) {
    report["properties"].push_back(property_json(p));
    ok = ok && p.passed();
    if (!opt.quiet) {
      log << (p.passed() ? "PASS " : "FAIL ") << p.name << " max_residual=" << format_double(p.max_residual)
          << " tol=" << format_double(p.tolerance) << '\n';
    }
  }
  report["bound_ratios"] = {{"btilde_l4_h1", ratios.btilde}, {"ns_l2_h2", ratios.ns}};
  report["s2"] = {{"lipschitz", mono.s2.lipschitz}, {"k1", mono.s2.k1},
                  {"k2", mono.s2.k2},               {"poincare", mono.s2.poincare},
                  {"threshold", mono.s2.threshold}, {"monotonicity_ok", mono.s2.monotonicity_ok}};
  report["monotonicity"] = {{"status", to_string(mono.status)},
                            {"min_gap", mono.min_gap},
                            {"pairs", mono.pairs},
                            {"kappa", mono.kappa},
                            {"alpha", v.monotonicity_alpha}};
  report["passed"] = ok;
  report["config_hash"] = config_hash(cfg.canonical);
  if (!opt.quiet) {
    log << "monotonicity: " << to_string(mono.status) << " (min gap " << format_double(mono.min_gap)
        << ", L_g " << format_double(mono.s2.lipschitz) << " vs threshold "
        << format_double(mono.s2.threshold) << ")\n";
    log << (ok ? "verify: all properties hold\n" : "verify: property failure\n");
  }
  write_file_atomic(opt.out_dir / "verify_report.json", report.dump(2) + "\n");
  write_manifest(cfg, opt, "verify", {"verify_report.json"});
  return ok ? exit_ok : exit_failure;
}

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const auto setup = cfg.setup();
  auto sim = setup.config_for(cfg.N, cfg.alpha, cfg.seed);
  sim.snapshot_stride = 0;
  const auto traj = run(sim, setup.u0);
  const auto& d = traj.diagnostics;
  CsvWriter w({"t", "energy_l2_sq", "energy_alpha_sq", "grad_alpha_sq", "Av_sq", "l4_norm4"});
  for (std::size_t n = 0; n < traj.times.size(); ++n) {
    w << traj.times[n] << d.ubar_l2_sq[n] << d.ubar_alpha_sq[n] << d.grad_ubar_alpha_sq[n] << d.Av_sq[n]
      << d.v_l4_4[n];
  }
  write_file_atomic(opt.out_dir / "trajectory.csv", w.str());
  write_manifest(cfg, opt, "simulate", {"trajectory.csv"});
  if (!opt.quiet) {
    log << "simulate: " << traj.times.size() << " rows, final ||u_bar||_alpha^2 = "
        << format_double(d.ubar_alpha_sq.back()) << '\n';
  }
  return exit_ok;
}

int cmd_converge(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const auto setup = cfg.setup();
  PairedRunOptions popt;
  popt.alpha_override = cfg.alpha_override;
  const auto res = convergence_ladder(setup, cfg.N_list, cfg.N_ref, cfg.schedule, cfg.seed,
                                      cfg.seeds, cfg.threads, popt);

  std::vector<std::string> header = {"N",
                                     "alpha",
                                     "seed",
                                     "strong_error_sup",
                                     "strong_error_final",
                                     "ubar_error_sup",
                                     "ubar_error_final"};
  header.insert(header.end(), kMomentColumns.begin(), kMomentColumns.end());
  CsvWriter w(header);
  for (const auto& r : res.rows) {
    w << r.N << r.alpha << r.seed << r.strong_error_sup << r.strong_error_final << r.ubar_error_sup
      << r.ubar_error_final;
    put_moments(w, r.moments);
  }

  json summary;
  summary["config_hash"] = config_hash(cfg.canonical);
  summary["N_ref"] = cfg.N_ref;
  summary["p_moment"] = cfg.p_moment;
  summary["records"] = json::array();
  for (const auto& s : res.summary) {
    json r = {{"N", s.N},
              {"alpha", s.alpha},
              {"seeds", s.seeds},
              {"flagged", s.flagged},
              {"strong_error_sup", estimate_json(s.strong_error_sup)},
              {"strong_error_final", estimate_json(s.strong_error_final)},
              {"ubar_error_sup", estimate_json(s.ubar_error_sup)},
              {"ubar_error_final", estimate_json(s.ubar_error_final)},
              {"moments", moments_json(s)}};
    summary["records"].push_back(r);
    if (!opt.quiet) {
      log << "N=" << s.N << " alpha=" << format_double(s.alpha)
          << " E sup|v_N - v_ref|^2 = " << format_double(s.strong_error_sup.mean) << " +- "
          << format_double(s.strong_error_sup.stderr_) << '\n';
    }
  }
  write_file_atomic(opt.out_dir / "convergence.csv", w.str());
  write_file_atomic(opt.out_dir / "convergence_summary.json", summary.dump(2) + "\n");
  write_manifest(cfg, opt, "converge", {"convergence.csv", "convergence_summary.json"});
  return exit_ok;
}

int cmd_estimate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& log) {
  const auto setup = cfg.setup();
  const auto res = moment_ensemble(setup, cfg.N, cfg.alpha, cfg.seed, cfg.seeds, cfg.threads);

  std::vector<std::string> header = {"N", "alpha", "seed", "p"};
  header.insert(header.end(), kMomentColumns.begin(), kMomentColumns.end());
  CsvWriter w(header);
  for (std::size_t i = 0; i < res.per_seed.size(); ++i) {
    w << cfg.N << cfg.alpha << static_cast<std::uint64_t>(cfg.seed + i) << cfg.p_moment;
    put_moments(w, res.per_seed[i]);
  }
  json summary = {{"config_hash", config_hash(cfg.canonical)},
                  {"N", cfg.N},
                  {"alpha", cfg.alpha},
                  {"p_moment", cfg.p_moment},
                  {"seeds", res.summary.seeds},
                  {"flagged", res.summary.flagged},
                  {"moments", moments_json(res.summary)},
                  {"sup_of_mean_ubar_alpha_2p", res.sup_of_mean_ubar_alpha_2p},
                  {"mean_of_sup_ubar_alpha_2p", res.mean_of_sup_ubar_alpha_2p}};
  write_file_atomic(opt.out_dir / "moments.csv", w.str());
  write_file_atomic(opt.out_dir / "moments_summary.json", summary.dump(2) + "\n");
  write_manifest(cfg, opt, "estimate", {"moments.csv", "moments_summary.json"});
  if (!opt.quiet) {
    log << "estimate: " << res.summary.seeds << " seeds, E sup ||u_bar||_alpha^2p = "
        << format_double(res.mean_of_sup_ubar_alpha_2p) << ", sup E = "
        << format_double(res.sup_of_mean_ubar_alpha_2p) << '\n';
  }
  return exit_ok;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Galerkin simulator for the stochastic Navier-Stokes-alpha model on the 2D torus"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  std::optional<int> seeds;
  bool quiet = false;

  struct Command {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, const CommandOptions&, std::ostream&);
  };
  const Command commands[] = {
      {"verify", "Run the operator and monotonicity property suite", cmd_verify},
      {"simulate", "Integrate one trajectory and write its diagnostics", cmd_simulate},
      {"converge", "Paired-path convergence ladder against the alpha = 0 reference", cmd_converge},
      {"estimate", "Moment functionals over a seed ensemble", cmd_estimate},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", config_path, "JSON config file (comments allowed)")->required();
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--seeds", seeds, "Override run.seeds");
    sub->add_flag("--quiet", quiet, "Suppress progress output");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return exit_usage;
  }

  try {
    const auto cfg = load_config(config_path, seeds);
    const CommandOptions opt{out_dir, quiet};
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) return commands[i].fn(cfg, opt, out);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_usage;
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << '\n';
    return exit_blowup;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_failure;
  }
  return exit_usage;
}

}  // namespace nsalpha
