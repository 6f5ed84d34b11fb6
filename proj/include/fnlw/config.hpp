#ifndef FNLW_CONFIG_HPP
#define FNLW_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fnlw {

/// Invalid configuration: unknown key, malformed value or violated invariant.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Pass/fail thresholds. Every statistical or numerical threshold used by a
/// report or the acceptance suite lives here.
struct Tolerances {
  double slope_exact = 0.1;
  double slope_bound = 0.15;
  double slope_product = 0.2;
  double cauchy_slack = 0.15;
  double z_max = 3.0;
  double degrade_slack = 0.5;
  double split_half_z_max = 4.0;
  double chaos_slack = 3.0;
  double hermite_relative = 1e-9;
  double reversibility = 1e-11;
  double quadratic_energy = 1e-12;
  double hamiltonian_drift = 1e-6;
  double min_order = 1.9;
  double refinement_ratio_low = 3.0;
  double refinement_ratio_high = 5.0;
  double ess_fraction = 0.05;

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

/// Every run parameter. Parsed from flat `key = value` text (with optional
/// `command.key` lines that apply to one command only) and from flags.
struct RunConfig {
  std::string version;
  double alpha = 0.9;
  int m = 1;
  int N = 8;
  int grid = 0;  // lattice size M; 0 picks the smallest FFT-friendly size
  std::uint64_t seed = 1;
  long samples = 1000;
  double T = 1.0;
  double dt = 1e-3;
  double dt_quad = 0.02;
  int workers = 0;
  std::string out;
  std::string input;

  int l = 1;
  int k1 = 1, k = 3, k2 = 1;
  double p = 4.0, q = 4.0, s = 0.0;
  double beta = 0.2;
  long burnin = 1000;
  long thin = 1;
  long pilot = 50000;
  int chains = 8;
  double coupling = 1.0;
  std::vector<double> lambda_grid;
  std::vector<int> radii;
  int n_max = 64;
  int fit_lo = 3;
  int fit_hi = 0;
  int max_iters = 60;
  double picard_tol = 1e-11;
  int levels = 2;
  long store_every = 100;

  Tolerances tol;

  /// Shipped defaults (config/defaults.cfg) resolved for `command`.
  static RunConfig defaults(std::string_view command = {});

  /// Applies `key = value` lines on top of `base`. Lines `cmd.key = value`
  /// apply only when cmd == command, after all plain lines.
  static RunConfig parse(std::string_view text, std::string_view command, RunConfig base);
  static RunConfig load_file(const std::string& path, std::string_view command, RunConfig base);

  /// Sets one key from its text form. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static const std::vector<std::string>& keys();

  /// Plain `key = value` lines for every key, round-trip exact.
  std::string serialize() const;

  /// Throws ConfigError with a specific message.
  void validate() const;

  /// Lattice size after resolving grid = 0.
  int lattice_size() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

}  // namespace fnlw

#endif  // FNLW_CONFIG_HPP
