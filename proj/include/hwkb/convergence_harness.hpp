#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwkb/functional_norms.hpp"
#include "hwkb/grid_spectral.hpp"
#include "hwkb/hartree_solver.hpp"
#include "hwkb/singular_kernel.hpp"
#include "hwkb/wkb_builder.hpp"

namespace hwkb {

/// min(1, d - gamma); rejects gamma outside (0, d).
double expected_rate(int dim, double gamma);

/// Norms of u_exact - u_app.
NormReport error_report(const Field& u_exact, const Field& u_app);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< RMS misfit in log space
};

/// Least squares of log err against log eps.
RateFit fit_rate(const std::vector<std::pair<double, double>>& points);

struct ModeDescription {
  Vec3 kappa{0.0, 0.0, 0.0};
  GaussianProfile profile;
};

struct SweepConfig {
  KernelSpec kernel;
  double box_length = 0.0;
  int points = 0;
  std::vector<ModeDescription> modes;
  std::vector<double> epsilons;
  double final_time = 0.0;
  std::vector<double> sample_times;
  double dt_factor = 0.1;
  int quadrature_nodes = 64;
  std::string output;
  int threads = 1;

  Grid grid() const;
  ModeFamily family() const;
  /// Checks every invariant, including resolution for each eps and containment
  /// up to the final time. Throws ConfigError naming the rule.
  void validate() const;
};

struct SweepRecord {
  double eps = 0.0;
  double t = 0.0;
  double err_l2 = 0.0;
  double err_w = 0.0;
  double err_l2w = 0.0;
  double r_norm = 0.0;
  double z2_norm = 0.0;
  double mass_drift = 0.0;

  bool operator==(const SweepRecord&) const = default;
};

struct CheckOutcome {
  bool pass = false;
  double margin = 0.0;  ///< positive when passing
};

struct SweepResult {
  std::vector<SweepRecord> records;  ///< ordered by (eps descending, t ascending)
  std::vector<double> e_norms;       ///< amplitude E-norm for each record
  std::map<double, double> initial_errors;  ///< l2w error at t = 0 per eps
  std::map<double, double> wiener_growth;   ///< max_t |u(t)|_W / |u(0)|_W per eps
  std::vector<double> failed_epsilons;
  double beta_expected = 0.0;
  std::optional<double> beta_fitted;
  std::optional<double> c_fitted;
  std::optional<double> fit_residual;
  std::optional<double> remainder_slope;
  std::map<std::string, CheckOutcome> checks;
};

/// Runs evolve against assemble for each eps (concurrently over cfg.threads workers)
/// and fits max_t err_l2w against eps. A divergence-guard trip marks that eps failed.
SweepResult run_sweep(const SweepConfig& cfg);

struct ValidationLine {
  std::string name;
  bool pass = false;
  double margin = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationLine> lines;
  bool all_pass() const;
  const ValidationLine* find(const std::string& name) const;
};

/// Property campaigns and cross-checks on the configuration. Never throws for a
/// failed check; invalid configurations still throw ConfigError.
ValidationReport validate_suite(const SweepConfig& cfg, std::uint64_t seed = 20240601);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Writes sweep.csv, summary.json and loglog.svg into `dir` (created if needed).
/// `config_echo` is embedded verbatim in the summary.
void persist(const SweepResult& result, const std::string& config_echo, const std::filesystem::path& dir);

/// Reads a sweep.csv back.
std::vector<SweepRecord> read_csv(const std::filesystem::path& file);

/// Header line of sweep.csv.
const char* csv_header();

}  // namespace hwkb
