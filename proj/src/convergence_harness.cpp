#include "hwkb/convergence_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace hwkb {

namespace {

constexpr double kBetaTolerance = 0.15;
constexpr double kBoundGrowth = 1.2;
constexpr double kRemainderSpread = 0.2;
constexpr double kMassTolerance = 1e-10;
constexpr double kInitialTolerance = 1e-12;
constexpr double kZ2Slack = 1e-6;

struct EpsOutcome {
  bool failed = false;
  std::vector<SweepRecord> records;
  std::vector<double> e_norms;
  double initial_error = 0.0;
  double wiener_growth = 0.0;
};

struct Reference {
  WkbSnapshot snap;
  double e_norm = 0.0;
};

EpsOutcome run_one(const SweepConfig& cfg, const ModeFamily& fam, const std::vector<Reference>& refs,
                   double eps) {
  EpsOutcome out;
  const Field u0 = initial_data(fam, eps);
  const SolverParams p = SolverParams::make(eps, cfg.dt_factor, cfg.final_time);
  Trajectory traj;
  try {
    traj = evolve(u0, cfg.kernel, p, cfg.sample_times);
  } catch (const DivergenceError&) {
    out.failed = true;
    return out;
  }

  out.initial_error = l2w_norm(traj.states[0] - assemble(fam, 0.0, eps, cfg.kernel));

  const double w0 = wiener_norm(traj.states[0]);
  const double m0 = traj.mass_log[0];
  const bool multi = fam.size() > 1;
  for (std::size_t s = 0; s < refs.size(); ++s) {
    const Field& u = traj.states[s + 1];
    const WkbSnapshot& snap = refs[s].snap;
    const NormReport err = error_report(u, assemble(fam, snap, eps));
    SweepRecord r;
    r.eps = eps;
    r.t = cfg.sample_times[s];
    r.err_l2 = err.l2;
    r.err_w = err.wiener;
    r.err_l2w = err.l2w;
    r.r_norm = multi ? l2w_norm(resonant_remainder(fam, snap, eps, cfg.kernel)) : 0.0;
    r.z2_norm = l2w_norm(z2_term(fam, snap, eps));
    r.mass_drift = m0 > 0.0 ? std::abs(traj.mass_log[s + 1] - m0) / m0 : 0.0;
    out.records.push_back(r);
    out.e_norms.push_back(refs[s].e_norm);
    out.wiener_growth = std::max(out.wiener_growth, w0 > 0.0 ? wiener_norm(u) / w0 : 0.0);
  }
  return out;
}

// Largest value of `field` over the sample times, one entry per successful eps.
std::vector<std::pair<double, double>> max_over_t(const SweepResult& res, double SweepRecord::*field) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : res.records) {
    if (pts.empty() || pts.back().first != r.eps)
      pts.emplace_back(r.eps, r.*field);
    else
      pts.back().second = std::max(pts.back().second, r.*field);
  }
  return pts;
}

bool all_positive(const std::vector<std::pair<double, double>>& pts) {
  return std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.second > 0.0; });
}

void add_checks(SweepResult& res, const SweepConfig& cfg, const ModeFamily& fam) {
  const int d = cfg.kernel.dim;
  const double gamma = cfg.kernel.gamma;

  double worst_initial = 0.0;
  for (const auto& [eps, e] : res.initial_errors) worst_initial = std::max(worst_initial, e);
  res.checks["initial_exactness"] = {worst_initial < kInitialTolerance, kInitialTolerance - worst_initial};

  double drift = 0.0;
  for (const auto& r : res.records) drift = std::max(drift, r.mass_drift);
  res.checks["mass_conservation"] = {drift < kMassTolerance, kMassTolerance - drift};

  double growth = 0.0;
  for (const auto& [eps, g] : res.wiener_growth) growth = std::max(growth, g);
  res.checks["wiener_ball"] = {growth <= 2.0, 2.0 - growth};

  double z2_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < res.records.size(); ++i)
    z2_excess = std::max(z2_excess, res.records[i].z2_norm / res.e_norms[i] - 1.0);
  if (!res.records.empty()) res.checks["z2_bound"] = {z2_excess <= kZ2Slack, kZ2Slack - z2_excess};

  if (!res.failed_epsilons.empty())
    res.checks["no_divergence"] = {false, -static_cast<double>(res.failed_epsilons.size())};

  const auto err = max_over_t(res, &SweepRecord::err_l2w);
  if (err.size() < 2) return;

  double monotone = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < err.size(); ++i)
    monotone = std::min(monotone, (err[i - 1].second - err[i].second) / err[i - 1].second);
  res.checks["monotone_error"] = {monotone > 0.0, monotone};

  if (all_positive(err)) {
    const RateFit fit = fit_rate(err);
    res.beta_fitted = fit.slope;
    res.fit_residual = fit.residual;
    const double floor = res.beta_expected - kBetaTolerance;
    res.checks["beta_slope"] = {fit.slope >= floor, fit.slope - floor};

    // One constant over the sweep: C = max err / eps^beta, and the ratio must not
    // grow toward small eps beyond 20% (the bound is not being outrun).
    double c = 0.0;
    for (const auto& [eps, e] : err) c = std::max(c, e / std::pow(eps, res.beta_expected));
    res.c_fitted = c;
    const double first = err.front().second / std::pow(err.front().first, res.beta_expected);
    const double last = err.back().second / std::pow(err.back().first, res.beta_expected);
    res.checks["rate_bound"] = {last <= kBoundGrowth * first, (kBoundGrowth * first - last) / first};
  }

  if (fam.size() < 2) return;
  const auto rem = max_over_t(res, &SweepRecord::r_norm);
  if (!all_positive(rem)) return;
  const RateFit rfit = fit_rate(rem);
  res.remainder_slope = rfit.slope;
  const double target = d - gamma;
  res.checks["remainder_slope"] = {std::abs(rfit.slope - target) <= kBetaTolerance,
                                   kBetaTolerance - std::abs(rfit.slope - target)};

  // C_eps = max_t r / (delta^{gamma-d} E(t)^3 eps^{d-gamma}); stable around its geometric mean.
  std::vector<double> cs;
  for (std::size_t i = 0; i < res.records.size(); ++i) {
    const auto& r = res.records[i];
    const double scale = std::pow(fam.delta(), gamma - d) * std::pow(res.e_norms[i], 3) * std::pow(r.eps, d - gamma);
    const double c = r.r_norm / scale;
    if (i == 0 || r.eps != res.records[i - 1].eps)
      cs.push_back(c);
    else
      cs.back() = std::max(cs.back(), c);
  }
  double log_mean = 0.0;
  for (double c : cs) log_mean += std::log(c);
  const double geo = std::exp(log_mean / cs.size());
  double spread = 0.0;
  for (double c : cs) spread = std::max(spread, std::abs(c / geo - 1.0));
  res.checks["remainder_constant"] = {spread <= kRemainderSpread, kRemainderSpread - spread};
}

}  // namespace

double expected_rate(int dim, double gamma) {
  if (!(gamma > 0.0 && gamma < dim)) throw ConfigError("gamma must satisfy 0 < gamma < d");
  return std::min(1.0, dim - gamma);
}

NormReport error_report(const Field& u_exact, const Field& u_app) {
  if (!(u_exact.grid() == u_app.grid())) throw std::invalid_argument("error_report: fields live on different grids");
  return norm_report(u_exact - u_app);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("fit_rate needs at least 2 points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [e, v] : points) {
    if (!(e > 0.0) || !(v > 0.0)) throw std::invalid_argument("fit_rate needs positive eps and error values");
    sx += std::log(e);
    sy += std::log(v);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [e, v] : points) {
    sxx += (std::log(e) - mx) * (std::log(e) - mx);
    sxy += (std::log(e) - mx) * (std::log(v) - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_rate needs at least two distinct eps values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [e, v] : points) {
    const double m = std::log(v) - (fit.intercept + fit.slope * std::log(e));
    ss += m * m;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

Grid SweepConfig::grid() const { return Grid(kernel.dim, box_length, points); }

ModeFamily SweepConfig::family() const {
  const Grid g = grid();
  std::vector<Mode> ms;
  ms.reserve(modes.size());
  for (const auto& m : modes) ms.push_back(make_mode(g, m.kappa, m.profile));
  return ModeFamily(std::move(ms), YNormSpec::make(kernel.dim, kernel.gamma));
}

void SweepConfig::validate() const {
  if (kernel.dim < 1 || kernel.dim > 3) throw ConfigError("dimension must be 1, 2 or 3");
  if (!(kernel.gamma > 0.0 && kernel.gamma < kernel.dim)) throw ConfigError("gamma must satisfy 0 < gamma < d");
  if (epsilons.empty()) throw ConfigError("epsilons must not be empty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw ConfigError("epsilons must be positive");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1])) throw ConfigError("epsilons must be strictly decreasing");
  }
  if (!(final_time > 0.0)) throw ConfigError("final_time must be positive");
  if (sample_times.empty()) throw ConfigError("sample_times must not be empty");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > 0.0) || sample_times[i] > final_time)
      throw ConfigError("sample_times must lie in (0, final_time]");
    if (i > 0 && !(sample_times[i] > sample_times[i - 1]))
      throw ConfigError("sample_times must be strictly increasing");
  }
  if (!(dt_factor > 0.0) || dt_factor > SolverParams::kMaxDtFactor)
    throw ConfigError("dt_factor must satisfy 0 < dt_factor <= 0.25");
  if (quadrature_nodes < 8 || quadrature_nodes % 2 != 0)
    throw ConfigError("quadrature_nodes must be even and at least 8");

  const ModeFamily fam = family();
  check_containment(fam, final_time);
  for (double eps : epsilons) {
    check_solver_resolution(fam, eps);
    if (fam.size() > 1) check_remainder_resolution(fam, eps);
  }
}

SweepResult run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const ModeFamily fam = cfg.family();

  // The WKB side does not depend on eps.
  std::vector<Reference> refs;
  for (double t : cfg.sample_times) {
    Reference r{snapshot(fam, t, cfg.kernel), 0.0};
    r.e_norm = e_norm(r.snap.amplitudes, fam.nspec());
    refs.push_back(std::move(r));
  }

  const std::size_t n = cfg.epsilons.size();
  std::vector<EpsOutcome> outcomes(n);
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        outcomes[i] = run_one(cfg, fam, refs, cfg.epsilons[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(n, cfg.threads > 0 ? cfg.threads : hw);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SweepResult res;
  res.beta_expected = expected_rate(cfg.kernel.dim, cfg.kernel.gamma);
  for (std::size_t i = 0; i < n; ++i) {
    const double eps = cfg.epsilons[i];
    if (outcomes[i].failed) {
      res.failed_epsilons.push_back(eps);
      continue;
    }
    res.records.insert(res.records.end(), outcomes[i].records.begin(), outcomes[i].records.end());
    res.e_norms.insert(res.e_norms.end(), outcomes[i].e_norms.begin(), outcomes[i].e_norms.end());
    res.initial_errors[eps] = outcomes[i].initial_error;
    res.wiener_growth[eps] = outcomes[i].wiener_growth;
  }
  add_checks(res, cfg, fam);
  return res;
}

}  // namespace hwkb
