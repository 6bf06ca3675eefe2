#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "hwkb/convergence_harness.hpp"

namespace hwkb {

namespace {

constexpr int kAlgebraPairs = 1000;
constexpr int kHartreeDensities = 500;
constexpr double kCampaignSlack = 1e-6;
constexpr double kConstantTolerance = 1e-8;
constexpr double kIntegratorTolerance = 1e-5;
constexpr double kIdentityTolerance = 1e-6;
constexpr double kModulusTolerance = 1e-10;
constexpr double kActionTolerance = 1e-8;
constexpr double kTransportTolerance = 1e-6;
constexpr double kNormTolerance = 1e-12;

Grid campaign_grid(int dim) {
  static constexpr int points[] = {0, 256, 64, 32};
  return Grid(dim, 16.0, points[dim]);
}

// Random coefficients on |k_a| < N/8, so that products stay below N/4.
Field random_band_limited(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> band(1, g.points() / 8 - 1);
  std::uniform_real_distribution<double> decay(0.0, 1.5);
  const int b = band(rng);
  const double rate = decay(rng);
  SpectralField F(g);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto idx = g.unflatten(i);
    bool inside = true;
    double k2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const int k = g.wavenumber(idx[a]);
      inside = inside && std::abs(k) <= b;
      k2 += static_cast<double>(k) * k;
    }
    if (inside) F[i] = Complex{normal(rng), normal(rng)} * std::exp(-rate * std::sqrt(k2));
  }
  return inverse_transform(F);
}

Field random_density(const Grid& g, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> center(-3.0, 3.0), width(0.4, 1.5), amp(0.1, 2.0);
  Field h(g);
  const int m = count(rng);
  for (int j = 0; j < m; ++j) {
    GaussianProfile p;
    p.amplitude = amp(rng);
    p.width = width(rng);
    for (int a = 0; a < g.dim(); ++a) p.center[a] = center(rng);
    h += sample_profile(g, p);
  }
  return h;
}

std::string describe(const char* label, double value) {
  std::ostringstream os;
  os.precision(3);
  os << label << ' ' << value;
  return os.str();
}

ValidationLine algebra_campaign(int dim, std::mt19937_64& rng) {
  const Grid g = campaign_grid(dim);
  int violations = 0;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kAlgebraPairs; ++i) {
    const AlgebraCheck c = check_algebra_bound(random_band_limited(g, rng), random_band_limited(g, rng));
    const double rel = (c.rhs - c.lhs) / c.rhs;
    margin = std::min(margin, rel);
    if (rel < -kCampaignSlack) ++violations;
  }
  return {"algebra_campaign", violations == 0, margin, describe("violations of 1000:", violations)};
}

ValidationLine hartree_campaign(const KernelSpec& k, std::mt19937_64& rng) {
  const Grid g = campaign_grid(k.dim);
  int violations = 0;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kHartreeDensities; ++i) {
    const BoundCheck c = check_hartree_bound(k, random_density(g, rng));
    const double rel = (c.rhs - c.lhs) / c.rhs;
    margin = std::min(margin, rel);
    if (rel < -kCampaignSlack) ++violations;
  }
  return {"hartree_campaign", violations == 0, margin, describe("violations of 500:", violations)};
}

ValidationLine kernel_constant(const KernelSpec& k) {
  const double oracle = hartree_constant_quadrature(k.dim, k.gamma);
  const double rel = std::abs(k.c_const - oracle) / oracle;
  return {"kernel_constant", rel < kConstantTolerance, kConstantTolerance - rel, describe("relative error", rel)};
}

ValidationLine integrator_agreement(const SweepConfig& cfg, const ModeFamily& fam) {
  const double eps = cfg.epsilons.front();
  const double t0 = 0.1 * eps;
  const int steps = 64;
  const Field u0 = initial_data(fam, eps);
  const PicardOutcome pic = picard_evolve(u0, cfg.kernel, eps, t0, 1e-13, 60, steps);
  SolverParams p{eps, t0 / steps, t0, Scheme::strang};
  const Trajectory tr = evolve(u0, cfg.kernel, p, {t0});
  const double diff = l2w_norm(pic.state - tr.states.back());
  return {"integrator_agreement", diff < kIntegratorTolerance, kIntegratorTolerance - diff,
          describe("l2w difference", diff)};
}

// Richardson estimate of the Strang order from dt/2, dt/4, dt/8 at the largest eps,
// dt = dt_factor eps (the coarsest level is still pre-asymptotic).
ValidationLine strang_order(const SweepConfig& cfg, const ModeFamily& fam) {
  const double eps = cfg.epsilons.front();
  const double horizon = cfg.final_time;
  const Field u0 = initial_data(fam, eps);
  std::vector<Field> finals;
  double dt = 0.5 * std::min(cfg.dt_factor * eps, horizon);
  for (int level = 0; level < 3; ++level, dt *= 0.5) {
    SolverParams p{eps, dt, horizon, Scheme::strang};
    finals.push_back(evolve(u0, cfg.kernel, p, {horizon}).states.back());
  }
  const double e1 = l2w_norm(finals[0] - finals[1]);
  const double e2 = l2w_norm(finals[1] - finals[2]);
  const double order = std::log2(e1 / e2);
  const double margin = 0.2 - std::abs(order - 2.0);
  return {"strang_order", margin >= 0.0, margin, describe("observed order", order)};
}

ValidationLine free_propagator_norms(const SweepConfig& cfg, const ModeFamily& fam) {
  const double eps = cfg.epsilons.front();
  const Field u0 = initial_data(fam, eps);
  const Field u1 = free_propagator(u0, eps, cfg.final_time);
  const double dl2 = std::abs(l2_norm(u1) - l2_norm(u0)) / l2_norm(u0);
  const double dw = std::abs(wiener_norm(u1) - wiener_norm(u0)) / wiener_norm(u0);
  const double worst = std::max(dl2, dw);
  return {"free_propagator_norms", worst < kNormTolerance, kNormTolerance - worst,
          describe("relative change", worst)};
}

}  // namespace

bool ValidationReport::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const ValidationLine& l) { return l.pass; });
}

const ValidationLine* ValidationReport::find(const std::string& name) const {
  for (const auto& l : lines)
    if (l.name == name) return &l;
  return nullptr;
}

ValidationReport validate_suite(const SweepConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const ModeFamily fam = cfg.family();
  const KernelSpec& k = cfg.kernel;
  std::mt19937_64 rng(seed);

  ValidationReport rep;
  rep.lines.push_back(algebra_campaign(k.dim, rng));
  rep.lines.push_back(hartree_campaign(k, rng));
  rep.lines.push_back(kernel_constant(k));
  rep.lines.push_back(integrator_agreement(cfg, fam));
  rep.lines.push_back(strang_order(cfg, fam));
  rep.lines.push_back(free_propagator_norms(cfg, fam));

  double identity = 0.0, modulus = 0.0, transport = 0.0;
  for (double t : cfg.sample_times) {
    for (double eps : cfg.epsilons) identity = std::max(identity, ansatz_residual(fam, t, eps, k).identity_error);
    modulus = std::max(modulus, modulus_transport_defect(fam, snapshot(fam, t, k)));
    transport = std::max(transport, transport_residual(fam, t, k));
  }
  rep.lines.push_back({"ansatz_identity", identity < kIdentityTolerance, kIdentityTolerance - identity,
                       describe("max identity error", identity)});
  rep.lines.push_back({"modulus_transport", modulus < kModulusTolerance, kModulusTolerance - modulus,
                       describe("max defect", modulus)});
  rep.lines.push_back({"transport_residual", transport < kTransportTolerance, kTransportTolerance - transport,
                       describe("max residual", transport)});

  double action = 0.0;
  for (std::size_t j = 0; j < fam.size(); ++j) {
    const Field closed = action_phase(fam, j, cfg.final_time, k);
    const Field quad = action_phase_quadrature(fam, j, cfg.final_time, k, cfg.quadrature_nodes);
    action = std::max(action, (closed - quad).max_abs());
  }
  rep.lines.push_back({"action_quadrature", action < kActionTolerance, kActionTolerance - action,
                       describe("max difference", action)});

  const YNormSpec spec = fam.nspec();
  const int expected_n = (k.dim == 3 && k.gamma < 1.0) ? 3 : 2;
  rep.lines.push_back({"y_order", spec.n == expected_n, static_cast<double>(spec.n),
                       describe("derivative order n =", spec.n)});
  return rep;
}

}  // namespace hwkb
