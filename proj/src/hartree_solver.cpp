#include "hwkb/hartree_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hwkb/functional_norms.hpp"

namespace hwkb {

namespace {

constexpr double kDivergenceFactor = 4.0;

double spectral_l2(const SpectralField& F) {
  double s = 0.0;
  for (const auto& c : F.coefficients()) s += std::norm(c);
  return std::sqrt(s * F.grid().dual_cell_volume());
}

double spectral_l2w(const SpectralField& F) { return spectral_l2(F) + wiener_norm(F); }

std::string divergence_message(double time, double ratio) {
  std::ostringstream os;
  os << "divergence guard tripped at t = " << time << ": L2+W norm grew to " << ratio
     << "x its initial value";
  return os.str();
}

// Half kinetic, potential phase, half kinetic, all on spectral coefficients.
void strang_in_place(SpectralField& F, const KernelMultiplier& k, double eps, double dt) {
  free_propagator_coefficients(F, eps, 0.5 * dt);
  Field u = inverse_transform(F);
  const Field v = hartree_potential(k, u);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::polar(1.0, -dt * v[i].real());
  F = forward_transform(u);
  free_propagator_coefficients(F, eps, 0.5 * dt);
}

}  // namespace

SolverParams SolverParams::make(double eps, double dt_factor, double final_time) {
  SolverParams p{eps, dt_factor * eps, final_time, Scheme::strang};
  if (dt_factor > 0.0 && p.dt > final_time) p.dt = final_time;
  p.validate();
  return p;
}

void SolverParams::validate() const {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(final_time > 0.0)) throw ConfigError("final time must be positive");
  if (!(dt > 0.0) || dt > final_time) throw ConfigError("time step must satisfy 0 < dt <= T");
  if (dt > kMaxDtFactor * eps * (1.0 + 1e-12))
    throw ConfigError("time step violates the resolution rule dt <= 0.25 eps");
}

double Trajectory::max_mass_drift() const {
  if (mass_log.empty() || mass_log.front() == 0.0) return 0.0;
  double drift = 0.0;
  for (double m : mass_log) drift = std::max(drift, std::abs(m - mass_log.front()) / mass_log.front());
  return drift;
}

DivergenceError::DivergenceError(double time, double ratio)
    : std::runtime_error(divergence_message(time, ratio)), time_(time), ratio_(ratio) {}

void free_propagator_coefficients(SpectralField& F, double eps, double t) {
  if (t == 0.0) return;
  const Grid& g = F.grid();
  for (std::size_t i = 0; i < F.size(); ++i) {
    const Vec3 xi = g.frequency_vector(i);
    double xi2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) xi2 += xi[a] * xi[a];
    F[i] *= std::polar(1.0, -0.5 * eps * t * xi2);
  }
}

Field free_propagator(const Field& f, double eps, double t) {
  if (t == 0.0) return f;
  SpectralField F = forward_transform(f);
  free_propagator_coefficients(F, eps, t);
  return inverse_transform(F);
}

Field hartree_potential(const KernelMultiplier& k, const Field& u) {
  Field v = convolve(k, modulus_squared(u));
  const double lambda = k.kernel().lambda;
  for (auto& x : v.values()) x = lambda * x.real();
  return v;
}

Field hartree_potential(const KernelSpec& k, const Field& u) {
  return hartree_potential(KernelMultiplier(k, u.grid()), u);
}

Field strang_step(const Field& u, const KernelMultiplier& k, const SolverParams& p) {
  SpectralField F = forward_transform(u);
  strang_in_place(F, k, p.eps, p.dt);
  return inverse_transform(F);
}

Field strang_step(const Field& u, const KernelSpec& k, const SolverParams& p) {
  return strang_step(u, KernelMultiplier(k, u.grid()), p);
}

Trajectory evolve(const Field& u0, const KernelSpec& k, const SolverParams& p,
                  const std::vector<double>& samples) {
  p.validate();
  if (!u0.all_finite()) throw std::invalid_argument("initial data must be finite");
  double previous = 0.0;
  for (double t : samples) {
    if (t < previous || t > p.final_time * (1.0 + 1e-12))
      throw ConfigError("sample times must be nondecreasing and lie in [0, T]");
    previous = t;
  }

  const KernelMultiplier mult(k, u0.grid());
  SpectralField F = forward_transform(u0);
  const double initial_l2w = spectral_l2w(F);

  Trajectory traj;
  auto record = [&](double t, Field state) {
    traj.mass_log.push_back(l2_norm(state));
    traj.sample_times.push_back(t);
    traj.states.push_back(std::move(state));
  };
  record(0.0, u0);

  double now = 0.0;
  for (double target : samples) {
    const double gap = target - now;
    if (gap <= 0.0) continue;
    const int steps = static_cast<int>(std::ceil(gap / p.dt * (1.0 - 1e-12)));
    const double dt = gap / steps;
    for (int s = 0; s < steps; ++s) {
      strang_in_place(F, mult, p.eps, dt);
      const double norm = spectral_l2w(F);
      if (!std::isfinite(norm) || norm > kDivergenceFactor * initial_l2w)
        throw DivergenceError(now + (s + 1) * dt, initial_l2w > 0.0 ? norm / initial_l2w : norm);
    }
    now = target;
    record(target, inverse_transform(F));
  }
  return traj;
}

PicardOutcome picard_evolve(const Field& u0, const KernelSpec& k, double eps, double T0, double tol,
                            int max_iter, int steps) {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(T0 > 0.0)) throw ConfigError("Picard horizon T0 must be positive");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (steps <= 0) steps = std::max(16, static_cast<int>(std::ceil(T0 / (0.1 * eps))));

  const Grid& g = u0.grid();
  const KernelMultiplier mult(k, g);
  const SpectralField U0 = forward_transform(u0);
  const double h = T0 / steps;

  auto free_part = [&](int n) {
    SpectralField F = U0;
    free_propagator_coefficients(F, eps, n == steps ? T0 : n * h);
    return F;
  };
  auto nonlinear = [&](const SpectralField& F) {
    Field u = inverse_transform(F);
    const Field v = hartree_potential(mult, u);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] *= v[i].real();
    return forward_transform(u);
  };

  // The first iterate is the free evolution U(t_n) u0 at every node.
  std::vector<SpectralField> current;
  current.reserve(steps + 1);
  for (int n = 0; n <= steps; ++n) current.push_back(free_part(n));

  double last = 0.0;
  double previous_increment = std::numeric_limits<double>::infinity();
  int growth_streak = 0;
  for (int iter = 1; iter <= max_iter; ++iter) {
    // Composite trapezoid of int_0^{t_n} U(t_n - tau) g(tau) dtau, built recursively.
    std::vector<SpectralField> next;
    next.reserve(steps + 1);
    SpectralField integral(g);
    SpectralField g_prev = nonlinear(current[0]);
    double increment = 0.0;
    for (int n = 0; n <= steps; ++n) {
      if (n > 0) {
        const SpectralField g_now = nonlinear(current[n]);
        for (std::size_t i = 0; i < integral.size(); ++i) integral[i] += 0.5 * h * g_prev[i];
        free_propagator_coefficients(integral, eps, h);
        for (std::size_t i = 0; i < integral.size(); ++i) integral[i] += 0.5 * h * g_now[i];
        g_prev = g_now;
      }
      SpectralField phi = free_part(n);
      for (std::size_t i = 0; i < phi.size(); ++i) phi[i] += Complex{0.0, -1.0} * integral[i];

      SpectralField diff = phi;
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= current[n][i];
      increment = std::max(increment, spectral_l2w(diff));
      next.push_back(std::move(phi));
    }
    current = std::move(next);
    last = increment;

    if (increment < tol) return PicardOutcome{inverse_transform(current.back()), iter, increment};
    growth_streak = increment > previous_increment ? growth_streak + 1 : 0;
    if (growth_streak >= 3)
      throw NonContractionError("Picard increments grew for 3 consecutive iterations");
    previous_increment = increment;
  }
  std::ostringstream os;
  os << "Picard iteration did not reach tolerance " << tol << " in " << max_iter
     << " iterations (last increment " << last << ")";
  throw NonContractionError(os.str());
}

}  // namespace hwkb
