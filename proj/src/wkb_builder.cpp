#include "hwkb/wkb_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hwkb {

namespace {

double euclid(const Vec3& v, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += v[a] * v[a];
  return std::sqrt(s);
}

double dot(const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

Vec3 combine(double ca, const Vec3& a, double cb, const Vec3& b) {
  return {ca * a[0] + cb * b[0], ca * a[1] + cb * b[1], ca * a[2] + cb * b[2]};
}

// e^{i phi_j(t,.)/eps} sampled on the grid.
Field phase_factor(const Vec3& kappa, double t, double eps, const Grid& grid) {
  const Field phi = eikonal_phase(kappa, t, grid);
  Field out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = std::polar(1.0, phi[i].real() / eps);
  return out;
}

std::vector<SpectralField> density_spectra(const ModeFamily& m) {
  std::vector<SpectralField> out;
  out.reserve(m.size());
  for (const auto& mode : m.modes()) out.push_back(forward_transform(modulus_squared(mode.alpha)));
  return out;
}

Field action_from_spectra(const ModeFamily& m, const std::vector<SpectralField>& rho_hat,
                          const KernelMultiplier& mult, std::size_t j, double t) {
  const Grid& g = m.grid();
  if (t == 0.0) return Field(g);
  const int d = g.dim();
  const Vec3& kj = m[j].kappa;
  SpectralField S(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec3 xi = g.frequency_vector(i);
    Complex sum{0.0, 0.0};
    for (std::size_t l = 0; l < m.size(); ++l) {
      const double omega = dot(combine(1.0, m[l].kappa, -1.0, kj), xi, d);
      sum += rho_hat[l][i] * resonance_factor(t, omega);
    }
    S[i] = -mult[i] * std::polar(1.0, -t * dot(kj, xi, d)) * sum;
  }
  Field out = inverse_transform(S);
  const double lambda = mult.kernel().lambda;
  for (auto& v : out.values()) v = lambda * v.real();
  return out;
}

WkbSnapshot snapshot_with(const ModeFamily& m, double t, const KernelMultiplier& mult) {
  check_containment(m, t);
  WkbSnapshot s;
  s.t = t;
  const auto rho_hat = density_spectra(m);
  for (std::size_t j = 0; j < m.size(); ++j) {
    Field action = action_from_spectra(m, rho_hat, mult, j, t);
    Field a = translate(m[j].alpha, combine(t, m[j].kappa, 0.0, m[j].kappa));
    if (t != 0.0) a = modulate(a, action);
    s.amplitudes.push_back(std::move(a));
    s.actions.push_back(std::move(action));
  }
  return s;
}

Field total_density(const WkbSnapshot& s) {
  Field rho(s.amplitudes.front().grid());
  for (const auto& a : s.amplitudes) rho += modulus_squared(a);
  return rho;
}

std::string format_rule(const char* what, double lhs, double rhs) {
  std::ostringstream os;
  os << what << " (" << lhs << " vs " << rhs << ")";
  return os.str();
}

}  // namespace

Mode make_mode(const Grid& grid, const Vec3& kappa, const ProfileSpec& profile) {
  Mode mode{kappa, sample_profile(grid, profile), {0.0, 0.0, 0.0}, 0.0, 1.0};
  if (const auto* gauss = std::get_if<GaussianProfile>(&profile)) {
    mode.center = gauss->center;
    mode.radius = 6.0 * gauss->width;
    mode.width = gauss->width;
    return mode;
  }
  const double cutoff = 1e-12 * mode.alpha.max_abs();
  Vec3 lo{0, 0, 0}, hi{0, 0, 0};
  bool first = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (std::abs(mode.alpha[i]) <= cutoff) continue;
    const Vec3 x = grid.position(i);
    for (int a = 0; a < grid.dim(); ++a) {
      lo[a] = first ? x[a] : std::min(lo[a], x[a]);
      hi[a] = first ? x[a] : std::max(hi[a], x[a]);
    }
    first = false;
  }
  double r2 = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    mode.center[a] = 0.5 * (lo[a] + hi[a]);
    r2 += 0.25 * (hi[a] - lo[a]) * (hi[a] - lo[a]);
  }
  mode.radius = std::sqrt(r2) + grid.dx();

  // Width from the rms frequency; a Gaussian of width sigma gives sigma back.
  const SpectralField F = forward_transform(mode.alpha);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double w = std::norm(F[i]);
    const Vec3 xi = grid.frequency_vector(i);
    num += w * dot(xi, xi, grid.dim());
    den += w;
  }
  mode.width = num > 0.0 ? std::sqrt(0.5 * grid.dim() * den / num) : grid.length();
  return mode;
}

ModeFamily::ModeFamily(std::vector<Mode> modes, YNormSpec nspec)
    : modes_(std::move(modes)), delta_(std::numeric_limits<double>::infinity()), nspec_(nspec) {
  if (modes_.empty()) throw ConfigError("mode family must contain at least one mode");
  const Grid& g = modes_.front().alpha.grid();
  if (nspec_.dim != g.dim()) throw ConfigError("Y-norm spec dimension differs from the grid");
  for (const auto& mode : modes_) {
    if (!(mode.alpha.grid() == g)) throw ConfigError("all mode amplitudes must share one grid");
    if (!mode.alpha.all_finite()) throw ConfigError("mode amplitudes must be finite");
  }
  for (std::size_t k = 0; k < modes_.size(); ++k)
    for (std::size_t l = k + 1; l < modes_.size(); ++l)
      delta_ = std::min(delta_, euclid(combine(1.0, modes_[k].kappa, -1.0, modes_[l].kappa), g.dim()));
  if (!(delta_ > 0.0))
    throw ConfigError("mode wavevectors must be pairwise distinct (separation delta = 0)");
}

double ModeFamily::max_kappa() const {
  double m = 0.0;
  for (const auto& mode : modes_) m = std::max(m, euclid(mode.kappa, dim()));
  return m;
}

double ModeFamily::min_width() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& mode : modes_) w = std::min(w, mode.width);
  return w;
}

double ModeFamily::max_cross_frequency() const {
  double m = 0.0;
  for (std::size_t k = 0; k < size(); ++k)
    for (std::size_t l = 0; l < size(); ++l) {
      if (k == l) continue;
      for (std::size_t j = 0; j < size(); ++j) {
        const Vec3 w = combine(1.0, combine(1.0, modes_[k].kappa, -1.0, modes_[l].kappa), 1.0, modes_[j].kappa);
        m = std::max(m, euclid(w, dim()));
      }
    }
  return m;
}

std::vector<Field> ModeFamily::initial_amplitudes() const {
  std::vector<Field> out;
  for (const auto& mode : modes_) out.push_back(mode.alpha);
  return out;
}

void check_containment(const ModeFamily& m, double t) {
  const Grid& g = m.grid();
  const double limit = 0.4 * g.length();
  const double drift = std::abs(t) * m.max_kappa();
  for (std::size_t j = 0; j < m.size(); ++j) {
    double reach = 0.0;
    for (int a = 0; a < g.dim(); ++a) reach = std::max(reach, std::abs(m[j].center[a]));
    reach += drift + m[j].radius;
    if (reach > limit) {
      std::ostringstream os;
      os << "containment rule violated at t = " << t << ": mode " << j << " reaches " << reach
         << ", beyond 0.4 L = " << limit;
      throw ContainmentError(os.str());
    }
  }
}

bool solver_resolution_holds(const ModeFamily& m, double eps) {
  return m.grid().max_frequency() > 1.5 * (m.max_kappa() / eps + 6.0 / m.min_width());
}

bool remainder_resolution_holds(const ModeFamily& m, double eps) {
  return m.grid().max_frequency() > m.max_cross_frequency() / eps + 6.0 * std::sqrt(3.0) / m.min_width();
}

void check_solver_resolution(const ModeFamily& m, double eps) {
  if (!solver_resolution_holds(m, eps))
    throw ResolutionError(format_rule("resolution rule pi N/L > 1.5 (max|kappa|/eps + 6/sigma) violated",
                                      m.grid().max_frequency(),
                                      1.5 * (m.max_kappa() / eps + 6.0 / m.min_width())));
}

void check_remainder_resolution(const ModeFamily& m, double eps) {
  if (!remainder_resolution_holds(m, eps))
    throw ResolutionError(format_rule(
        "resolution rule pi N/L > max|kappa_k - kappa_l + kappa_j|/eps + 6 sqrt(3)/sigma violated",
        m.grid().max_frequency(), m.max_cross_frequency() / eps + 6.0 * std::sqrt(3.0) / m.min_width()));
}

Field eikonal_phase(const Vec3& kappa, double t, const Grid& grid) {
  const int d = grid.dim();
  const double energy = 0.5 * t * dot(kappa, kappa, d);
  Field out(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) out[i] = dot(kappa, grid.position(i), d) - energy;
  return out;
}

Complex resonance_factor(double t, double omega) {
  const double x = t * omega;
  if (std::abs(x) < 1e-6) return t * Complex{1.0 - x * x / 6.0, -0.5 * x};
  return (1.0 - std::polar(1.0, -x)) / Complex{0.0, omega};
}

Field action_phase(const ModeFamily& m, std::size_t j, double t, const KernelSpec& k) {
  if (j >= m.size()) throw std::out_of_range("mode index out of range");
  check_containment(m, t);
  const KernelMultiplier mult(k, m.grid());
  return action_from_spectra(m, density_spectra(m), mult, j, t);
}

Field action_phase_quadrature(const ModeFamily& m, std::size_t j, double t, const KernelSpec& k, int nodes) {
  if (j >= m.size()) throw std::out_of_range("mode index out of range");
  if (nodes < 8 || nodes % 2 != 0) throw std::invalid_argument("Simpson quadrature needs an even node count >= 8");
  check_containment(m, t);
  const Grid& g = m.grid();
  if (t == 0.0) return Field(g);

  const KernelMultiplier mult(k, g);
  std::vector<Field> densities;
  for (const auto& mode : m.modes()) densities.push_back(modulus_squared(mode.alpha));

  const double h = t / nodes;
  Field acc(g);
  for (int n = 0; n <= nodes; ++n) {
    const double tau = n * h;
    const double w = (n == 0 || n == nodes) ? 1.0 : (n % 2 == 1 ? 4.0 : 2.0);
    Field shifted(g);
    for (std::size_t l = 0; l < m.size(); ++l)
      shifted += translate(densities[l], combine(t - tau, m[j].kappa, tau, m[l].kappa));
    const Field conv = convolve(mult, shifted);
    for (std::size_t i = 0; i < g.size(); ++i) acc[i] += w * conv[i];
  }
  const double scale = -k.lambda * h / 3.0;
  for (auto& v : acc.values()) v = scale * v.real();
  return acc;
}

WkbSnapshot snapshot(const ModeFamily& m, double t, const KernelSpec& k) {
  return snapshot_with(m, t, KernelMultiplier(k, m.grid()));
}

Field assemble(const ModeFamily& m, const WkbSnapshot& s, double eps) {
  check_solver_resolution(m, eps);
  Field u(m.grid());
  for (std::size_t j = 0; j < m.size(); ++j)
    u += multiply(s.amplitudes[j], phase_factor(m[j].kappa, s.t, eps, m.grid()));
  return u;
}

Field assemble(const ModeFamily& m, double t, double eps, const KernelSpec& k) {
  return assemble(m, snapshot(m, t, k), eps);
}

Field initial_data(const ModeFamily& m, double eps) {
  WkbSnapshot s;
  s.t = 0.0;
  s.amplitudes = m.initial_amplitudes();
  return assemble(m, s, eps);
}

Field z2_term(const ModeFamily& m, const WkbSnapshot& s, double eps) {
  check_solver_resolution(m, eps);
  Field z(m.grid());
  for (std::size_t j = 0; j < m.size(); ++j)
    z += multiply(laplacian(s.amplitudes[j]), phase_factor(m[j].kappa, s.t, eps, m.grid()));
  z *= 0.5;
  return z;
}

Field z2_term(const ModeFamily& m, double t, double eps, const KernelSpec& k) {
  return z2_term(m, snapshot(m, t, k), eps);
}

Field resonant_remainder(const ModeFamily& m, const WkbSnapshot& s, double eps, const KernelSpec& k) {
  const Grid& g = m.grid();
  if (m.size() == 1) return Field(g);
  check_remainder_resolution(m, eps);
  const int d = g.dim();

  Field cross(g);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = 0; b < m.size(); ++b) {
      if (a == b) continue;
      const Vec3 dk = combine(1.0, m[a].kappa, -1.0, m[b].kappa);
      const double time_phase = -s.t * (dot(m[a].kappa, m[a].kappa, d) - dot(m[b].kappa, m[b].kappa, d)) / (2.0 * eps);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double phase = dot(dk, g.position(i), d) / eps + time_phase;
        cross[i] += s.amplitudes[a][i] * std::conj(s.amplitudes[b][i]) * std::polar(1.0, phase);
      }
    }
  const Field potential = convolve(k, cross);
  Field u(g);
  for (std::size_t j = 0; j < m.size(); ++j)
    u += multiply(s.amplitudes[j], phase_factor(m[j].kappa, s.t, eps, g));
  Field r = multiply(potential, u);
  r *= -1.0;
  return r;
}

Field resonant_remainder(const ModeFamily& m, double t, double eps, const KernelSpec& k) {
  return resonant_remainder(m, snapshot(m, t, k), eps, k);
}

AnsatzResidual ansatz_residual(const ModeFamily& m, double t, double eps, const KernelSpec& k) {
  const Grid& g = m.grid();
  check_remainder_resolution(m, eps);
  const KernelMultiplier mult(k, g);
  const WkbSnapshot s = snapshot_with(m, t, mult);
  const Field v = convolve(mult, total_density(s));
  const int d = g.dim();

  // d_t u_app with d_t a_j from the transport equation.
  Field dt_u(g);
  for (std::size_t j = 0; j < m.size(); ++j) {
    const Field& a = s.amplitudes[j];
    Field dt_a = directional_derivative(a, m[j].kappa);
    dt_a *= -1.0;
    const double energy = 0.5 * dot(m[j].kappa, m[j].kappa, d) / eps;
    for (std::size_t i = 0; i < g.size(); ++i)
      dt_a[i] += Complex{0.0, -1.0} * (k.lambda * v[i].real() + energy) * a[i];
    dt_u += multiply(dt_a, phase_factor(m[j].kappa, t, eps, g));
  }

  const Field u = assemble(m, s, eps);
  const Field lap = laplacian(u);
  const Field hartree = convolve(mult, modulus_squared(u));
  Field lhs(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    lhs[i] = Complex{0.0, eps} * dt_u[i] + 0.5 * eps * eps * lap[i] - eps * k.lambda * hartree[i].real() * u[i];

  Field rhs = z2_term(m, s, eps);
  rhs *= eps * eps;
  Field r = resonant_remainder(m, s, eps, k);
  r *= eps * k.lambda;
  rhs += r;

  const double scale = l2w_norm(rhs);
  const double diff = l2w_norm(lhs - rhs);
  return AnsatzResidual{std::move(lhs), scale > 0.0 ? diff / scale : diff};
}

double transport_residual(const ModeFamily& m, double t, const KernelSpec& k, double h) {
  const Grid& g = m.grid();
  const KernelMultiplier mult(k, g);
  const WkbSnapshot now = snapshot_with(m, t, mult);
  const WkbSnapshot ahead = snapshot_with(m, t + h, mult);
  const WkbSnapshot behind = snapshot_with(m, t - h, mult);
  const Field v = convolve(mult, total_density(now));

  double worst = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const Field& a = now.amplitudes[j];
    const Field grad = directional_derivative(a, m[j].kappa);
    double res = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Complex dt_a = (ahead.amplitudes[j][i] - behind.amplitudes[j][i]) / (2.0 * h);
      const Complex r = dt_a + grad[i] + Complex{0.0, k.lambda * v[i].real()} * a[i];
      res = std::max(res, std::abs(r));
    }
    const double scale = a.max_abs();
    worst = std::max(worst, scale > 0.0 ? res / scale : res);
  }
  return worst;
}

double modulus_transport_defect(const ModeFamily& m, const WkbSnapshot& s) {
  double worst = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const Field moved = translate(m[j].alpha, combine(s.t, m[j].kappa, 0.0, m[j].kappa));
    for (std::size_t i = 0; i < moved.size(); ++i)
      worst = std::max(worst, std::abs(std::abs(s.amplitudes[j][i]) - std::abs(moved[i])));
  }
  return worst;
}

}  // namespace hwkb
