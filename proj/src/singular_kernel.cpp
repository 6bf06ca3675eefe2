#include "hwkb/singular_kernel.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <utility>

namespace hwkb {

namespace {

void require_exponent(int dim, double gamma) {
  if (dim < 1 || dim > 3) throw ConfigError("kernel dimension must be 1, 2 or 3");
  if (!(gamma > 0.0 && gamma < dim))
    throw ConfigError("kernel exponent gamma must satisfy 0 < gamma < d");
}

double norm(const Vec3& v, int dim) {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += v[a] * v[a];
  return std::sqrt(s);
}

// int_0^inf r^{p-1} e^{-r^2/(2 s^2)} dr
double gaussian_moment(double p, double s) {
  return std::pow(2.0, 0.5 * p - 1.0) * std::tgamma(0.5 * p) * std::pow(s, p);
}

// Weight w at the origin of the unit lattice Z^d such that
//   sum_{m != 0} |m|^{-p} T(m) + w T(0) = int |x|^{-p} T(x) dx
// for T(x) = e^{-|x|^2/2s^2} (1 + |x|^2/2s^2), whose Taylor expansion at 0 has
// no quadratic term. In 1D this converges to 2 zeta(p).
double lattice_origin_weight_uncached(int dim, double p) {
  const double s = dim == 1 ? 32.0 : (dim == 2 ? 16.0 : 10.0);
  const int reach = static_cast<int>(std::ceil(12.0 * s));
  const double inv2s2 = 1.0 / (2.0 * s * s);

  const double exact =
      unit_sphere_area(dim) * (gaussian_moment(dim - p, s) + gaussian_moment(dim - p + 2.0, s) * inv2s2);

  auto term = [&](double r2) {
    const double q = r2 * inv2s2;
    return std::pow(r2, -0.5 * p) * std::exp(-q) * (1.0 + q);
  };

  double sum = 0.0;
  if (dim == 1) {
    for (int i = reach; i >= 1; --i) sum += 2.0 * term(double(i) * i);
  } else if (dim == 2) {
    for (int i = -reach; i <= reach; ++i) {
      double row = 0.0;
      for (int j = -reach; j <= reach; ++j) {
        if (i == 0 && j == 0) continue;
        row += term(double(i) * i + double(j) * j);
      }
      sum += row;
    }
  } else {
    for (int i = -reach; i <= reach; ++i) {
      double plane = 0.0;
      for (int j = -reach; j <= reach; ++j) {
        double row = 0.0;
        for (int l = -reach; l <= reach; ++l) {
          if (i == 0 && j == 0 && l == 0) continue;
          row += term(double(i) * i + double(j) * j + double(l) * l);
        }
        plane += row;
      }
      sum += plane;
    }
  }
  return exact - sum;
}

double lattice_origin_weight(int dim, double p) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(dim, p);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  const double w = lattice_origin_weight_uncached(dim, p);
  cache.emplace(key, w);
  return w;
}

}  // namespace

KernelSpec KernelSpec::make(int dim, double gamma, double lambda) {
  require_exponent(dim, gamma);
  if (!std::isfinite(lambda)) throw ConfigError("coupling lambda must be finite");
  return KernelSpec{dim, gamma, lambda, hartree_constant(dim, gamma)};
}

KernelSpec KernelSpec::with_corrupted_constant(double factor) const {
  KernelSpec k = *this;
  k.c_const *= factor;
  return k;
}

double hartree_constant(int dim, double gamma) {
  require_exponent(dim, gamma);
  return std::pow(2.0, 0.5 * dim - gamma) * std::tgamma(0.5 * (dim - gamma)) /
         std::tgamma(0.5 * gamma);
}

double hartree_constant_quadrature(int dim, double gamma) {
  require_exponent(dim, gamma);
  boost::math::quadrature::exp_sinh<double> integrator;
  const double inf = std::numeric_limits<double>::infinity();
  // The unit Gaussian is its own transform, so both sides are radial moments.
  const double space = integrator.integrate(
      [&](double r) { return std::pow(r, dim - 1.0 - gamma) * std::exp(-0.5 * r * r); }, 0.0, inf);
  const double freq = integrator.integrate(
      [&](double r) { return std::pow(r, gamma - 1.0) * std::exp(-0.5 * r * r); }, 0.0, inf);
  return space / freq;
}

double unit_sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * kPi;
    case 3: return 4.0 * kPi;
    default: throw ConfigError("dimension must be 1, 2 or 3");
  }
}

double multiplier(const KernelSpec& k, const Vec3& xi) {
  const double r = norm(xi, k.dim);
  if (r == 0.0) throw std::domain_error("kernel multiplier is undefined at xi = 0");
  return k.c_const * std::pow(r, k.gamma - k.dim);
}

SplitNorms split_norms(const KernelSpec& k) {
  return {k.c_const * unit_sphere_area(k.dim) / k.gamma, k.c_const};
}

double zero_mode_value(const KernelSpec& k, const Grid& grid) {
  if (grid.dim() != k.dim) throw std::invalid_argument("kernel and grid dimensions differ");
  // Lattice spacing dxi: K^(xi_k) dxi^d = C dxi^{gamma} |k|^{gamma-d}.
  const double w = lattice_origin_weight(k.dim, k.dim - k.gamma);
  return k.c_const * w * std::pow(grid.dxi(), k.gamma - k.dim);
}

KernelMultiplier::KernelMultiplier(const KernelSpec& k, const Grid& grid)
    : kernel_(k), grid_(grid), values_(grid.size()) {
  if (grid.dim() != k.dim) throw std::invalid_argument("kernel and grid dimensions differ");
  const double scale = std::pow(2.0 * kPi, 0.5 * k.dim);
  values_[0] = scale * zero_mode_value(k, grid);
  for (std::size_t i = 1; i < values_.size(); ++i)
    values_[i] = scale * multiplier(k, grid.frequency_vector(i));
}

Field convolve(const KernelMultiplier& m, const Field& rho) {
  if (!(rho.grid() == m.grid())) throw std::invalid_argument("density grid differs from multiplier grid");
  SpectralField F = forward_transform(rho);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= m[i];
  return inverse_transform(F);
}

Field convolve(const KernelSpec& k, const Field& rho) { return convolve(KernelMultiplier(k, rho.grid()), rho); }

double direct_singular_weight(const KernelSpec& k, const Grid& grid) {
  if (grid.dim() != k.dim) throw std::invalid_argument("kernel and grid dimensions differ");
  return lattice_origin_weight(k.dim, k.gamma) * std::pow(grid.dx(), k.dim - k.gamma);
}

namespace {

// sum_{n >= 1} [(nL + z)^-g + (nL - z)^-g - 2 (nL)^-g] for |z| < L, with the
// second-order tail beyond the explicit range.
double image_sum(double gamma, double z, double L) {
  constexpr int kImages = 4096;
  double s = 0.0;
  for (int n = kImages; n >= 1; --n) {
    const double c = n * L;
    s += std::pow(c + z, -gamma) + std::pow(c - z, -gamma) - 2.0 * std::pow(c, -gamma);
  }
  const double p = gamma + 2.0;
  const double tail = std::pow(kImages, 1.0 - p) / (p - 1.0) - 0.5 * std::pow(kImages, -p);
  return s + gamma * (gamma + 1.0) * z * z * std::pow(L, -p) * tail;
}

}  // namespace

Field convolve_direct(const KernelSpec& k, const Field& rho, bool periodic_images) {
  const Grid& g = rho.grid();
  if (g.dim() != k.dim) throw std::invalid_argument("kernel and grid dimensions differ");
  if (g.size() > (std::size_t{1} << 16))
    throw std::invalid_argument("convolve_direct is limited to N^d <= 2^16 points");
  if (periodic_images && g.dim() != 1)
    throw std::invalid_argument("periodic images are implemented for d = 1 only");

  const int n = g.points();
  const int span = 2 * n - 1;
  const double dx = g.dx();
  const double cell = g.cell_volume();

  // Kernel table over index offsets in [-(n-1), n-1]^d.
  std::size_t table_size = 1;
  for (int a = 0; a < g.dim(); ++a) table_size *= span;
  std::vector<double> table(table_size);
  for (std::size_t t = 0; t < table_size; ++t) {
    std::size_t rest = t;
    double r2 = 0.0;
    for (int a = g.dim() - 1; a >= 0; --a) {
      const int off = static_cast<int>(rest % span) - (n - 1);
      rest /= span;
      r2 += (off * dx) * (off * dx);
    }
    table[t] = r2 == 0.0 ? direct_singular_weight(k, g) : cell * std::pow(r2, -0.5 * k.gamma);
    if (periodic_images) table[t] += cell * image_sum(k.gamma, std::sqrt(r2), g.length());
  }

  Field out(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.unflatten(i);
    Complex acc{0.0, 0.0};
    for (std::size_t m = 0; m < g.size(); ++m) {
      const auto ym = g.unflatten(m);
      std::size_t t = 0;
      for (int a = 0; a < g.dim(); ++a) t = t * span + static_cast<std::size_t>(xi[a] - ym[a] + n - 1);
      acc += table[t] * rho[m];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace hwkb
