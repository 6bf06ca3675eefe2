#include "hwkb/functional_norms.hpp"

#include <cmath>

namespace hwkb {

namespace {

constexpr double kAlgebraSlack = 1e-10;
constexpr double kHartreeSlack = 1e-6;
constexpr double kAliasEnergyThreshold = 1e-20;

}  // namespace

YNormSpec YNormSpec::make(int dim, double gamma) {
  if (dim < 1 || dim > 3) throw ConfigError("dimension must be 1, 2 or 3");
  if (!(gamma > 0.0 && gamma < dim)) throw ConfigError("gamma must satisfy 0 < gamma < d");
  const int n = (dim == 3 && gamma < 1.0) ? 3 : 2;
  return YNormSpec{dim, gamma, n};
}

double l2_norm(const Field& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::norm(v);
  return std::sqrt(s * f.grid().cell_volume());
}

double wiener_norm(const SpectralField& F) {
  double s = 0.0;
  for (const auto& c : F.coefficients()) s += std::abs(c);
  return s * F.grid().dual_cell_volume();
}

double wiener_norm(const Field& f) { return wiener_norm(forward_transform(f)); }

double l1_norm(const Field& f) {
  double s = 0.0;
  for (const auto& v : f.values()) s += std::abs(v);
  return s * f.grid().cell_volume();
}

double l2w_norm(const Field& f) { return l2_norm(f) + wiener_norm(f); }

std::vector<MultiIndex> multi_indices(int dim, int n) {
  std::vector<MultiIndex> out;
  for (int order = 0; order <= n; ++order) {
    if (dim == 1) {
      out.push_back({order, 0, 0});
    } else if (dim == 2) {
      for (int a = order; a >= 0; --a) out.push_back({a, order - a, 0});
    } else {
      for (int a = order; a >= 0; --a)
        for (int b = order - a; b >= 0; --b) out.push_back({a, b, order - a - b});
    }
  }
  return out;
}

double y_norm(const Field& f, const YNormSpec& spec) {
  if (f.grid().dim() != spec.dim) throw std::invalid_argument("Y-norm spec dimension differs from grid");
  double total = 0.0;
  for (const auto& eta : multi_indices(spec.dim, spec.n)) total += l2w_norm(spectral_derivative(f, eta));
  return total;
}

double e_norm(const std::vector<Field>& amplitudes, const YNormSpec& spec) {
  double total = 0.0;
  for (const auto& a : amplitudes) total += y_norm(a, spec);
  return total;
}

NormReport norm_report(const Field& f) {
  NormReport r;
  r.l2 = l2_norm(f);
  r.wiener = wiener_norm(f);
  r.l2w = r.l2 + r.wiener;
  return r;
}

double high_band_energy_fraction(const Field& f) {
  const Grid& g = f.grid();
  const SpectralField F = forward_transform(f);
  const int quarter = g.points() / 4;
  double total = 0.0, high = 0.0;
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double e = std::norm(F[i]);
    total += e;
    const auto idx = g.unflatten(i);
    for (int a = 0; a < g.dim(); ++a) {
      if (std::abs(g.wavenumber(idx[a])) >= quarter) {
        high += e;
        break;
      }
    }
  }
  return total > 0.0 ? high / total : 0.0;
}

AlgebraCheck check_algebra_bound(const Field& f, const Field& g) {
  if (!(f.grid() == g.grid())) throw std::invalid_argument("fields live on different grids");
  if (high_band_energy_fraction(f) > kAliasEnergyThreshold ||
      high_band_energy_fraction(g) > kAliasEnergyThreshold)
    throw std::invalid_argument("field has energy above the anti-aliasing cutoff N/4");

  const double wf = wiener_norm(f);
  const double wg = wiener_norm(g);
  AlgebraCheck out;
  out.lhs = wiener_norm(multiply(f, g));
  out.product_bound = wf * wg;
  out.rhs = std::pow(2.0 * kPi, -0.5 * f.grid().dim()) * out.product_bound;
  out.holds = out.lhs <= out.rhs * (1.0 + kAlgebraSlack);
  return out;
}

BoundCheck check_hartree_bound(const KernelSpec& k, const Field& h) {
  const SplitNorms split = split_norms(k);
  BoundCheck out;
  out.lhs = wiener_norm(convolve(k, h));
  out.rhs = split.k1_l1 * l1_norm(h) + std::pow(2.0 * kPi, 0.5 * k.dim) * split.k2_sup * wiener_norm(h);
  out.holds = out.lhs <= out.rhs * (1.0 + kHartreeSlack);
  return out;
}

}  // namespace hwkb
