#pragma once

#include <vector>

#include "hwkb/grid_spectral.hpp"

namespace hwkb {

/// K(x) = |x|^{-gamma} with coupling lambda. c_const is the Fourier constant
/// C_{d,gamma} in K^(xi) = C |xi|^{gamma-d}.
struct KernelSpec {
  int dim = 1;
  double gamma = 0.5;
  double lambda = 1.0;
  double c_const = 1.0;

  /// Validates 0 < gamma < d and fills c_const from the closed form.
  static KernelSpec make(int dim, double gamma, double lambda);

  /// Copy with c_const scaled by `factor`. Test hook for fault injection only.
  KernelSpec with_corrupted_constant(double factor) const;
};

/// C_{d,gamma} = 2^{d/2-gamma} Gamma((d-gamma)/2) / Gamma(gamma/2).
double hartree_constant(int dim, double gamma);

/// Independent route to C_{d,gamma}: pairing K against a unit Gaussian,
/// int K g^ = C int |xi|^{gamma-d} g, both radial integrals by exp-sinh quadrature.
double hartree_constant_quadrature(int dim, double gamma);

/// Surface measure of the unit sphere in R^d (2, 2 pi, 4 pi).
double unit_sphere_area(int dim);

/// C |xi|^{gamma-d}; rejects xi = 0.
double multiplier(const KernelSpec& k, const Vec3& xi);

struct SplitNorms {
  double k1_l1;   ///< L1 norm of K^ restricted to |xi| <= 1
  double k2_sup;  ///< sup of K^ on |xi| > 1
};

SplitNorms split_norms(const KernelSpec& k);

/// Value used for the undefined K^(0) on `grid`: chosen so that the lattice
/// Riemann sum of K^ against a smooth radial weight reproduces the integral.
double zero_mode_value(const KernelSpec& k, const Grid& grid);

/// (2 pi)^{d/2} K^(xi_k) sampled on the lattice, with the zero mode regularized.
/// Build once per (kernel, grid) and reuse.
class KernelMultiplier {
 public:
  KernelMultiplier(const KernelSpec& k, const Grid& grid);

  const KernelSpec& kernel() const { return kernel_; }
  const Grid& grid() const { return grid_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  KernelSpec kernel_;
  Grid grid_;
  std::vector<double> values_;
};

/// K * rho through the lattice multiplier.
Field convolve(const KernelSpec& k, const Field& rho);
Field convolve(const KernelMultiplier& m, const Field& rho);

/// Weight given to the singular cell x = y in the direct quadrature.
double direct_singular_weight(const KernelSpec& k, const Grid& grid);

/// Direct O(N^{2d}) quadrature of int K(x-y) rho(y) dy over the box. Oracle only;
/// requires N^d <= 2^16. By default free space (no periodic images). With
/// `periodic_images` (1D only) the kernel is replaced by its periodization
/// sum_n [K(z + nL) - K(nL)], n != 0 terms, which is the kernel the FFT route
/// realizes with the calibrated zero mode.
Field convolve_direct(const KernelSpec& k, const Field& rho, bool periodic_images = false);

}  // namespace hwkb
