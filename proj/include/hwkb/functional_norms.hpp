#pragma once

#include <optional>
#include <vector>

#include "hwkb/grid_spectral.hpp"
#include "hwkb/singular_kernel.hpp"

namespace hwkb {

/// Derivative order n for the amplitude space Y: 3 when d = 3 and gamma < 1, otherwise 2.
struct YNormSpec {
  int dim = 1;
  double gamma = 0.5;
  int n = 2;

  static YNormSpec make(int dim, double gamma);
};

struct NormReport {
  double l2 = 0.0;
  double wiener = 0.0;
  double l2w = 0.0;
  std::optional<double> y;
  std::optional<double> e;
};

/// (dx^d sum |f|^2)^{1/2}
double l2_norm(const Field& f);
/// dxi^d sum |f^|
double wiener_norm(const Field& f);
double wiener_norm(const SpectralField& F);
/// dx^d sum |f|
double l1_norm(const Field& f);
/// l2_norm + wiener_norm
double l2w_norm(const Field& f);

/// All multi-indices with |eta| <= n in `dim` dimensions, graded by order.
std::vector<MultiIndex> multi_indices(int dim, int n);

double y_norm(const Field& f, const YNormSpec& spec);
double e_norm(const std::vector<Field>& amplitudes, const YNormSpec& spec);

NormReport norm_report(const Field& f);

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// Wiener algebra property for a product. `rhs` is the sharp bound
/// (2 pi)^{-d/2} |f|_W |g|_W, attained by plane waves; `product_bound` is the
/// plain product |f|_W |g|_W, which the sharp bound never exceeds.
struct AlgebraCheck : BoundCheck {
  double product_bound = 0.0;
};

/// Rejects inputs with spectral energy above half the lattice (products would alias).
AlgebraCheck check_algebra_bound(const Field& f, const Field& g);

/// |K*h|_W <= |K1|_L1 |h|_L1 + (2 pi)^{d/2} |K2|_Linf |h|_W with 1e-6 relative slack.
BoundCheck check_hartree_bound(const KernelSpec& k, const Field& h);

/// Fraction of spectral energy carried by |k_a| >= N/4 on any axis.
double high_band_energy_fraction(const Field& f);

}  // namespace hwkb
