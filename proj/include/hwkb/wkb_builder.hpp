#pragma once

#include <stdexcept>
#include <vector>

#include "hwkb/functional_norms.hpp"
#include "hwkb/grid_spectral.hpp"
#include "hwkb/singular_kernel.hpp"

namespace hwkb {

class ContainmentError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ResolutionError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// One oscillatory plane-wave component alpha(x) e^{i kappa.x/eps} of the initial data.
struct Mode {
  Vec3 kappa{0.0, 0.0, 0.0};
  Field alpha;
  /// Center and radius of the region outside which alpha is negligible.
  Vec3 center{0.0, 0.0, 0.0};
  double radius = 0.0;
  /// Narrowest length scale of alpha; sets the spectral bandwidth ~ 6 / width.
  double width = 1.0;
};

/// Builds a Mode from a profile. Gaussian profiles use radius 6 sigma; tables
/// measure where |alpha| exceeds 1e-12 of its maximum.
Mode make_mode(const Grid& grid, const Vec3& kappa, const ProfileSpec& profile);

class ModeFamily {
 public:
  /// Rejects empty families, mismatched grids and coincident wavevectors.
  ModeFamily(std::vector<Mode> modes, YNormSpec nspec);

  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  const Mode& operator[](std::size_t j) const { return modes_[j]; }
  const Grid& grid() const { return modes_.front().alpha.grid(); }
  int dim() const { return grid().dim(); }
  /// min_{k != m} |kappa_k - kappa_m| (infinity for a single mode).
  double delta() const { return delta_; }
  const YNormSpec& nspec() const { return nspec_; }

  double max_kappa() const;
  double min_width() const;
  /// Largest |kappa_k - kappa_l + kappa_j| over k != l (0 for one mode).
  double max_cross_frequency() const;

  std::vector<Field> initial_amplitudes() const;

 private:
  std::vector<Mode> modes_;
  double delta_;
  YNormSpec nspec_;
};

/// Throws ContainmentError if, at time t, any translated amplitude support comes
/// within 10% of L of the box edge.
void check_containment(const ModeFamily& m, double t);
/// pi N / L > 1.5 (max|kappa|/eps + 6/sigma_min); required by the solver and the ansatz.
void check_solver_resolution(const ModeFamily& m, double eps);
/// pi N / L > max|kappa_k - kappa_l + kappa_j|/eps + 6 sqrt(3)/sigma_min; required by the remainder.
void check_remainder_resolution(const ModeFamily& m, double eps);
bool solver_resolution_holds(const ModeFamily& m, double eps);
bool remainder_resolution_holds(const ModeFamily& m, double eps);

struct WkbSnapshot {
  double t = 0.0;
  std::vector<Field> amplitudes;  ///< a_j(t, .)
  std::vector<Field> actions;     ///< lambda S_j(t, .), real-valued
};

/// phi(t, x) = kappa.x - t |kappa|^2 / 2
Field eikonal_phase(const Vec3& kappa, double t, const Grid& grid);

/// E(t, w) = (1 - e^{-i t w}) / (i w), with E(t, 0) = t and a series near 0.
Complex resonance_factor(double t, double omega);

/// lambda S_j(t, .) from its closed frequency representation.
Field action_phase(const ModeFamily& m, std::size_t j, double t, const KernelSpec& k);
/// Same quantity by composite Simpson quadrature in tau (nodes even, >= 8). Oracle.
Field action_phase_quadrature(const ModeFamily& m, std::size_t j, double t, const KernelSpec& k,
                              int nodes);

/// a_j(t, x) = alpha_j(x - t kappa_j) e^{i lambda S_j(t, x)}
WkbSnapshot snapshot(const ModeFamily& m, double t, const KernelSpec& k);

/// sum_j a_j e^{i phi_j / eps}
Field assemble(const ModeFamily& m, const WkbSnapshot& s, double eps);
Field assemble(const ModeFamily& m, double t, double eps, const KernelSpec& k);

/// sum_j alpha_j e^{i kappa_j.x / eps}
Field initial_data(const ModeFamily& m, double eps);

/// Z2 = 1/2 sum_j Lap a_j e^{i phi_j / eps}
Field z2_term(const ModeFamily& m, const WkbSnapshot& s, double eps);
Field z2_term(const ModeFamily& m, double t, double eps, const KernelSpec& k);

/// r = -(K * sum_{k != l} a_k conj(a_l) e^{i (phi_k - phi_l)/eps}) sum_j a_j e^{i phi_j/eps}
Field resonant_remainder(const ModeFamily& m, const WkbSnapshot& s, double eps, const KernelSpec& k);
Field resonant_remainder(const ModeFamily& m, double t, double eps, const KernelSpec& k);

struct AnsatzResidual {
  Field residual;  ///< i eps d_t u + eps^2/2 Lap u - eps lambda (K*|u|^2) u
  double identity_error = 0.0;
};

/// Left side evaluated with d_t a_j taken from the transport equation; compared
/// against eps^2 Z2 + eps lambda r.
AnsatzResidual ansatz_residual(const ModeFamily& m, double t, double eps, const KernelSpec& k);

/// max_j max_x |d_t a_j + kappa_j.grad a_j + i lambda (K*sum|a_l|^2) a_j| / max|a_j|,
/// with d_t by centered differences of step h.
double transport_residual(const ModeFamily& m, double t, const KernelSpec& k, double h = 1e-4);

/// max_j max_x | |a_j(t,x)| - |alpha_j(x - t kappa_j)| |
double modulus_transport_defect(const ModeFamily& m, const WkbSnapshot& s);

}  // namespace hwkb
