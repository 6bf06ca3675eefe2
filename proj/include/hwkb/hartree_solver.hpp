#pragma once

#include <stdexcept>
#include <vector>

#include "hwkb/grid_spectral.hpp"
#include "hwkb/singular_kernel.hpp"

namespace hwkb {

enum class Scheme { strang, picard };

/// Parameters for integrating  i eps u_t + eps^2/2 Lap u = eps lambda (K*|u|^2) u.
struct SolverParams {
  double eps = 0.1;
  double dt = 0.01;
  double final_time = 1.0;
  Scheme scheme = Scheme::strang;

  /// Largest admissible dt / eps.
  static constexpr double kMaxDtFactor = 0.25;

  static SolverParams make(double eps, double dt_factor, double final_time);
  void validate() const;
};

struct Trajectory {
  std::vector<double> sample_times;
  std::vector<Field> states;
  std::vector<double> mass_log;

  /// max_t |m(t) - m(0)| / m(0)
  double max_mass_drift() const;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(double time, double ratio);
  double time() const { return time_; }
  double ratio() const { return ratio_; }

 private:
  double time_;
  double ratio_;
};

class NonContractionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact free flow e^{i eps t Lap/2}: multiplies f^ by e^{-i eps t |xi|^2 / 2}.
Field free_propagator(const Field& f, double eps, double t);
void free_propagator_coefficients(SpectralField& F, double eps, double t);

/// Real potential lambda K*|u|^2.
Field hartree_potential(const KernelMultiplier& k, const Field& u);
Field hartree_potential(const KernelSpec& k, const Field& u);

/// One kinetic-potential-kinetic Strang step of size p.dt.
Field strang_step(const Field& u, const KernelMultiplier& k, const SolverParams& p);
Field strang_step(const Field& u, const KernelSpec& k, const SolverParams& p);

/// Strang integration recording the state at each sample time. Time 0 is always
/// recorded first. The step is reduced so that it divides every sample gap.
/// Throws DivergenceError when |u|_{L2 cap W} exceeds 4x its initial value.
Trajectory evolve(const Field& u0, const KernelSpec& k, const SolverParams& p,
                  const std::vector<double>& samples);

struct PicardOutcome {
  Field state;
  int iterations = 0;
  double last_increment = 0.0;
};

/// Fixed-point iteration of the Duhamel map
///   Phi(u)(t) = U(t) u0 - i lambda int_0^t U(t - tau) (K*|u|^2) u (tau) dtau,
/// U(t) = e^{i eps t Lap/2}, trapezoidal in tau on `steps` uniform intervals
/// (0 picks max(16, ceil(T0 / (0.1 eps)))). Converged when the largest l2w
/// increment over the time nodes drops below `tol`.
PicardOutcome picard_evolve(const Field& u0, const KernelSpec& k, double eps, double T0, double tol,
                            int max_iter, int steps = 0);

}  // namespace hwkb
