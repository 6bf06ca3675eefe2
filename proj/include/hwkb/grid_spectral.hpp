#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hwkb {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using MultiIndex = std::array<int, 3>;

inline constexpr double kPi = 3.14159265358979323846;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Periodic box [-L/2, L/2)^d sampled with N points per axis.
///
/// Points are stored row-major with axis 0 slowest. The dual lattice is
/// xi_k = 2 pi k / L with k in [-N/2, N/2); spectral arrays keep the FFT
/// storage order (k = i for i < N/2, k = i - N otherwise).
class Grid {
 public:
  Grid(int dim, double length, int points);

  int dim() const { return dim_; }
  double length() const { return length_; }
  int points() const { return points_; }
  std::size_t size() const { return size_; }

  double dx() const { return length_ / points_; }
  double dxi() const { return 2.0 * kPi / length_; }
  double cell_volume() const;
  double dual_cell_volume() const;
  /// Largest lattice frequency pi N / L.
  double max_frequency() const { return kPi * points_ / length_; }

  double coordinate(int i) const { return -0.5 * length_ + i * dx(); }
  /// Signed lattice index k for storage position i.
  int wavenumber(int i) const { return i < points_ / 2 ? i : i - points_; }
  double frequency(int i) const { return wavenumber(i) * dxi(); }

  std::array<int, 3> unflatten(std::size_t flat) const;
  Vec3 position(std::size_t flat) const;
  Vec3 frequency_vector(std::size_t flat) const;
  /// True when any axis sits on the unpaired Nyquist index -N/2.
  bool on_nyquist(std::size_t flat, int axis) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  double length_;
  int points_;
  std::size_t size_;
};

/// Complex samples of a function on a Grid (physical representation).
class Field {
 public:
  explicit Field(const Grid& grid);
  Field(const Grid& grid, std::vector<Complex> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  std::span<Complex> values() { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  Complex& operator[](std::size_t i) { return values_[i]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex scale);

  double max_abs() const;
  bool all_finite() const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex s, Field a);
/// Pointwise product.
Field multiply(const Field& a, const Field& b);
Field conjugate(Field a);
/// |f|^2 as a real-valued field.
Field modulus_squared(const Field& f);
/// Pointwise e^{i phase} modulation.
Field modulate(const Field& f, const Field& phase);

/// Frequency-side coefficients f^(xi_k) under the unitary convention.
class SpectralField {
 public:
  explicit SpectralField(const Grid& grid);
  SpectralField(const Grid& grid, std::vector<Complex> coefficients);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const Complex> coefficients() const { return coeffs_; }
  std::span<Complex> coefficients() { return coeffs_; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }

 private:
  Grid grid_;
  std::vector<Complex> coeffs_;
};

/// f^(xi_k) = (2 pi)^{-d/2} dx^d sum_m f(x_m) e^{-i x_m . xi_k}.
SpectralField forward_transform(const Field& f);
/// Inverse of forward_transform.
Field inverse_transform(const SpectralField& F);

/// Inverse transform of (i xi)^eta f^. Nyquist rows of differentiated axes are zeroed.
Field spectral_derivative(const Field& f, const MultiIndex& eta);
Field laplacian(const Field& f);
/// Directional derivative kappa . grad f.
Field directional_derivative(const Field& f, const Vec3& kappa);

/// f(. - s) by spectral modulation e^{-i s.xi}; periodic wrap-around.
Field translate(const Field& f, const Vec3& shift);
/// Same operation applied in place on coefficients.
void translate_coefficients(SpectralField& F, const Vec3& shift);

struct GaussianProfile {
  double amplitude = 1.0;
  Vec3 center{0.0, 0.0, 0.0};
  double width = 1.0;
};

struct TableProfile {
  std::vector<Complex> samples;
};

using ProfileSpec = std::variant<GaussianProfile, TableProfile>;

Field sample_profile(const Grid& grid, const ProfileSpec& profile);

}  // namespace hwkb
