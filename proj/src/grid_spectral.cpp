#include "hwkb/grid_spectral.hpp"

#include <cmath>
#include <numeric>

#include "hwkb/fft.hpp"

namespace hwkb {

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 26;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// (-1)^(sum of lattice indices); folds the box offset -L/2 into the DFT.
double parity(const Grid& grid, std::size_t flat) {
  const auto idx = grid.unflatten(flat);
  int s = 0;
  for (int a = 0; a < grid.dim(); ++a) s += idx[a];
  return (s % 2 == 0) ? 1.0 : -1.0;
}

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

Grid::Grid(int dim, double length, int points) : dim_(dim), length_(length), points_(points) {
  if (dim < 1 || dim > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("box length must be positive");
  if (!is_power_of_two(points) || points < 2)
    throw ConfigError("points per axis must be an even power of two");
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) {
    total *= static_cast<std::size_t>(points);
    if (total > kMaxGridPoints) throw ConfigError("grid exceeds 2^26 points");
  }
  size_ = total;
}

double Grid::cell_volume() const { return std::pow(dx(), dim_); }
double Grid::dual_cell_volume() const { return std::pow(dxi(), dim_); }

std::array<int, 3> Grid::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

Vec3 Grid::position(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Vec3 x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = coordinate(idx[a]);
  return x;
}

Vec3 Grid::frequency_vector(std::size_t flat) const {
  const auto idx = unflatten(flat);
  Vec3 xi{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) xi[a] = frequency(idx[a]);
  return xi;
}

bool Grid::on_nyquist(std::size_t flat, int axis) const {
  return unflatten(flat)[axis] == points_ / 2;
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.size()) {}

Field::Field(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw std::invalid_argument("sample count must equal N^d");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(Complex scale) {
  for (auto& v : values_) v *= scale;
  return *this;
}

double Field::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex s, Field a) { return a *= s; }

Field multiply(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid());
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Field conjugate(Field a) {
  for (auto& v : a.values()) v = std::conj(v);
  return a;
}

Field modulus_squared(const Field& f) {
  Field out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::norm(f[i]);
  return out;
}

Field modulate(const Field& f, const Field& phase) {
  require_same_grid(f.grid(), phase.grid());
  Field out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = f[i] * std::polar(1.0, phase[i].real());
  return out;
}

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.size()) {}

SpectralField::SpectralField(const Grid& grid, std::vector<Complex> coefficients)
    : grid_(grid), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != grid_.size())
    throw std::invalid_argument("coefficient count must equal N^d");
}

SpectralField forward_transform(const Field& f) {
  const Grid& g = f.grid();
  SpectralField out(g);
  detail::fft_forward(g, f.values(), out.coefficients());
  const double scale = std::pow(2.0 * kPi, -0.5 * g.dim()) * g.cell_volume();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= scale * parity(g, i);
  return out;
}

Field inverse_transform(const SpectralField& F) {
  const Grid& g = F.grid();
  const double scale = std::pow(2.0 * kPi, -0.5 * g.dim()) * g.dual_cell_volume();
  std::vector<Complex> shifted(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) shifted[i] = F[i] * (scale * parity(g, i));
  Field out(g);
  detail::fft_backward(g, shifted, out.values());
  return out;
}

Field spectral_derivative(const Field& f, const MultiIndex& eta) {
  const Grid& g = f.grid();
  int order = 0;
  for (int a = 0; a < 3; ++a) {
    if (eta[a] < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
    if (a >= g.dim() && eta[a] != 0)
      throw std::invalid_argument("multi-index addresses an axis beyond the grid dimension");
    order += eta[a];
  }
  if (order > 3) throw std::invalid_argument("derivative order |eta| must not exceed 3");
  if (order == 0) return f;

  SpectralField F = forward_transform(f);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const Vec3 xi = g.frequency_vector(i);
    Complex m{1.0, 0.0};
    for (int a = 0; a < g.dim(); ++a) {
      if (eta[a] == 0) continue;
      if (g.on_nyquist(i, a)) {
        m = 0.0;
        break;
      }
      m *= std::pow(Complex{0.0, xi[a]}, eta[a]);
    }
    F[i] *= m;
  }
  return inverse_transform(F);
}

Field laplacian(const Field& f) {
  const Grid& g = f.grid();
  SpectralField F = forward_transform(f);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const Vec3 xi = g.frequency_vector(i);
    double m = 0.0;
    for (int a = 0; a < g.dim(); ++a)
      if (!g.on_nyquist(i, a)) m -= xi[a] * xi[a];
    F[i] *= m;
  }
  return inverse_transform(F);
}

Field directional_derivative(const Field& f, const Vec3& kappa) {
  const Grid& g = f.grid();
  SpectralField F = forward_transform(f);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const Vec3 xi = g.frequency_vector(i);
    double s = 0.0;
    for (int a = 0; a < g.dim(); ++a)
      if (!g.on_nyquist(i, a)) s += kappa[a] * xi[a];
    F[i] *= Complex{0.0, s};
  }
  return inverse_transform(F);
}

void translate_coefficients(SpectralField& F, const Vec3& shift) {
  const Grid& g = F.grid();
  for (std::size_t i = 0; i < F.size(); ++i) {
    const Vec3 xi = g.frequency_vector(i);
    double phase = 0.0;
    bool zero = false;
    for (int a = 0; a < g.dim(); ++a) {
      if (shift[a] == 0.0) continue;
      if (g.on_nyquist(i, a)) zero = true;
      phase -= shift[a] * xi[a];
    }
    F[i] = zero ? Complex{0.0, 0.0} : F[i] * std::polar(1.0, phase);
  }
}

Field translate(const Field& f, const Vec3& shift) {
  bool any = false;
  for (int a = 0; a < f.grid().dim(); ++a) any = any || shift[a] != 0.0;
  if (!any) return f;
  SpectralField F = forward_transform(f);
  translate_coefficients(F, shift);
  return inverse_transform(F);
}

Field sample_profile(const Grid& grid, const ProfileSpec& profile) {
  if (const auto* gauss = std::get_if<GaussianProfile>(&profile)) {
    if (!(gauss->width > 0.0)) throw ConfigError("gaussian profile width must be positive");
    Field out(grid);
    const double inv = 1.0 / (2.0 * gauss->width * gauss->width);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Vec3 x = grid.position(i);
      double r2 = 0.0;
      for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - gauss->center[a]) * (x[a] - gauss->center[a]);
      out[i] = gauss->amplitude * std::exp(-r2 * inv);
    }
    return out;
  }
  const auto& table = std::get<TableProfile>(profile);
  if (table.samples.size() != grid.size())
    throw ConfigError("profile table length must equal N^d");
  return Field(grid, table.samples);
}

}  // namespace hwkb
