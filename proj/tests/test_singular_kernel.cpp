#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "doctest.h"
#include "hwkb/singular_kernel.hpp"

using namespace hwkb;

TEST_CASE("hartree_constant closed form and oracle") {
  CHECK(hartree_constant(1, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(hartree_constant(3, 1.0) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-14));
  CHECK(hartree_constant(3, 1.0) == doctest::Approx(0.7979).epsilon(1e-4));
  CHECK(hartree_constant(2, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  const std::pair<int, double> cases[] = {{1, 0.25}, {1, 0.5}, {1, 0.75}, {2, 0.5}, {2, 1.0}, {3, 0.5}, {3, 1.0}, {3, 2.0}};
  for (const auto& [d, g] : cases)
    CHECK(std::abs(hartree_constant(d, g) / hartree_constant_quadrature(d, g) - 1.0) < 1e-8);
  CHECK_THROWS_AS(hartree_constant(1, 1.0), ConfigError);
  CHECK_THROWS_AS(hartree_constant(2, 0.0), ConfigError);
  CHECK_THROWS_AS(KernelSpec::make(3, 3.5, 1.0), ConfigError);
}

TEST_CASE("multiplier values and scaling") {
  const KernelSpec k1 = KernelSpec::make(1, 0.5, 1.0);
  CHECK(multiplier(k1, {1.0, 0, 0}) == doctest::Approx(1.0));
  CHECK(multiplier(k1, {4.0, 0, 0}) == doctest::Approx(0.5));
  const KernelSpec k3 = KernelSpec::make(3, 1.0, 1.0);
  CHECK(multiplier(k3, {2.0, 0, 0}) == doctest::Approx(0.1995).epsilon(1e-3));
  CHECK(multiplier(k3, {0.0, 2.0, 0}) == doctest::Approx(k3.c_const / 4.0));
  CHECK_THROWS_AS(multiplier(k3, {0, 0, 0}), std::domain_error);
  const Vec3 xi{0.3, -1.1, 0.7};
  const double c = 2.5;
  CHECK(multiplier(k3, {c * xi[0], c * xi[1], c * xi[2]}) ==
        doctest::Approx(std::pow(c, k3.gamma - 3) * multiplier(k3, xi)).epsilon(1e-15));
}

TEST_CASE("split norms") {
  const SplitNorms s1 = split_norms(KernelSpec::make(1, 0.5, 1.0));
  CHECK(s1.k1_l1 == doctest::Approx(4.0));
  CHECK(s1.k2_sup == doctest::Approx(1.0));
  const KernelSpec k3 = KernelSpec::make(3, 1.0, 1.0);
  CHECK(split_norms(k3).k1_l1 == doctest::Approx(10.027).epsilon(1e-4));
  boost::math::quadrature::tanh_sinh<double> q;
  for (int d = 1; d <= 3; ++d) {
    const KernelSpec k = KernelSpec::make(d, 0.5 * d, 1.0);
    const double radial = q.integrate([&](double r) { return std::pow(r, k.gamma - 1.0); }, 0.0, 1.0);
    CHECK(std::abs(k.c_const * unit_sphere_area(d) * radial / split_norms(k).k1_l1 - 1.0) < 1e-6);
  }
}

TEST_CASE("zero mode matches the zeta-regularized value in 1D") {
  for (double g : {0.25, 0.5, 0.75}) {
    const KernelSpec k = KernelSpec::make(1, g, 1.0);
    const Grid grid(1, 64.0, 256);
    const double expect = -2.0 * k.c_const * boost::math::zeta(1.0 - g) * std::pow(grid.dxi(), g - 1.0);
    CHECK(zero_mode_value(k, grid) == doctest::Approx(expect).epsilon(1e-8));
    const double w = -2.0 * boost::math::zeta(g) * std::pow(grid.dx(), 1.0 - g);
    CHECK(direct_singular_weight(k, grid) == doctest::Approx(w).epsilon(1e-8));
  }
}

TEST_CASE("convolve eigenfunctions, zero input, realness") {
  const KernelSpec k = KernelSpec::make(1, 0.5, 1.0);
  const Grid g(1, 2.0 * kPi, 64);
  CHECK(convolve(k, Field(g)).max_abs() == 0.0);
  Field w(g);
  for (std::size_t i = 0; i < g.size(); ++i) w[i] = std::polar(1.0, 3.0 * g.coordinate(static_cast<int>(i)));
  Field expect = w;
  expect *= std::sqrt(2.0 * kPi) * k.c_const * std::pow(3.0, -0.5);
  CHECK((convolve(k, w) - expect).max_abs() < 1e-12);

  const KernelSpec k2 = KernelSpec::make(2, 0.5, 1.0);
  const Grid g2(2, 16.0, 64);
  const Field v = convolve(k2, sample_profile(g2, GaussianProfile{}));
  double imag = 0.0, lowest = 0.0;
  for (const auto& x : v.values()) imag = std::max(imag, std::abs(x.imag())), lowest = std::min(lowest, x.real());
  CHECK(imag < 1e-12 * v.max_abs());
  CHECK(lowest >= -1e-8 * v.max_abs());
}

TEST_CASE("convolve agrees with direct quadrature on the density support") {
  const KernelSpec k = KernelSpec::make(1, 0.5, 1.0);
  const Grid g(1, 64.0, 256);
  const Field rho = sample_profile(g, GaussianProfile{});
  const Field fft = convolve(k, rho), direct = convolve_direct(k, rho);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (rho[i].real() >= 1e-6) err = std::max(err, std::abs(fft[i] - direct[i]));
  CHECK(err / direct.max_abs() < 1e-3);
}

TEST_CASE("direct quadrature: zero input, symmetry, self-convergence") {
  const KernelSpec k = KernelSpec::make(1, 0.5, 1.0);
  const Grid g(1, 32.0, 128);
  CHECK(convolve_direct(k, Field(g)).max_abs() == 0.0);
  const Field out = convolve_direct(k, sample_profile(g, GaussianProfile{}));
  double asym = 0.0;
  for (int i = 1; i < 128; ++i) asym = std::max(asym, std::abs(out[i] - out[128 - i]));
  CHECK(asym < 1e-10);

  double previous = 0.0;
  for (int n : {32, 64, 128, 256}) {
    const Grid gn(1, 32.0, n);
    const Field rho = sample_profile(gn, GaussianProfile{});
    const Field direct = convolve_direct(k, rho, true);
    const double err = (convolve(k, rho) - direct).max_abs() / direct.max_abs();
    if (previous > 0.0) CHECK(previous / err >= 2.0);
    previous = err;
  }
  CHECK_THROWS_AS(convolve_direct(k, Field(Grid(1, 32.0, 1 << 17))), std::invalid_argument);
  CHECK_THROWS_AS(convolve_direct(KernelSpec::make(2, 0.5, 1.0), Field(Grid(2, 8.0, 16)), true),
                  std::invalid_argument);
}

TEST_CASE("kernel multiplier caches the scaled lattice values") {
  const KernelSpec k = KernelSpec::make(2, 1.0, 0.5);
  const Grid g(2, 10.0, 16);
  const KernelMultiplier m(k, g);
  CHECK(m[0] == doctest::Approx(2.0 * kPi * zero_mode_value(k, g)));
  CHECK(m[1] == doctest::Approx(2.0 * kPi * multiplier(k, g.frequency_vector(1))));
  CHECK(k.with_corrupted_constant(1.1).c_const == doctest::Approx(1.1 * k.c_const));
}
