#include <cmath>
#include <random>

#include "doctest.h"
#include "hwkb/functional_norms.hpp"

using namespace hwkb;

namespace {

Field band_limited(const Grid& g, int band, std::mt19937& rng) {
  std::normal_distribution<double> n;
  SpectralField F(g);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const auto idx = g.unflatten(i);
    bool in = true;
    for (int a = 0; a < g.dim(); ++a) in = in && std::abs(g.wavenumber(idx[a])) <= band;
    if (in) F[i] = {n(rng), n(rng)};
  }
  return inverse_transform(F);
}

Field plane(const Grid& g, int k) {
  Field f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = std::polar(1.0, k * g.dxi() * g.position(i)[0]);
  return f;
}

}  // namespace

TEST_CASE("Y-norm derivative order") {
  CHECK(YNormSpec::make(1, 0.5).n == 2);
  CHECK(YNormSpec::make(2, 1.5).n == 2);
  CHECK(YNormSpec::make(3, 0.5).n == 3);
  CHECK(YNormSpec::make(3, 1.0).n == 2);
  CHECK(YNormSpec::make(3, 2.5).n == 2);
  CHECK_THROWS_AS(YNormSpec::make(2, 2.0), ConfigError);
  CHECK(multi_indices(1, 2).size() == 3);
  CHECK(multi_indices(2, 2).size() == 6);
  CHECK(multi_indices(3, 3).size() == 20);
}

TEST_CASE("L2 and Wiener norms of reference fields") {
  const Grid g(1, 40.0, 256);
  const Field gauss = sample_profile(g, GaussianProfile{});
  CHECK(l2_norm(Field(g)) == 0.0);
  CHECK(wiener_norm(Field(g)) == 0.0);
  CHECK(std::abs(l2_norm(gauss) - std::pow(kPi, 0.25)) < 1e-10);
  CHECK(std::abs(wiener_norm(gauss) - std::sqrt(2.0 * kPi)) < 1e-8);
  Field twice = gauss;
  twice *= 2.0;
  CHECK(l2_norm(twice) == 2.0 * l2_norm(gauss));
  CHECK(l2w_norm(gauss) == l2_norm(gauss) + wiener_norm(gauss));
  const Grid p(1, 16.0, 64);
  CHECK(wiener_norm(plane(p, 3)) == doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));

  const NormReport r = norm_report(gauss);
  CHECK(r.l2w == r.l2 + r.wiener);
  CHECK_FALSE(r.y.has_value());
}

TEST_CASE("triangle inequality, translation invariance, sup embedding") {
  std::mt19937 rng(5);
  for (int d = 1; d <= 3; ++d) {
    const Grid g(d, 10.0, d == 3 ? 16 : 32);
    for (int trial = 0; trial < 20; ++trial) {
      const Field f = band_limited(g, 3, rng), h = band_limited(g, 5, rng);
      CHECK(l2_norm(f + h) <= (l2_norm(f) + l2_norm(h)) * (1 + 1e-12));
      CHECK(wiener_norm(f + h) <= (wiener_norm(f) + wiener_norm(h)) * (1 + 1e-12));
      CHECK(f.max_abs() <= std::pow(2.0 * kPi, -0.5 * d) * wiener_norm(f) * (1 + 1e-10));
      const Field moved = translate(f, {0.37, -0.2, 1.1});
      CHECK(std::abs(l2_norm(moved) - l2_norm(f)) < 1e-12 * l2_norm(f));
      CHECK(std::abs(wiener_norm(moved) - wiener_norm(f)) < 1e-12 * wiener_norm(f));
    }
  }
}

TEST_CASE("Y and E norms") {
  const Grid g(1, 40.0, 512);
  const YNormSpec spec = YNormSpec::make(1, 0.5);
  CHECK(y_norm(Field(g), spec) == 0.0);
  const Field gauss = sample_profile(g, GaussianProfile{});
  const double y = y_norm(gauss, spec);
  CHECK(y >= l2w_norm(gauss));

  // Closed forms for e^{-x^2/2}: ||f'||_2^2 = sqrt(pi)/2, ||f''||_2^2 = 3 sqrt(pi)/4,
  // ||f'||_W = 2, ||f''||_W = sqrt(2 pi). The kink of |xi| at 0 puts the lattice sum for
  // ||f'||_W at 2 - dxi^2/6 (Euler-Maclaurin).
  const double w1 = 2.0 - g.dxi() * g.dxi() / 6.0;
  const double oracle = std::pow(kPi, 0.25) + std::sqrt(2 * kPi) + std::sqrt(std::sqrt(kPi) / 2) + w1 +
                        std::sqrt(3 * std::sqrt(kPi) / 4) + std::sqrt(2 * kPi);
  CHECK(std::abs(y / oracle - 1.0) < 1e-6);

  CHECK(e_norm({}, spec) == 0.0);
  CHECK(e_norm({gauss}, spec) == y);
  CHECK(e_norm({gauss, gauss}, spec) == 2.0 * y);
}

TEST_CASE("Wiener algebra bound") {
  const Grid g(1, 16.0, 64);
  const AlgebraCheck zero = check_algebra_bound(plane(g, 2), Field(g));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.holds);
  const AlgebraCheck pw = check_algebra_bound(plane(g, 3), plane(g, 3));
  CHECK(pw.lhs == doctest::Approx(pw.rhs).epsilon(1e-12));
  CHECK(pw.holds);
  CHECK(pw.rhs <= pw.product_bound);

  std::mt19937 rng(17);
  for (int d = 1; d <= 2; ++d) {
    const Grid gd(d, 12.0, d == 1 ? 128 : 32);
    int ok = 0;
    for (int i = 0; i < 200; ++i) ok += check_algebra_bound(band_limited(gd, 3, rng), band_limited(gd, 3, rng)).holds;
    CHECK(ok == 200);
  }
  CHECK_THROWS_AS(check_algebra_bound(plane(g, 20), plane(g, 1)), std::invalid_argument);
}

TEST_CASE("Hartree bound") {
  const KernelSpec k = KernelSpec::make(1, 0.5, 1.0);
  const Grid g(1, 32.0, 256);
  const BoundCheck zero = check_hartree_bound(k, Field(g));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.rhs == 0.0);
  CHECK(zero.holds);
  const Field gauss = sample_profile(g, GaussianProfile{});
  const BoundCheck sq = check_hartree_bound(k, multiply(gauss, gauss));
  CHECK(sq.holds);
  CHECK(sq.lhs > 0.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> c(-4.0, 4.0), w(0.3, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Field h = sample_profile(g, GaussianProfile{1.0, {c(rng), 0, 0}, w(rng)}) +
                    sample_profile(g, GaussianProfile{0.5, {c(rng), 0, 0}, w(rng)});
    CHECK(check_hartree_bound(k, h).holds);
  }
}
