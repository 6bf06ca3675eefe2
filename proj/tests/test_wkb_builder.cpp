#include <cmath>

#include "doctest.h"
#include "hwkb/wkb_builder.hpp"

using namespace hwkb;

namespace {

const KernelSpec kKernel = KernelSpec::make(1, 0.5, 1.0);

ModeFamily two_modes(const Grid& g, double kappa = 2.0) {
  return ModeFamily({make_mode(g, {-kappa, 0, 0}, GaussianProfile{}), make_mode(g, {kappa, 0, 0}, GaussianProfile{})},
                    YNormSpec::make(1, 0.5));
}

ModeFamily one_mode(const Grid& g, double kappa) {
  return ModeFamily({make_mode(g, {kappa, 0, 0}, GaussianProfile{})}, YNormSpec::make(1, 0.5));
}

double real_part_max(const Field& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v.imag()));
  return m;
}

}  // namespace

TEST_CASE("mode family invariants") {
  const Grid g(1, 64.0, 2048);
  const ModeFamily m = two_modes(g);
  CHECK(m.delta() == doctest::Approx(4.0));
  CHECK(m.max_kappa() == doctest::Approx(2.0));
  CHECK(m.max_cross_frequency() == doctest::Approx(6.0));
  CHECK(m[0].radius == doctest::Approx(6.0));
  CHECK(std::isinf(one_mode(g, 1.0).delta()));
  CHECK_THROWS_WITH_AS(ModeFamily({make_mode(g, {1, 0, 0}, GaussianProfile{}), make_mode(g, {1, 0, 0}, GaussianProfile{})},
                                  YNormSpec::make(1, 0.5)),
                       doctest::Contains("delta = 0"), ConfigError);
  CHECK_THROWS_AS(ModeFamily({}, YNormSpec::make(1, 0.5)), ConfigError);
}

TEST_CASE("containment and resolution rules") {
  const Grid g(1, 32.0, 1024);
  const ModeFamily m = two_modes(g);
  CHECK_NOTHROW(check_containment(m, 1.0));
  CHECK_THROWS_AS(check_containment(m, 4.0), ContainmentError);
  CHECK_THROWS_AS(action_phase(m, 0, 4.0, kKernel), ContainmentError);
  CHECK(solver_resolution_holds(m, 0.1));
  CHECK_FALSE(solver_resolution_holds(m, 0.01));
  CHECK_THROWS_AS(assemble(m, 0.5, 0.01, kKernel), ResolutionError);
  CHECK_THROWS_AS(resonant_remainder(m, 0.5, 0.03, kKernel), ResolutionError);
}

TEST_CASE("eikonal phase") {
  const Grid g(1, 8.0, 16);
  CHECK(eikonal_phase({0, 0, 0}, 1.0, g).max_abs() == 0.0);
  const Field phi = eikonal_phase({2.0, 0, 0}, 1.0, g);
  CHECK(g.coordinate(9) == 0.5);
  CHECK(phi[9].real() == doctest::Approx(-1.0));
  // d_t phi = -|kappa|^2/2 and grad phi = kappa, so the eikonal residual vanishes.
  const Field later = eikonal_phase({2.0, 0, 0}, 1.0 + 1e-3, g);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs((later[i] - phi[i]).real() / 1e-3 + 2.0) < 1e-10);
}

TEST_CASE("resonance factor") {
  CHECK(resonance_factor(0.7, 0.0) == Complex{0.7, 0.0});
  const Complex near = resonance_factor(0.5, 1e-8);
  CHECK(std::abs(near - Complex{0.5, -0.5 * 0.25 * 1e-8}) < 1e-15);
  const double t = 0.8, w = 3.0;
  CHECK(std::abs(resonance_factor(t, w) - (1.0 - std::polar(1.0, -t * w)) / Complex{0.0, w}) < 1e-15);
}

TEST_CASE("action phase") {
  const Grid g(1, 64.0, 1024);
  const ModeFamily single = one_mode(g, 0.0);
  const double t = 0.6;
  Field expect = convolve(kKernel, modulus_squared(single[0].alpha));
  expect *= -kKernel.lambda * t;
  CHECK((action_phase(single, 0, t, kKernel) - expect).max_abs() < 1e-12 * expect.max_abs());
  CHECK((action_phase_quadrature(single, 0, t, kKernel, 8) - expect).max_abs() < 1e-12 * expect.max_abs());
  CHECK(action_phase(single, 0, 0.0, kKernel).max_abs() == 0.0);

  const ModeFamily m = two_modes(g);
  CHECK(action_phase_quadrature(m, 1, 0.0, kKernel, 16).max_abs() == 0.0);
  const Field closed = action_phase(m, 1, 0.5, kKernel);
  CHECK(real_part_max(closed) == 0.0);
  const double e64 = (closed - action_phase_quadrature(m, 1, 0.5, kKernel, 64)).max_abs();
  const double e32 = (closed - action_phase_quadrature(m, 1, 0.5, kKernel, 32)).max_abs();
  CHECK(e64 < 1e-8);
  CHECK(e32 / e64 >= 8.0);
  CHECK_THROWS_AS(action_phase_quadrature(m, 1, 0.5, kKernel, 7), std::invalid_argument);
}

TEST_CASE("snapshot and transport") {
  const Grid g(1, 64.0, 2048);
  const ModeFamily m = two_modes(g);
  const WkbSnapshot s0 = snapshot(m, 0.0, kKernel);
  for (std::size_t j = 0; j < m.size(); ++j) CHECK((s0.amplitudes[j] - m[j].alpha).max_abs() == 0.0);

  const KernelSpec free_k = KernelSpec::make(1, 0.5, 0.0);
  const WkbSnapshot sf = snapshot(m, 0.7, free_k);
  for (std::size_t j = 0; j < m.size(); ++j)
    CHECK((sf.amplitudes[j] - translate(m[j].alpha, {0.7 * m[j].kappa[0], 0, 0})).max_abs() == 0.0);

  for (double t : {0.0, 0.25, 0.5}) {
    CHECK(modulus_transport_defect(m, snapshot(m, t, kKernel)) < 1e-10);
    CHECK(transport_residual(m, t, kKernel) < 1e-6);
  }
}

TEST_CASE("assemble") {
  const Grid g(1, 64.0, 4096);
  const ModeFamily m = two_modes(g);
  const double eps = 0.05;
  Field init(g);
  for (std::size_t j = 0; j < m.size(); ++j)
    for (std::size_t i = 0; i < g.size(); ++i)
      init[i] += m[j].alpha[i] * std::polar(1.0, m[j].kappa[0] * g.coordinate(static_cast<int>(i)) / eps);
  CHECK((assemble(m, 0.0, eps, kKernel) - init).max_abs() < 1e-12);
  CHECK((initial_data(m, eps) - init).max_abs() < 1e-12);

  const ModeFamily still = one_mode(g, 0.0);
  CHECK((assemble(still, 0.8, eps, KernelSpec::make(1, 0.5, 0.0)) - still[0].alpha).max_abs() == 0.0);

  const WkbSnapshot s = snapshot(m, 0.5, kKernel);
  const double sum = l2_norm(s.amplitudes[0]) + l2_norm(s.amplitudes[1]);
  const double coarse = l2_norm(assemble(m, s, 0.5));
  const double fine = l2_norm(assemble(m, s, 0.025));
  CHECK(coarse <= sum * (1 + 1e-12));
  CHECK(fine <= sum * (1 + 1e-12));
  CHECK(std::abs(fine - std::sqrt(0.5) * sum) < 1e-6 * sum);
}

TEST_CASE("Z2 term") {
  const Grid g(1, 64.0, 2048);
  const ModeFamily zero({make_mode(g, {1, 0, 0}, GaussianProfile{0.0, {0, 0, 0}, 1.0})}, YNormSpec::make(1, 0.5));
  CHECK(z2_term(zero, 0.3, 0.1, kKernel).max_abs() == 0.0);

  const double A = 1.5, sigma = 0.8;
  const ModeFamily m({make_mode(g, {0, 0, 0}, GaussianProfile{A, {0, 0, 0}, sigma})}, YNormSpec::make(1, 0.5));
  const Field z = z2_term(m, 0.0, 0.1, kKernel);
  CHECK(z[1024].real() == doctest::Approx(-0.5 * A / (sigma * sigma)).epsilon(1e-10));

  const ModeFamily two = two_modes(g);
  for (double t : {0.0, 0.3, 0.6}) {
    const WkbSnapshot s = snapshot(two, t, kKernel);
    CHECK(l2w_norm(z2_term(two, s, 0.1)) <= e_norm(s.amplitudes, two.nspec()) * (1 + 1e-6));
  }
}

TEST_CASE("resonant remainder") {
  const Grid g(1, 64.0, 8192);
  CHECK(resonant_remainder(one_mode(g, 1.0), 0.4, 0.1, kKernel).max_abs() == 0.0);

  const ModeFamily m = two_modes(g);
  const ModeFamily swapped({m[1], m[0]}, m.nspec());
  CHECK((resonant_remainder(m, 0.4, 0.1, kKernel) - resonant_remainder(swapped, 0.4, 0.1, kKernel)).max_abs() <
        1e-12);

  std::vector<double> logs, norms;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    logs.push_back(std::log(eps));
    norms.push_back(std::log(l2w_norm(resonant_remainder(m, 0.5, eps, kKernel))));
  }
  const double slope = (norms.back() - norms.front()) / (logs.back() - logs.front());
  CHECK(std::abs(slope - 0.5) <= 0.15);
}

TEST_CASE("ansatz identity") {
  const Grid g(1, 64.0, 4096);
  const ModeFamily m = two_modes(g);
  for (double t : {0.0, 0.25, 0.5}) CHECK(ansatz_residual(m, t, 0.05, kKernel).identity_error < 1e-6);

  const ModeFamily single = one_mode(g, 1.0);
  const AnsatzResidual r = ansatz_residual(single, 0.4, 0.1, kKernel);
  Field z2 = z2_term(single, 0.4, 0.1, kKernel);
  z2 *= 0.01;
  CHECK(l2w_norm(r.residual - z2) < 1e-6 * l2w_norm(z2));

  const KernelSpec free_k = KernelSpec::make(1, 0.5, 0.0);
  const AnsatzResidual f = ansatz_residual(m, 0.4, 0.1, free_k);
  Field zf = z2_term(m, 0.4, 0.1, free_k);
  zf *= 0.01;
  CHECK(l2w_norm(f.residual - zf) < 1e-10 * l2w_norm(zf));
}

TEST_CASE("table profiles") {
  const Grid g(1, 64.0, 1024);
  const Field a = sample_profile(g, GaussianProfile{1.0, {2.0, 0, 0}, 1.0});
  std::vector<Complex> samples(a.values().begin(), a.values().end());
  const Mode mode = make_mode(g, {1, 0, 0}, TableProfile{samples});
  CHECK(mode.center[0] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(mode.radius > 5.0);
  CHECK(mode.radius < 9.0);
  CHECK(mode.width == doctest::Approx(1.0).epsilon(1e-6));
}
