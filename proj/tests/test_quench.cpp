#include "doctest.h"
#include "fixtures.hpp"
#include "hbarq/error.hpp"
#include <cmath>
#include <vector>

using namespace hbarq;

namespace {
QuenchScenario scen(double Q, double v = 1.0) {
  QuenchScenario s;
  s.Q = Q;
  s.v = v;
  s.sigma = 1e12;
  s.L = 0.1;
  return s;
}
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_SUITE("quench") {

TEST_CASE("polar and cartesian radii agree") {
  const auto q = default_calculator(30);
  const auto s = scen(30);
  CHECK(rel(q.d_tr_cartesian(s), q.d_tr(s)) < 1e-4);
  CHECK(rel(q.d_in_cartesian(s), q.d_in_polar(s)) < 1e-4);
  CHECK(q.im_delta_sign_consistent());
}

TEST_CASE("widths from radii and from radial moments") {
  const auto q = default_calculator(30);
  const auto s = scen(30);
  CHECK(rel(q.gamma_t(s), q.gamma_t_radial(s)) < 1e-4);
  CHECK(rel(q.gamma_d(s), q.gamma_d_radial(s)) < 1e-4);
  const auto sum = q.summary(s);
  CHECK(sum.Gamma_in == sum.Gamma_d + sum.Gamma_CP);
  CHECK(sum.Gamma_t >= 0.0);
  CHECK(sum.Gamma_d >= 0.0);
}

TEST_CASE("radii times velocity do not depend on velocity") {
  const auto q = default_calculator(30);
  const double tr = q.d_tr(scen(30, 1.0)) * 1.0;
  const double in = q.d_in(scen(30, 1.0)) * 1.0;
  for (double v : {0.5, 2.0}) {
    CHECK(rel(q.d_tr(scen(30, v)) * v, tr) < 1e-10);
    CHECK(rel(q.d_in(scen(30, v)) * v, in) < 1e-10);
  }
}

TEST_CASE("widths are linear in the density") {
  const auto q = default_calculator(30);
  auto a = scen(30), b = scen(30);
  b.sigma = 3 * a.sigma;
  CHECK(rel(q.gamma_t(b), 3 * q.gamma_t(a)) < 1e-12);
  CHECK(rel(q.gamma_d(b), 3 * q.gamma_d(a)) < 1e-12);
}

TEST_CASE("quench ratio two ways") {
  const auto q = default_calculator(30);
  const auto s = scen(30);
  CHECK(rel(q.quench_ratio(), q.d_tr(s) / q.d_in(s)) < 1e-6);
  CHECK(q.quench_ratio() < 1.0);
}

TEST_CASE("effective number of populated states") {
  const auto q = default_calculator(30);
  CHECK(q.n_effective(scen(30)) == doctest::Approx(2.4e4).epsilon(0.02));
  CHECK(rel(q.n_effective(scen(30, 2.0)), 2 * q.n_effective(scen(30))) < 1e-12);
  const auto q10 = default_calculator(10);
  CHECK(rel(q10.n_effective(scen(10)), 3 * q.n_effective(scen(30))) < 1e-12);
}

TEST_CASE("mirror lifetime") {
  const Constants c = Constants::defaults();
  const double im = c.to_au(27.5e-9, Dimension::length);
  const QuenchCalculator q(c, flat_profile({std::complex<double>(0, -im)}, 1e4),
                           GravitationalSpectrum(c, 5));
  CHECK(c.hbar / q.gamma_cp() == doctest::Approx(0.1168).epsilon(2e-3));
}

TEST_CASE("decay probability over the mirror") {
  const auto q = default_calculator(30);
  auto s = scen(30);
  s.sigma = 0.0;
  s.L = 0.0;
  CHECK(q.survival(s) == 0.0);
  const Constants c = Constants::defaults();
  s.L = 0.1;
  CHECK(q.survival(s) ==
        doctest::Approx(1 - std::exp(-q.gamma_cp() * s.L / (c.hbar * s.v))));
  double prev = q.survival(s);
  for (double L : {0.2, 0.4}) {
    s.L = L;
    CHECK(q.survival(s) > prev);
    prev = q.survival(s);
  }
  auto slow = scen(30, 0.5), fast = scen(30, 1.0);
  CHECK(q.survival(slow) > q.survival(fast));
  auto dense = scen(30);
  dense.sigma = 2e12;
  CHECK(q.survival(dense) > q.survival(fast));
}

TEST_CASE("no charge, no quench") {
  const auto q = default_calculator(0);
  const auto s = scen(0);
  const auto sum = q.summary(s);
  CHECK(sum.d_tr == 0.0);
  CHECK(sum.d_in == 0.0);
  CHECK(sum.Gamma_t == 0.0);
  CHECK(sum.Gamma_d == 0.0);
  CHECK(q.p_of_d(s, 0.0) == 0.0);
  CHECK(q.p_in_of_d(s, 0.0).p == 0.0);
  CHECK(std::norm(q.transition_amplitude(2, s, {}).value) == 0.0);
  CHECK_THROWS_AS(q.quench_ratio(), Error);
  CHECK_THROWS_AS(q.n_effective(s), Error);
}

TEST_CASE("per-passage probabilities") {
  const auto q = default_calculator(30);
  const auto s = scen(30);
  const Constants c = Constants::defaults();
  const double d = c.from_au(3000.0, Dimension::length);
  CHECK(q.p_of_d(s, d) == q.p_of_d(s, -d));
  CHECK(q.p_in_of_d(s, d).p == q.p_in_of_d(s, -d).p);
  const auto small = q.p_in_of_d(s, d);
  CHECK_FALSE(small.exact_form);
  CHECK(small.p > 0.0);
  CHECK(small.p < 0.1);
  // slow enough that one passage is likely to annihilate the atom
  const auto big = q.p_in_of_d(scen(30, 1e-5), d);
  CHECK(big.exact_form);
  const double x = small.p * 1e5;
  CHECK(big.p == doctest::Approx(-std::expm1(-x)).epsilon(1e-9));
  CHECK(big.p <= 1.0);
  CHECK(std::abs(x - big.p) < x * x);
}

TEST_CASE("first-order amplitudes") {
  const auto q = default_calculator(30);
  auto s = scen(30);
  const auto a = q.transition_amplitude(3, s, {});
  CHECK(std::abs(a.value) == doctest::Approx(std::abs(a.alt_phase)));
  CHECK(q.transition_probability(3, s, {}) ==
        doctest::Approx(std::norm(a.value) * q.survival_factor(s)).epsilon(1e-14));
  const auto lf = q.transition_amplitude_low_frequency(3, s, {});
  REQUIRE(a.omega_tau < 1e-3);
  CHECK(std::abs(lf.value - a.value) < 1e-3 * std::abs(a.value));
  CHECK_THROWS_AS(q.transition_amplitude(1, s, {}), Error);
}

TEST_CASE("two charges half a period apart interfere destructively") {
  const auto q = default_calculator(30);
  const auto s = scen(30);
  const double w = q.spectrum().omega(1, 2);
  const std::vector<double> t0{0.0, M_PI / std::abs(w)};
  const double one = std::norm(q.transition_amplitude(2, s, {}).value);
  const double two = std::norm(q.transition_amplitude(2, s, t0).value);
  CHECK(two < 1e-12 * one);
  const std::vector<double> same{0.0, 2 * M_PI / std::abs(w)};
  CHECK(std::norm(q.transition_amplitude(2, s, same).value) ==
        doctest::Approx(4 * one).epsilon(1e-9));
}

TEST_CASE("random arrival times add incoherently") {
  const double m = mean_phase_sum_sq(25, 1600.0, 1.0, 20000, 11);
  CHECK(m == doctest::Approx(25.0).epsilon(0.05));
  CHECK(mean_phase_sum_sq(25, 0.0, 1.0, 10, 3) == doctest::Approx(625.0));
}

TEST_CASE("trajectory and windows") {
  const auto q = default_calculator(30);
  const Constants c = Constants::defaults();
  CHECK(trajectory_rho(3.0, 2.0, 2.0) == doctest::Approx(5.0));
  CHECK(trajectory_rho(3.0, 2.0, 3.0, 1.0) == doctest::Approx(5.0));
  const double d = c.from_au(1000.0, Dimension::length);
  CHECK(q.a_of_t(d, 1.0, 1e-8).au == q.a_of_t(d, 1.0, -1e-8).au);
  CHECK(q.a_of_t(d, 1.0, 1.0).au == q.profile().a_cp().au);
  const double v = c.to_au(1.0, Dimension::velocity);
  CHECK(q.window_half_au(2 * q.profile().rho_hi(), v) == 0.0);
}

TEST_CASE("scenario validation") {
  const auto q = default_calculator(30);
  auto s = scen(30);
  s.v = 0.0;
  CHECK_THROWS_AS(q.d_tr(s), Error);
  CHECK_THROWS_AS(q.d_tr(scen(31)), Error);
  s = scen(30);
  s.sigma = -1.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("validity flags") {
  const auto q = default_calculator(30);
  const auto f = q.validity(scen(30));
  CHECK(f.ok());
  CHECK(f.warnings().empty());
  CHECK(f.l_pol_over_l_g == doctest::Approx(0.0246).epsilon(0.01));
  const auto slow = q.validity(scen(30, 1e-4));
  CHECK_FALSE(slow.ok());
  CHECK(slow.warnings().size() == 1);
}

}
