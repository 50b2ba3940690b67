#include "doctest.h"
#include "hbarq/error.hpp"
#include "hbarq/gravstates.hpp"
#include "json.hpp"
#include <boost/math/special_functions/airy.hpp>
#include <cmath>

using namespace hbarq;

namespace {

// Ai from its Maclaurin series; adequate for |x| < 8.
double ai_series(double x) {
  const double c1 = 0.355028053887817239, c2 = 0.258819403792806798;
  double f = 1.0, g = x, tf = 1.0, tg = x;
  const double x3 = x * x * x;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3.0 * k - 1) * (3.0 * k));
    tg *= x3 / ((3.0 * k) * (3.0 * k + 1));
    f += tf;
    g += tg;
    if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g)))
      break;
  }
  return c1 * f - c2 * g;
}

double bisect_zero(double lo, double hi) {
  double flo = ai_series(-lo);
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = ai_series(-mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double asymptotic_zero(int n) {
  const double t = 3.0 * M_PI * (4.0 * n - 1.0) / 8.0;
  return std::pow(t, 2.0 / 3.0) *
         (1.0 + 5.0 / 48.0 / (t * t) - 5.0 / 36.0 / std::pow(t, 4));
}

} // namespace

TEST_SUITE("gravstates") {

TEST_CASE("first zeros against a series-and-bisection oracle") {
  const auto z = airy_zeros(3);
  CHECK(z[0] == doctest::Approx(bisect_zero(2.0, 2.6)).epsilon(1e-12));
  CHECK(z[1] == doctest::Approx(bisect_zero(3.8, 4.4)).epsilon(1e-12));
  CHECK(z[2] == doctest::Approx(bisect_zero(5.2, 5.8)).epsilon(1e-12));
  CHECK(std::abs(z[0] - 2.338107410) < 1e-8);
  CHECK(std::abs(z[1] - 4.087949444) < 1e-8);
}

TEST_CASE("zeros agree with boost and with the asymptotic series") {
  const auto z = airy_zeros(200);
  for (int n = 1; n <= 200; ++n) {
    // boost counts zeros of Ai(x) at negative x
    CHECK(z[n - 1] ==
          doctest::Approx(-boost::math::airy_ai_zero<double>(n)).epsilon(1e-12));
    if (n >= 10)
      CHECK(z[n - 1] == doctest::Approx(asymptotic_zero(n)).epsilon(1e-9));
  }
  for (std::size_t i = 1; i < z.size(); ++i)
    CHECK(z[i] > z[i - 1]);
}

TEST_CASE("zero count limits") {
  CHECK(airy_zeros(1).size() == 1);
  CHECK_THROWS_AS(airy_zeros(0), Error);
  CHECK_THROWS_AS(airy_zeros(kMaxAiryZeros + 1), Error);
}

TEST_CASE("gravitational scales") {
  const Constants c = Constants::defaults();
  const auto s = gravitational_scales_si(c);
  const double m = c.m_inertial;
  CHECK(s.l_g == doctest::Approx(std::cbrt(c.hbar * c.hbar / (2 * m * m * c.g)))
                     .epsilon(1e-12));
  CHECK(s.l_g == doctest::Approx(5.871e-6).epsilon(1e-3));
  CHECK(s.tau_g == doctest::Approx(1.0943e-3).epsilon(1e-3));
  CHECK(s.eps_g == doctest::Approx(m * c.g * s.l_g).epsilon(1e-12));
  // CODATA a0, m_e and E_h are mutually consistent only to ~1e-9.
  const auto a = gravitational_scales_au(c);
  CHECK(a.l_g == doctest::Approx(c.to_au(s.l_g, Dimension::length)).epsilon(1e-8));
  CHECK(a.tau_g == doctest::Approx(c.to_au(s.tau_g, Dimension::time)).epsilon(1e-8));
}

TEST_CASE("scaling with g") {
  const Constants c = Constants::defaults();
  const auto a = gravitational_scales(c.m_inertial, c.M_grav, c.g, c.hbar);
  const auto b = gravitational_scales(c.m_inertial, c.M_grav, 8 * c.g, c.hbar);
  CHECK(b.l_g == doctest::Approx(a.l_g / 2).epsilon(1e-12));
  CHECK(b.eps_g == doctest::Approx(a.eps_g * 4).epsilon(1e-12));
  CHECK_THROWS_AS(gravitational_scales(0.0, 1.0, 1.0, 1.0), Error);
}

TEST_CASE("spectrum") {
  const Constants c = Constants::defaults();
  const GravitationalSpectrum sp(c, 10);
  CHECK(sp.size() == 10);
  CHECK(sp.energy_si(1) / c.e_charge * 1e12 == doctest::Approx(1.406).epsilon(1e-3));
  CHECK(sp.omega(2, 1) == doctest::Approx(1.60e3).epsilon(3e-3));
  CHECK(sp.omega(1, 2) == -sp.omega(2, 1));
  CHECK(sp.omega_au(2, 1) ==
        doctest::Approx(c.to_au(sp.omega(2, 1), Dimension::frequency)).epsilon(1e-10));
  CHECK(sp.coupling(1, 2) == doctest::Approx(-0.5715).epsilon(1e-3));
  CHECK_THROWS_AS(sp.coupling(3, 3), Error);
  CHECK_THROWS_AS(sp.lambda(0), Error);
  CHECK_THROWS_AS(sp.lambda(11), Error);
  CHECK_THROWS_AS(GravitationalSpectrum(c, 0), Error);
}

TEST_CASE("spectrum json") {
  const Constants c = Constants::defaults();
  const auto j = nlohmann::ordered_json::parse(
      spectrum_json(GravitationalSpectrum(c, 3), c));
  REQUIRE(j.size() == 3);
  CHECK(j[0].begin().key() == "n");
  CHECK(j[1]["lambda"].get<double>() == doctest::Approx(4.087949444));
  CHECK(j[0]["omega_1n_rad_s"].get<double>() == 0.0);
}

}
