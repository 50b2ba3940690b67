#include "doctest.h"
#include "hbarq/error.hpp"
#include "hbarq/gravstates.hpp"
#include "hbarq/potentials.hpp"
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace hbarq;

namespace {

// Independent WKB validity function: p from a locally written potential,
// derivatives of p by Richardson-extrapolated central differences.
double oracle_badland(double C3, double C4, double alpha, double m, double z,
                      double rho, double Q, double E) {
  auto V = [&](double x) {
    const double r2 = x * x + rho * rho;
    const double cp = C3 > 0.0 ? -C4 / (x * x * x * (x + C4 / C3))
                               : -C4 / (x * x * x * x);
    return cp - alpha * Q * Q / (2.0 * r2 * r2);
  };
  auto p = [&](double x) { return std::sqrt(2.0 * m * (E - V(x))); };
  auto d1 = [&](double h) { return (p(z + h) - p(z - h)) / (2 * h); };
  auto d2 = [&](double h) {
    return (p(z + h) - 2 * p(z) + p(z - h)) / (h * h);
  };
  const double h = 1e-3 * z;
  const double p1 = (4 * d1(h / 2) - d1(h)) / 3;
  const double p2 = (4 * d2(h / 2) - d2(h)) / 3;
  const double pz = p(z);
  return p2 / (2 * pz * pz * pz) - 0.75 * std::pow(p1 / (pz * pz), 2);
}

} // namespace

TEST_SUITE("potentials") {

TEST_CASE("closed forms") {
  const auto q = PotentialModel::pure_quartic(73.6);
  CHECK(q(2.0) == doctest::Approx(-73.6 / 16.0));
  const auto t = PotentialModel::two_scale(0.25, 73.6);
  // -C3/z^3 near the wall, -C4/z^4 far away
  CHECK(t(1e-4) * std::pow(1e-4, 3) == doctest::Approx(-0.25).epsilon(1e-5));
  CHECK(t(1e6) * std::pow(1e6, 4) == doctest::Approx(-73.6).epsilon(1e-3));
  const auto d = t.derivs(50.0);
  const double h = 1e-4;
  CHECK(d.d1 == doctest::Approx((t(50 + h) - t(50 - h)) / (2 * h)).epsilon(1e-7));
  CHECK(d.d2 ==
        doctest::Approx((t(50 + h) - 2 * t(50) + t(50 - h)) / (h * h)).epsilon(1e-4));
}

TEST_CASE("invalid coefficients") {
  CHECK_THROWS_AS(PotentialModel::pure_quartic(0.0), Error);
  CHECK_THROWS_AS(PotentialModel::two_scale(-1.0, 73.6), Error);
}

TEST_CASE("polarization potential") {
  CHECK(v_pol(0.0, 100.0, 30.0) == doctest::Approx(-2.025e-5));
  CHECK(v_pol(60.0, 80.0, 30.0) == doctest::Approx(-2.025e-5));
  CHECK(v_pol(5.0, 7.0, 0.0) == 0.0);
  const auto d = v_pol_derivs(300.0, 200.0, 30.0);
  const double h = 1e-3;
  CHECK(d.d1 == doctest::Approx((v_pol(300 + h, 200, 30) -
                                 v_pol(300 - h, 200, 30)) / (2 * h))
                    .epsilon(1e-7));
}

TEST_CASE("total potential adds gravity and offsets") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  const double z = 1e5, rho = 2000, Q = 30;
  const double base = v_total(m, c, z, rho, Q);
  CHECK(base == doctest::Approx(m(z) + v_pol(z, rho, Q)));
  CHECK(v_total(m, c, z, rho, Q, Gravity::included, 1e-14) ==
        doctest::Approx(base + c.M_au() * c.g_au() * z - 1e-14));
}

TEST_CASE("forbidden region") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  const double E1 = 2.338107410 * gravitational_scales_au(c).eps_g;
  CHECK(classical_momentum(m, c, 1e5, 0, 0, E1, Gravity::included) > 0.0);
  CHECK_THROWS_AS(classical_momentum(m, c, 1e6, 0, 0, E1, Gravity::included),
                  Error);
}

TEST_CASE("pure quartic at zero energy is exactly semiclassical") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::pure_quartic(73.6);
  for (double z : {0.1, 3.0, 700.0, 5e4})
    CHECK(std::abs(badland(m, c, z, 0.0, 0.0, 0.0)) < 1e-10);
  // polarization at rho = 0 is also inverse quartic
  for (double z : {1.0, 1e3})
    CHECK(std::abs(badland(m, c, z, 0.0, 30.0, 0.0)) < 1e-10);
}

TEST_CASE("analytic badland against the finite-difference oracle") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  const double E1 = 2.338107410 * gravitational_scales_au(c).eps_g;
  for (double rho : {1000.0, 2000.0})
    for (double z : {5.0, 300.0, 900.0, 4000.0, 2e4}) {
      const double oracle =
          oracle_badland(0.25, 73.6, c.alpha_p, c.m_au(), z, rho, 30.0, E1);
      CHECK(badland(m, c, z, rho, 30.0, E1) ==
            doctest::Approx(oracle).epsilon(1e-5));
      CHECK(badland_numeric(m, c, z, rho, 30.0, E1) ==
            doctest::Approx(oracle).epsilon(1e-4));
    }
}

TEST_CASE("numeric badland is stable under step halving") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  const double E = 1e-14;
  const double a = badland_numeric(m, c, 800.0, 2000.0, 30.0, E, Gravity::excluded, 1e-3);
  const double b = badland_numeric(m, c, 800.0, 2000.0, 30.0, E, Gravity::excluded, 5e-4);
  CHECK(a == doctest::Approx(b).epsilon(1e-6));
}

TEST_CASE("badland geometry at Q = 30") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  const double E1 = 2.338107410 * gravitational_scales_au(c).eps_g;
  const auto two = badland_intervals(m, c, 2000.0, 30.0, E1, 1.0, 1e6);
  REQUIRE(two.size() == 2);
  CHECK(two[0].second < two[1].first);
  // the gap between them is WKB-valid
  const double mid = std::sqrt(two[0].second * two[1].first);
  CHECK(std::abs(badland(m, c, mid, 2000.0, 30.0, E1)) < 1.0);
  CHECK(badland_intervals(m, c, 1000.0, 30.0, E1, 1.0, 1e6).size() == 1);
  CHECK(badland_intervals(m, c, 2000.0, 0.0, E1, 1.0, 1e6).size() == 1);
  // edges sit on |B| = 1
  CHECK(std::abs(badland(m, c, two[1].first, 2000.0, 30.0, E1)) ==
        doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tabulated potential reproduces its source") {
  const auto src = PotentialModel::two_scale(0.25, 73.6);
  std::vector<double> z, v;
  for (int i = 0; i < 400; ++i) {
    z.push_back(1e-2 * std::pow(1e8, i / 399.0));
    v.push_back(src(z.back()));
  }
  const auto tab = PotentialModel::tabulated(z, v);
  CHECK(tab.kind() == PotentialKind::tabulated);
  CHECK_FALSE(tab.has_analytic_derivatives());
  for (double x : {0.05, 1.3, 77.0, 4.2e3, 9e5})
    CHECK(tab(x) == doctest::Approx(src(x)).epsilon(1e-6));
  // tail coefficient read at the last point, z = 1e6
  CHECK(tab.C4() == doctest::Approx(73.6 / (1 + 73.6 / 0.25 / 1e6)).epsilon(1e-6));
  CHECK(tab(1e7) == doctest::Approx(src(1e7)).epsilon(1e-6));
  CHECK(tab.derivs(40.0).d1 == doctest::Approx(src.derivs(40.0).d1).epsilon(1e-5));
}

TEST_CASE("tabulated potential from file") {
  const Constants c = Constants::defaults();
  const auto src = PotentialModel::two_scale(0.25, 73.6);
  const auto path = std::filesystem::temp_directory_path() / "hbarq_table.txt";
  {
    std::ofstream f(path);
    f << "# two-scale reference\nunits: au\n";
    char line[96];
    for (int i = 0; i < 200; ++i) {
      const double x = 1e-2 * std::pow(1e8, i / 199.0);
      std::snprintf(line, sizeof line, "%.17g %.17g\n", x, src(x));
      f << line;
    }
  }
  const auto tab = PotentialModel::load_tabulated(path.string(), c);
  CHECK(tab(10.0) == doctest::Approx(src(10.0)).epsilon(1e-5));
  CHECK(tab.id() != src.id());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(PotentialModel::load_tabulated("/nonexistent/x", c), Error);
}

TEST_CASE("table validation") {
  CHECK_THROWS_AS(PotentialModel::tabulated({1, 2}, {-1}), Error);
  std::vector<double> z, v;
  for (int i = 1; i <= 120; ++i) {
    z.push_back(i);
    v.push_back(-1.0 / (i * i));
  }
  CHECK_NOTHROW(PotentialModel::tabulated(z, v));
  std::swap(z[10], z[11]);
  CHECK_THROWS_AS(PotentialModel::tabulated(z, v), Error);
  std::swap(z[10], z[11]);
  v[5] = 0.1;
  CHECK_THROWS_AS(PotentialModel::tabulated(z, v), Error);
}

}
