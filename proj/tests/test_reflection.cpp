#include "doctest.h"
#include "hbarq/error.hpp"
#include "hbarq/reflection.hpp"
#include <cmath>
#include <random>
#include <sstream>

using namespace hbarq;
using cplx = std::complex<double>;

TEST_SUITE("reflection") {

TEST_CASE("pure quartic scattering length is -i sqrt(2 m C4)") {
  const Constants c = Constants::defaults();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(std::log(5.0), std::log(5e3));
  for (int i = 0; i < 10; ++i) {
    const double C4 = std::exp(u(rng));
    const auto a = scattering_length(PotentialModel::pure_quartic(C4), c, 0.0,
                                     0.0, SolverConfig{});
    const cplx exact(0.0, -std::sqrt(2.0 * c.m_au() * C4));
    CHECK(std::abs(a.au - exact) / std::abs(exact) < 1e-6);
  }
}

TEST_CASE("charge on the axis adds alpha Q^2 / 2 to C4") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::pure_quartic(73.6);
  for (double Q : {5.0, 30.0, 100.0}) {
    const auto a = scattering_length(m, c, 0.0, Q, SolverConfig{});
    const double C = 73.6 + c.alpha_p * Q * Q / 2.0;
    const cplx exact(0.0, -std::sqrt(2.0 * c.m_au() * C));
    CHECK(std::abs(a.au - exact) / std::abs(exact) < 1e-6);
  }
  // about -2776 i for Q = 30
  CHECK(scattering_length(m, c, 0.0, 30.0, SolverConfig{}).im() ==
        doctest::Approx(-2776.8).epsilon(1e-4));
}

TEST_CASE("two-scale a_CP") {
  const Constants c = Constants::defaults();
  const auto a = a_cp(PotentialModel::two_scale(0.25, 73.6), c, SolverConfig{});
  CHECK(a.re() == doctest::Approx(-69.763).epsilon(1e-4));
  CHECK(a.im() == doctest::Approx(-505.726).epsilon(1e-4));
  CHECK(std::abs(a.si(c).imag()) == doctest::Approx(26.76e-9).epsilon(1e-3));
}

TEST_CASE("absorption keeps Im a negative") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  for (double rho : {0.0, 300.0, 1500.0, 6000.0, 4e4})
    CHECK(scattering_length(m, c, rho, 30.0, SolverConfig{}).im() < 0.0);
}

TEST_CASE("overall phase of the start state does not matter") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  const double z0 = 0.02, z1 = 5e4;
  auto s = boundary_state(m, c, 1000.0, 30.0, z0, 1e-5, BoundaryOrder::second);
  const auto a1 = integrate_outward(m, c, 1000.0, 30.0, z0, z1, s, 1e-11);
  const cplx k = std::polar(3.7, 1.1);
  s.value *= k;
  s.derivative *= k;
  const auto a2 = integrate_outward(m, c, 1000.0, 30.0, z0, z1, s, 1e-11);
  CHECK(std::abs(a1.au - a2.au) / std::abs(a1.au) < 1e-9);
}

TEST_CASE("insensitive to the start point") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  SolverConfig a, b;
  a.z_min = 0.02;
  b.z_min = 0.01;
  const auto x = scattering_length(m, c, 2000.0, 30.0, a);
  const auto y = scattering_length(m, c, 2000.0, 30.0, b);
  CHECK(std::abs(x.au - y.au) / std::abs(x.au) < 1e-5);
}

TEST_CASE("boundary forms agree once WKB holds") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  SolverConfig plane, first;
  plane.boundary = BoundaryOrder::plane_wave;
  first.boundary = BoundaryOrder::first;
  plane.wkb_threshold = first.wkb_threshold = 1e-4;
  plane.tol_rel = first.tol_rel = 1e-2;
  const auto x = scattering_length(m, c, 0.0, 0.0, plane);
  const auto y = scattering_length(m, c, 0.0, 0.0, first);
  CHECK(std::abs(x.au - y.au) / std::abs(y.au) < 1e-2);
}

TEST_CASE("start point inside a badland is rejected") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  CHECK_THROWS_AS(boundary_state(m, c, 0.0, 0.0, 50.0, 1e-5), Error);
  try {
    boundary_state(m, c, 0.0, 0.0, 50.0, 1e-5);
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::wkb_invalid);
  }
}

TEST_CASE("tail matching") {
  // free exterior: a = z - phi/phi'
  const cplx phi(3.0, -1.0), dphi(0.5, 0.25);
  CHECK(std::abs(match_quartic_tail(10.0, phi, dphi, 1837.0, 0.0) -
                 (10.0 - phi / dphi)) < 1e-12);
}

TEST_CASE("solver configuration validation") {
  SolverConfig s;
  CHECK_NOTHROW(s.validate());
  s.z_min = 5.0;
  s.z_max = 1.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = SolverConfig{};
  s.wkb_threshold = 0.5;
  CHECK_THROWS_AS(s.validate(), Error);
  s = SolverConfig{};
  s.tol_rel = 1e-14;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("far from the charge the shift follows first-order Born") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  const double Q = 30.0, rho = 6e4;
  const cplx acp = a_cp(m, c, SolverConfig{}).au;
  const cplx da = scattering_length(m, c, rho, Q, SolverConfig{}).au - acp;
  const double k = c.m_au() * c.alpha_p * Q * Q;
  const double re_born = -k * M_PI / (4.0 * rho) + k * acp.real() / (rho * rho);
  const double im_born = k * acp.imag() / (rho * rho);
  CHECK(da.real() == doctest::Approx(re_born).epsilon(0.03));
  CHECK(da.imag() == doctest::Approx(im_born).epsilon(0.1));
}

TEST_CASE("profile without charge is flat") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  ProfileOptions o;
  o.n_initial = 30;
  const auto p = scan_profile(m, c, 0.0, o, SolverConfig{});
  for (const auto &s : p.samples())
    CHECK(s.a.au == p.a_cp().au);
  CHECK(p.delta(123.0) == cplx(0.0));
}

TEST_CASE("profile refinement is deterministic and thread-independent") {
  const Constants c = Constants::defaults();
  const auto m = PotentialModel::two_scale(0.25, 73.6);
  ProfileOptions o = default_profile_options(m, c, 30.0);
  o.n_initial = 60;
  o.threads = 1;
  const auto p1 = scan_profile(m, c, 30.0, o, SolverConfig{});
  o.threads = 3;
  const auto p2 = scan_profile(m, c, 30.0, o, SolverConfig{});
  REQUIRE(p1.samples().size() == p2.samples().size());
  for (std::size_t i = 0; i < p1.samples().size(); ++i) {
    CHECK(p1.samples()[i].rho == p2.samples()[i].rho);
    CHECK(p1.samples()[i].a.au == p2.samples()[i].a.au);
  }
  CHECK(p1.samples().size() > 60);
  CHECK(p1.warnings() == 0);
  // interpolation passes through the samples and returns a_CP outside
  const auto &s = p1.samples()[17];
  CHECK(std::abs(p1.at(s.rho).au - s.a.au) < 1e-9 * std::abs(s.a.au));
  CHECK(p1.at(2.0 * p1.rho_hi()).au == p1.a_cp().au);
  CHECK(p1.at(-s.rho).au == p1.at(s.rho).au);
}

TEST_CASE("unresolved gaps refuse interpolation") {
  std::vector<ProfileSample> s;
  for (int i = 0; i < 6; ++i)
    s.push_back({100.0 * i, {cplx(-10.0 * i, -5.0)}, i != 2});
  const RhoProfile p(s, 30.0, {cplx(0.0, -5.0)}, "m", "c");
  CHECK(p.warnings() == 1);
  CHECK_NOTHROW(p.at(150.0));
  CHECK_NOTHROW(p.require_resolved(0.0, 190.0));
  CHECK_THROWS_AS(p.at(250.0), Error);
  try {
    p.require_resolved(0.0, 1000.0);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::unresolved_resonance);
  }
}

TEST_CASE("profile csv layout") {
  const Constants c = Constants::defaults();
  const auto p = flat_profile({cplx(-70.0, -500.0)}, 1000.0);
  std::ostringstream os;
  write_profile_csv(os, p, c, {"hello"});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# hello");
  std::getline(is, line);
  CHECK(line == "rho_au,rho_m,re_a_au,im_a_au,re_a_m,im_a_m,resolved");
  std::getline(is, line);
  CHECK(line.rfind("0,0,-70,-500,", 0) == 0);
}

}
