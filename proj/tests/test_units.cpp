#include "doctest.h"
#include "hbarq/error.hpp"
#include "hbarq/units.hpp"
#include "json.hpp"
#include <cmath>

using namespace hbarq;

TEST_SUITE("units") {

TEST_CASE("round trip through atomic units") {
  const Constants c = Constants::defaults();
  for (Dimension d : {Dimension::length, Dimension::energy, Dimension::time,
                      Dimension::mass, Dimension::velocity,
                      Dimension::frequency})
    for (double x : {1e-30, 3.7e-9, 1.0, 42.0, 6.02e23})
      CHECK(c.from_au(c.to_au(x, d), d) == doctest::Approx(x).epsilon(1e-14));
}

TEST_CASE("length conversions") {
  const Constants c = Constants::defaults();
  CHECK(c.to_au(5.871e-6, Dimension::length) ==
        doctest::Approx(1.109e5).epsilon(1e-3));
  CHECK(c.from_au(519.9, Dimension::length) ==
        doctest::Approx(2.751e-8).epsilon(1e-3));
}

TEST_CASE("derived atomic units agree with their definitions") {
  const Constants c = Constants::defaults();
  // E_h = hbar^2 / (m_e a0^2)
  const double eh = c.hbar * c.hbar / (c.electron_mass * c.bohr_radius *
                                       c.bohr_radius);
  CHECK(eh == doctest::Approx(c.hartree).epsilon(1e-9));
  // velocity unit = alpha c
  CHECK(c.from_au(1.0, Dimension::velocity) ==
        doctest::Approx(2.18769126364e6).epsilon(1e-9));
  CHECK(c.from_au(1.0, Dimension::time) ==
        doctest::Approx(2.4188843265857e-17).epsilon(1e-9));
}

TEST_CASE("antihydrogen mass") {
  const Constants c = Constants::defaults();
  CHECK(c.m_au() == doctest::Approx(1837.15).epsilon(1e-5));
  CHECK(c.M_au() == c.m_au());
  CHECK(c.g_au() == doctest::Approx(9.80665 / 5.14220674763e11).epsilon(1e-9));
}

TEST_CASE("dimension tags") {
  CHECK(parse_dimension("velocity") == Dimension::velocity);
  CHECK(dimension_name(Dimension::energy) == "energy");
  CHECK(si_unit(Dimension::frequency) == "1/s");
  CHECK_THROWS_AS(parse_dimension("furlong"), Error);
}

TEST_CASE("validation rejects unphysical constants") {
  Constants c = Constants::defaults();
  c.g = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = Constants::defaults();
  c.hbar = std::nan("");
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("constants json keeps units and order") {
  const auto j = nlohmann::ordered_json::parse(
      constants_json(Constants::defaults()));
  CHECK(j.begin().key() == "hbar");
  CHECK(j["g"]["value"].get<double>() == 9.80665);
  CHECK(j["bohr_radius"]["unit"].get<std::string>() == "m");
}

}
