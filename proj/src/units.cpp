#include "hbarq/units.hpp"
#include "hbarq/error.hpp"
#include <cmath>
#include "json.hpp"

namespace hbarq {

namespace {
// CODATA 2018 recommended values.
constexpr double kHbar = 1.054571817e-34;         // exact (h, 2pi)
constexpr double kElectronMass = 9.1093837015e-31; // kg
constexpr double kBohrRadius = 5.29177210903e-11;  // m
constexpr double kHartree = 4.3597447222071e-18;   // J
constexpr double kElementaryCharge = 1.602176634e-19; // C, exact
constexpr double kAtomicMassUnit = 1.66053906660e-27; // kg
// AME2016 atomic mass of 1H in u; CPT puts antihydrogen at the same value.
constexpr double kHydrogenMassU = 1.00782503223;
constexpr double kStandardGravity = 9.80665; // m/s^2, exact by convention
} // namespace

Dimension parse_dimension(std::string_view tag) {
  if (tag == "length") return Dimension::length;
  if (tag == "energy") return Dimension::energy;
  if (tag == "time") return Dimension::time;
  if (tag == "mass") return Dimension::mass;
  if (tag == "velocity") return Dimension::velocity;
  if (tag == "frequency") return Dimension::frequency;
  fail(ErrorCode::invalid_argument,
       "unknown dimension tag '" + std::string(tag) + "'");
}

std::string_view dimension_name(Dimension dim) {
  switch (dim) {
  case Dimension::length: return "length";
  case Dimension::energy: return "energy";
  case Dimension::time: return "time";
  case Dimension::mass: return "mass";
  case Dimension::velocity: return "velocity";
  case Dimension::frequency: return "frequency";
  }
  return "?";
}

std::string_view si_unit(Dimension dim) {
  switch (dim) {
  case Dimension::length: return "m";
  case Dimension::energy: return "J";
  case Dimension::time: return "s";
  case Dimension::mass: return "kg";
  case Dimension::velocity: return "m/s";
  case Dimension::frequency: return "1/s";
  }
  return "?";
}

Constants Constants::defaults() {
  const double m_hbar = kHydrogenMassU * kAtomicMassUnit;
  return Constants{kHbar,   kElectronMass, kBohrRadius,       kHartree,
                   kElementaryCharge, m_hbar, m_hbar, kStandardGravity,
                   4.5};
}

double Constants::g_au() const {
  // atomic unit of acceleration = E_h / (m_e a0)
  return g * electron_mass * bohr_radius / hartree;
}

namespace {
// Size of one atomic unit of `dim`, in SI.
double au_in_si(const Constants &c, Dimension dim) {
  switch (dim) {
  case Dimension::length: return c.bohr_radius;
  case Dimension::energy: return c.hartree;
  case Dimension::time: return c.hbar / c.hartree;
  case Dimension::mass: return c.electron_mass;
  case Dimension::velocity: return c.bohr_radius * c.hartree / c.hbar;
  case Dimension::frequency: return c.hartree / c.hbar;
  }
  fail(ErrorCode::invalid_argument, "unknown dimension");
}
} // namespace

double Constants::to_au(double value_si, Dimension dim) const {
  return value_si / au_in_si(*this, dim);
}

double Constants::from_au(double value_au, Dimension dim) const {
  return value_au * au_in_si(*this, dim);
}

void Constants::validate() const {
  const double fields[] = {hbar,     electron_mass, bohr_radius,
                           hartree,  e_charge,      m_inertial,
                           M_grav,   g,             alpha_p};
  for (double f : fields)
    if (!(std::isfinite(f) && f > 0.0))
      fail(ErrorCode::invalid_argument,
           "physical constants must be finite and positive");
}

std::string constants_json(const Constants &c) {
  // ordered_json keeps insertion order, so the dump is byte-stable.
  using nlohmann::ordered_json;
  auto entry = [](double v, const char *unit) {
    return ordered_json{{"value", v}, {"unit", unit}};
  };
  ordered_json j;
  j["hbar"] = entry(c.hbar, "J s");
  j["electron_mass"] = entry(c.electron_mass, "kg");
  j["bohr_radius"] = entry(c.bohr_radius, "m");
  j["hartree"] = entry(c.hartree, "J");
  j["e_charge"] = entry(c.e_charge, "C");
  j["m_inertial"] = entry(c.m_inertial, "kg");
  j["M_grav"] = entry(c.M_grav, "kg");
  j["g"] = entry(c.g, "m/s^2");
  j["alpha_p"] = entry(c.alpha_p, "a.u. (a0^3)");
  j["m_inertial_au"] = entry(c.m_au(), "m_e");
  j["M_grav_au"] = entry(c.M_au(), "m_e");
  j["g_au"] = entry(c.g_au(), "E_h/(m_e a0)");
  return j.dump(2);
}

} // namespace hbarq
