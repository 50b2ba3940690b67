#pragma once
#include <string>
#include <string_view>

namespace hbarq {

//! Dimensions that cross the SI / atomic-unit boundary.
enum class Dimension { length, energy, time, mass, velocity, frequency };

//! Parses "length", "energy", ... ; throws Error(invalid_argument) otherwise.
Dimension parse_dimension(std::string_view tag);
std::string_view dimension_name(Dimension dim);
//! SI unit symbol used in reports ("m", "J", "s", "kg", "m/s", "1/s").
std::string_view si_unit(Dimension dim);

//! Physical constants. SI fields are the source of truth; the *_au() members
//! give the same quantities in Hartree atomic units (hbar = m_e = a0 = 1).
struct Constants {
  double hbar;          // J s
  double electron_mass; // kg
  double bohr_radius;   // m
  double hartree;       // J
  double e_charge;      // C
  double m_inertial;    // kg
  double M_grav;        // kg
  double g;             // m/s^2
  double alpha_p;       // a.u.

  //! CODATA-2018 values, antihydrogen (= hydrogen) mass for both m and M.
  static Constants defaults();

  double m_au() const { return m_inertial / electron_mass; }
  double M_au() const { return M_grav / electron_mass; }
  double g_au() const;

  double to_au(double value_si, Dimension dim) const;
  double from_au(double value_au, Dimension dim) const;

  //! Throws Error(invalid_argument) for non-positive or non-finite fields.
  void validate() const;
};

//! Pretty-printed JSON with units for every constant; stable key order.
std::string constants_json(const Constants &c);

} // namespace hbarq
