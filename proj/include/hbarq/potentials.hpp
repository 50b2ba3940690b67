#pragma once
#include "hbarq/units.hpp"
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hbarq {

enum class PotentialKind { pure_quartic, two_scale, tabulated };

//! Whether the linear gravitational term M g z is part of the potential.
enum class Gravity { excluded, included };

//! Value and first two z-derivatives of a potential, atomic units.
struct PotentialDerivs {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

//! Atom-surface (Casimir-Polder) potential V_CP(z). Immutable value type;
//! all lengths and energies in atomic units.
class PotentialModel {
public:
  //! V = -C4 / z^4.
  static PotentialModel pure_quartic(double C4);
  //! V = -C4 / (z^3 (z + C4/C3)): -C3/z^3 near the wall, -C4/z^4 far away.
  static PotentialModel two_scale(double C3, double C4);
  //! Sorted (z, V) samples in a.u.; at least 100 points, z strictly
  //! increasing, V < 0. Smooth interpolation of ln(-V) against ln z inside;
  //! -C4/z^4 matched at the last point beyond the table; a power law
  //! through the first two points below it.
  static PotentialModel tabulated(std::vector<double> z, std::vector<double> v);
  //! Reads the two-column text format: z [m] and V [J] per line, or a.u.
  //! when a line `units: au` precedes the data. `#` starts a comment.
  static PotentialModel load_tabulated(const std::string &path,
                                       const Constants &c);

  PotentialKind kind() const { return kind_; }
  //! Coefficient of the large-z -C4/z^4 tail (matched tail for tables).
  double C4() const { return C4_; }
  //! Short-range -C3/z^3 coefficient; zero for the other kinds.
  double C3() const { return C3_; }
  bool has_analytic_derivatives() const {
    return kind_ != PotentialKind::tabulated;
  }
  //! Smallest z at which the model is defined without extrapolation.
  double z_floor() const;
  //! Short human-readable identifier, stable across runs.
  std::string id() const;

  double operator()(double z) const;
  //! Analytic for closed forms; 5-point central differences (h = z 1e-4)
  //! for tabulated potentials.
  PotentialDerivs derivs(double z) const;

private:
  struct Table;
  PotentialModel(PotentialKind kind, double C3, double C4,
                 std::shared_ptr<const Table> table);

  PotentialKind kind_;
  double C3_;
  double C4_;
  std::shared_ptr<const Table> table_;
};

//! -alpha_p Q^2 / (2 (z^2 + rho^2)^2) in a.u.; Q in units of e.
double v_pol(double z, double rho, double Q, double alpha_p = 4.5);
PotentialDerivs v_pol_derivs(double z, double rho, double Q,
                             double alpha_p = 4.5);

//! V_CP(z) + V_pol(z, rho) [+ M g z] - energy_offset.
double v_total(const PotentialModel &model, const Constants &c, double z,
               double rho, double Q, Gravity gravity = Gravity::excluded,
               double energy_offset = 0.0);
PotentialDerivs v_total_derivs(const PotentialModel &model, const Constants &c,
                               double z, double rho, double Q,
                               Gravity gravity = Gravity::excluded);

//! p = sqrt(2 m (E - V)) in a.u.; Error(forbidden_region) if E < V at z.
double classical_momentum(const PotentialModel &model, const Constants &c,
                          double z, double rho, double Q, double E,
                          Gravity gravity = Gravity::excluded);

//! WKB validity function B = p''/(2p^3) - 3/4 (p'/p^2)^2 (hbar = 1).
//! |B| >= 1 marks a badland where reflected waves are generated.
double badland(const PotentialModel &model, const Constants &c, double z,
               double rho, double Q, double E,
               Gravity gravity = Gravity::excluded);

//! Same quantity from 5-point finite differences of p itself, with step
//! h = z * rel_step. Used for tabulated models and as a cross-check.
double badland_numeric(const PotentialModel &model, const Constants &c,
                       double z, double rho, double Q, double E,
                       Gravity gravity = Gravity::excluded,
                       double rel_step = 1e-4);

//! Maximal intervals [z_a, z_b] within [z_lo, z_hi] where |B| >= 1, found on
//! a log-spaced grid of n_grid points and refined by bisection.
std::vector<std::pair<double, double>>
badland_intervals(const PotentialModel &model, const Constants &c, double rho,
                  double Q, double E, double z_lo, double z_hi,
                  int n_grid = 4000, Gravity gravity = Gravity::excluded);

} // namespace hbarq
