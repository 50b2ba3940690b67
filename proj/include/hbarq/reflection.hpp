#pragma once
#include "hbarq/potentials.hpp"
#include "hbarq/units.hpp"
#include <complex>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace hbarq {

//! Complex scattering length, stored in atomic units.
struct ComplexLength {
  std::complex<double> au;

  double re() const { return au.real(); }
  double im() const { return au.imag(); }
  double abs() const { return std::abs(au); }
  std::complex<double> si(const Constants &c) const {
    return au * c.bohr_radius;
  }
};

//! How the absorbing WKB wave is written at z_min.
//!  - plane_wave:  phi'/phi = -i p
//!  - first:       phi'/phi = -i p - p'/(2p)       (phi = p^-1/2 e^{-i S})
//!  - second:      phi'/phi = -i p (1 - B/2) - p'/(2p)
//! The second form cancels the O(B) spurious reflected wave that the first
//! form injects, so `a` converges much faster as z_min decreases.
enum class BoundaryOrder { plane_wave, first, second };

struct SolverConfig {
  double z_min = 0.0;          //!< a.u.; 0 selects it from the badland scan
  double z_max = 0.0;          //!< a.u.; 0 selects 50 x the interaction range
  double wkb_threshold = 1e-5; //!< max |B(z_min)|
  double tol_rel = 1e-6;       //!< target relative accuracy of a
  int max_refinements = 8;     //!< z_max doublings / z_min halvings
  BoundaryOrder boundary = BoundaryOrder::second;

  //! 0 < z_min < z_max (when set), 0 < wkb_threshold <= 0.01,
  //! tol_rel >= 1e-10; throws Error(invalid_argument).
  void validate() const;
  std::string id() const;
  //! Relative tolerance handed to the ODE stepper.
  double ode_tolerance() const;
};

//! (phi, phi') of the absorbing WKB wave at z, normalised to phi = p^-1/2.
struct BoundaryState {
  std::complex<double> value;
  std::complex<double> derivative;
};

//! Error(wkb_invalid) if |B(z_min)| >= wkb_threshold.
BoundaryState boundary_state(const PotentialModel &model, const Constants &c,
                             double rho, double Q, double z_min,
                             double wkb_threshold,
                             BoundaryOrder order = BoundaryOrder::first);

//! Largest z (halving from the potential scale downward) where
//! |B| < wkb_threshold holds at z and at the next two halvings.
double auto_z_min(const PotentialModel &model, const Constants &c, double rho,
                  double Q, double wkb_threshold);
//! 50 x max(sqrt(2 m C4), l_pol, rho).
double auto_z_max(const PotentialModel &model, const Constants &c, double rho,
                  double Q);

//! Extracts a from (phi, phi') at z assuming the exterior potential is the
//! local inverse quartic -C_eff/z^4, C_eff = -V(z) z^4. Reduces to
//! a = z - phi/phi' when C_eff = 0.
std::complex<double> match_quartic_tail(double z, std::complex<double> phi,
                                        std::complex<double> dphi,
                                        double mass, double C_eff);

struct ScatteringDiagnostics {
  double z_min = 0.0;
  double z_max = 0.0;
  int refinements = 0;
  long ode_steps = 0;
  double change_z_max = 0.0; //!< |a(2 z_max) - a(z_max)| / |a|
  double change_z_min = 0.0; //!< |a(z_min/2) - a(z_min)| / |a|
};

//! Zero-energy solution of -1/(2m) phi'' + (V_CP + V_pol) phi = 0 started
//! from the absorbing WKB wave and matched to phi -> z - a at large z.
ComplexLength scattering_length(const PotentialModel &model, const Constants &c,
                                double rho, double Q, const SolverConfig &cfg,
                                ScatteringDiagnostics *diag = nullptr);

//! Integrates from a caller-supplied start state and returns the matched a at
//! z_max (no refinement). Exposed for boundary-invariance checks.
ComplexLength integrate_outward(const PotentialModel &model, const Constants &c,
                                double rho, double Q, double z_min,
                                double z_max, BoundaryState start,
                                double ode_tol, long *steps = nullptr);

//! Scattering length on the bare Casimir-Polder potential (Q = 0); cached.
ComplexLength a_cp(const PotentialModel &model, const Constants &c,
                   const SolverConfig &cfg);

// ---------------------------------------------------------------- profiles --

struct ProfileSample {
  double rho = 0.0;      //!< a.u.
  ComplexLength a;
  bool resolved = true;  //!< gap to the next sample met the jump criterion
};

struct ProfileOptions {
  double rho_lo = 0.0;   //!< a.u.; first nonzero grid point (0 = default)
  double rho_hi = 0.0;   //!< a.u.; a = a_CP beyond it (0 = default)
  int n_initial = 240;   //!< log-spaced points in [rho_lo, rho_hi], plus rho=0
  double jump_tol = 0.02;
  int max_depth = 12;    //!< bisection levels per initial gap
  int threads = 0;       //!< 0 = hardware concurrency
};

//! Interaction length sqrt(2 m alpha_p Q^2) in a.u.
double polarization_length(const Constants &c, double Q);
//! Defaults: rho_lo = 0.01 L, rho_hi = min(20 L, l_g), where
//! L = max(sqrt(2 m alpha_p Q^2), sqrt(2 m C4)).
ProfileOptions default_profile_options(const PotentialModel &model,
                                       const Constants &c, double Q);

//! Table rho -> a(rho) with resonance-resolving refinement.
class RhoProfile {
public:
  RhoProfile() = default;
  RhoProfile(std::vector<ProfileSample> samples, double Q, ComplexLength a_cp,
             std::string model_id, std::string config_id);

  const std::vector<ProfileSample> &samples() const { return samples_; }
  double Q() const { return Q_; }
  ComplexLength a_cp() const { return a_cp_; }
  const std::string &model_id() const { return model_id_; }
  const std::string &config_id() const { return config_id_; }
  double rho_hi() const { return samples_.back().rho; }
  //! Number of gaps left unresolved after refinement.
  int warnings() const;

  //! Monotone cubic (PCHIP) interpolation of Re a and Im a; a_CP beyond
  //! rho_hi. Error(unresolved_resonance) inside an unresolved gap.
  ComplexLength at(double rho) const;
  //! d a / d rho of the same interpolant (zero beyond rho_hi).
  std::complex<double> derivative(double rho) const;
  //! a(rho) - a_CP with the same conventions as at().
  std::complex<double> delta(double rho) const;
  //! Index i of the gap [rho_i, rho_i+1] containing rho, or -1 beyond range.
  int gap_index(double rho) const;
  //! Throws if any unresolved gap intersects [r0, r1].
  void require_resolved(double r0, double r1) const;

  struct Interp;

private:
  std::vector<ProfileSample> samples_;
  double Q_ = 0.0;
  ComplexLength a_cp_{};
  std::string model_id_;
  std::string config_id_;
  std::shared_ptr<const Interp> interp_;
};

RhoProfile scan_profile(const PotentialModel &model, const Constants &c,
                        double Q, const ProfileOptions &opts,
                        const SolverConfig &cfg);

//! Flat profile a(rho) = a_CP (what a Q = 0 scan converges to).
RhoProfile flat_profile(ComplexLength a_cp, double rho_hi);

//! CSV header `rho_au,rho_m,re_a_au,im_a_au,re_a_m,im_a_m,resolved`, one row
//! per sample, 17 significant digits. `comment` lines are written first,
//! each prefixed with "# ".
void write_profile_csv(std::ostream &out, const RhoProfile &profile,
                       const Constants &c,
                       const std::vector<std::string> &comment = {});

} // namespace hbarq
