#pragma once
#include "hbarq/gravstates.hpp"
#include "hbarq/reflection.hpp"
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hbarq {

//! Flight of an atom along a straight planar trajectory over a charged
//! mirror. SI units throughout.
struct QuenchScenario {
  double Q = 0.0;     //!< charge of each centre, units of e
  double v = 1.0;     //!< planar velocity, m/s
  double d = 0.0;     //!< impact parameter for single-centre quantities, m
  double sigma = 0.0; //!< planar density of charged centres, 1/m^2
  double L = 0.0;     //!< mirror length, m
  int N = 1;          //!< centres passed along the trajectory

  //! v > 0, sigma >= 0, L >= 0, Q >= 0, N >= 0.
  void validate() const;
};

//! Applicability of the short-range / sudden-passage treatment.
struct ValidityFlags {
  double l_pol_over_l_g = 0.0; //!< sqrt(m alpha_p Q^2)/hbar over l_g
  double tau_over_tau_g = 0.0; //!< passage time over hbar/eps_g
  bool ok() const { return l_pol_over_l_g <= 0.1 && tau_over_tau_g <= 0.1; }
  std::vector<std::string> warnings() const;
};

//! All widths in J, lengths in m.
struct QuenchSummary {
  double d_tr = 0.0;
  double d_in = 0.0;
  double Gamma_t = 0.0;
  double Gamma_d = 0.0;
  double Gamma_CP = 0.0;
  double Gamma_in = 0.0;
  double R = 0.0;       //!< decay probability during the flight over L
  double ratio = 0.0;   //!< d_tr / d_in
  double n_eff = 0.0;   //!< gravitational states populated by one passage
  double sigma_c = 0.0; //!< density at which Gamma_d = Gamma_CP, 1/m^2
  bool d_in_from_cartesian = false; //!< Im(a - a_CP) changes sign
  ValidityFlags validity;
};

//! Amplitude of the perturbative transition 1 -> k. `value` uses
//! exp(-i w_1k t_n) for the charge phases; `alt_phase` the exp(-i w_k1 t_n)
//! variant. Their moduli agree for one centre.
struct TransitionAmplitude {
  std::complex<double> value;
  std::complex<double> alt_phase;
  double omega_tau = 0.0; //!< |w_1k| times the passage time
};

struct DecayProbability {
  double p = 0.0;
  bool exact_form = false; //!< 1 - exp(-x) used because x >= 0.1
};

//! sqrt(d^2 + v^2 (t - t0)^2).
double trajectory_rho(double d, double v, double t, double t0 = 0.0);

//! Observables of quenching by surface charges, evaluated from a rho-profile
//! of the scattering length and the gravitational spectrum.
class QuenchCalculator {
public:
  QuenchCalculator(const Constants &c, RhoProfile profile,
                   GravitationalSpectrum spectrum);

  const RhoProfile &profile() const { return profile_; }
  const GravitationalSpectrum &spectrum() const { return spectrum_; }
  const Constants &constants() const { return c_; }

  //! a(rho(t)) for a flyby at impact parameter d (m), speed v (m/s), t in s.
  ComplexLength a_of_t(double d, double v, double t) const;
  //! d a / d t along the same flyby, a.u. length per a.u. time.
  std::complex<double> a_dot_au(double d_au, double v_au, double t_au) const;

  //! Half-duration (a.u.) of the window where a differs from a_CP.
  double window_half_au(double d_au, double v_au) const;

  //! integral of (a(t) - a_CP) exp(-i w t) dt over the flyby, a.u.
  std::complex<double> delta_a_fourier_au(double d_au, double v_au,
                                          double omega_au) const;
  //! integral of |Im(a(t) - a_CP)| dt, a.u.
  double abs_im_delta_a_time_integral_au(double d_au, double v_au) const;

  //! First-order amplitude of 1 -> k; t0_list holds the closest-approach
  //! instants (s) of the centres passed, each at impact parameter s.d.
  TransitionAmplitude transition_amplitude(int k, const QuenchScenario &s,
                                           std::span<const double> t0_list) const;
  //! Low-frequency limit: the Fourier factor replaced by its value at w = 0.
  TransitionAmplitude
  transition_amplitude_low_frequency(int k, const QuenchScenario &s,
                                     std::span<const double> t0_list) const;
  //! |amplitude|^2 times exp(-2 (Mg/hbar) sum_n integral |Im(a - a_CP)| dt).
  double transition_probability(int k, const QuenchScenario &s,
                                std::span<const double> t0_list) const;
  //! exp(-2 (Mg/hbar) N integral |Im(a - a_CP)| dt) at impact parameter s.d.
  double survival_factor(const QuenchScenario &s) const;

  //! Probability of a transition to any excited state: the sum over final
  //! states taken as an integral over w with density tau_g. N incoherent
  //! centres at impact parameter s.d, survival factor included.
  double total_transition_probability(const QuenchScenario &s) const;
  //! Same with N = 1 and the survival factor set to one.
  double p_of_d(const QuenchScenario &s, double d) const;
  //! Extra decay probability from one passage at impact parameter d.
  DecayProbability p_in_of_d(const QuenchScenario &s, double d) const;

  //! Radial moments over the profile (a.u.):
  //!   sq = integral |a - a_CP|^2 r dr,  im = integral Im(a - a_CP) r dr.
  double radial_sq_moment_au() const { return radial_sq_; }
  double radial_im_moment_au() const { return radial_im_; }
  //! True when Im(a - a_CP) keeps one sign over the profile.
  bool im_delta_sign_consistent() const { return sign_consistent_; }

  //! Effective transition radius via the radial moment.
  double d_tr(const QuenchScenario &s) const;
  //! integral P(d) dd evaluated literally as a double integral over (d, x).
  double d_tr_cartesian(const QuenchScenario &s) const;
  //! Effective decay radius; radial moment when the sign is consistent,
  //! otherwise the Cartesian integral.
  double d_in(const QuenchScenario &s) const;
  double d_in_polar(const QuenchScenario &s) const;
  double d_in_cartesian(const QuenchScenario &s) const;

  //! hbar d_tr sigma v.
  double gamma_t(const QuenchScenario &s) const;
  //! 2 M^2 g^2 sigma pi^2 tau_g / hbar * integral |a - a_CP|^2 r dr.
  double gamma_t_radial(const QuenchScenario &s) const;
  //! hbar d_in sigma v.
  double gamma_d(const QuenchScenario &s) const;
  //! 4 M g pi sigma |integral Im(a - a_CP) r dr|.
  double gamma_d_radial(const QuenchScenario &s) const;
  //! 2 M g |Im a_CP|.
  double gamma_cp() const;
  //! 1 - exp(-d_in L sigma - 2 M g |Im a_CP| L / (hbar v)).
  double survival(const QuenchScenario &s) const;
  //! pi integral |da|^2 r dr / (2 l_g |integral Im da r dr|).
  double quench_ratio() const;
  //! pi tau_g / tau with tau = sqrt(m alpha_p Q^2) / (v hbar).
  double n_effective(const QuenchScenario &s) const;
  //! Density at which Gamma_d equals Gamma_CP.
  double sigma_critical() const;
  ValidityFlags validity(const QuenchScenario &s) const;

  QuenchSummary summary(const QuenchScenario &s) const;

private:
  double Mg_au() const { return c_.M_au() * c_.g_au(); }
  double v_au(const QuenchScenario &s) const;
  //! Sorted times t >= 0 at which rho(t) crosses a profile sample.
  std::vector<double> time_breaks_au(double d_au, double v_au) const;
  //! integral over x in (-X, X) of f(sqrt(d^2 + x^2)), breaking at samples.
  template <class F> auto chord_integral(double d_au, F &&f) const;
  template <class F> double cartesian_d_integral(F &&p_of_d_au) const;

  Constants c_;
  RhoProfile profile_;
  GravitationalSpectrum spectrum_;
  double radial_sq_ = 0.0;
  double radial_im_ = 0.0;
  bool sign_consistent_ = true;
};

//! Monte-Carlo estimate of <|sum_n exp(-i w t_n)|^2> for n_centres instants
//! drawn uniformly from [0, span]; tends to n_centres when w span >> 1.
double mean_phase_sum_sq(int n_centres, double omega, double span,
                         int n_samples, std::uint64_t seed);

// ------------------------------------------------------- coupled channels --

struct EvolveOptions {
  int n_states = 10;
  int n_report = 101;
  bool force_real_a = false; //!< drop Im a (norm-conservation check)
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
};

//! Amplitudes C_k(t), k = 1..n_states, on a uniform reporting grid spanning
//! the flyby window. `survival` is exp(-2 (Mg/hbar) integral |Im(a - a_CP)|)
//! accumulated up to each reporting time.
struct AmplitudeTrace {
  std::vector<double> times; //!< s, closest approach at t = 0
  std::vector<std::vector<std::complex<double>>> amplitudes; //!< [time][k-1]
  std::vector<double> survival;
  long ode_steps = 0;

  double norm(std::size_t i_time) const;
  //! norm(i) times the survival factor; at most one.
  double weighted_norm(std::size_t i_time) const {
    return norm(i_time) * survival.at(i_time);
  }
  double probability(std::size_t i_time, int k) const {
    return std::norm(amplitudes[i_time][k - 1]);
  }
};

//! Non-perturbative evolution of the truncated coupled-amplitude system
//! started from C_k = delta_1k, single centre at impact parameter s.d.
AmplitudeTrace evolve_coupled(const QuenchCalculator &calc,
                              const QuenchScenario &s,
                              const EvolveOptions &opts);

} // namespace hbarq
