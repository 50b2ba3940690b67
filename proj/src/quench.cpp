#include "hbarq/quench.hpp"
#include "hbarq/error.hpp"
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace hbarq {

using cplx = std::complex<double>;
using Gauss = boost::math::quadrature::gauss<double, 10>;
constexpr double kPi = std::numbers::pi;

void QuenchScenario::validate() const {
  if (!(v > 0.0) || !std::isfinite(v))
    fail(ErrorCode::invalid_argument, "scenario: v must be positive");
  if (!(sigma >= 0.0) || !(L >= 0.0) || !(Q >= 0.0) || !(d >= 0.0) || N < 0)
    fail(ErrorCode::invalid_argument,
         "scenario: Q, d, sigma, L and N must be non-negative");
}

std::vector<std::string> ValidityFlags::warnings() const {
  std::vector<std::string> w;
  std::ostringstream os;
  os.precision(3);
  if (l_pol_over_l_g > 0.1) {
    os << "polarization range is not small against l_g (ratio "
       << l_pol_over_l_g << ")";
    w.push_back(os.str());
    os.str("");
  }
  if (tau_over_tau_g > 0.1) {
    os << "passage time is not small against tau_g (ratio " << tau_over_tau_g
       << ")";
    w.push_back(os.str());
  }
  return w;
}

double trajectory_rho(double d, double v, double t, double t0) {
  return std::hypot(d, v * (t - t0));
}

QuenchCalculator::QuenchCalculator(const Constants &c, RhoProfile profile,
                                   GravitationalSpectrum spectrum)
    : c_(c), profile_(std::move(profile)), spectrum_(std::move(spectrum)) {
  c_.validate();
  const auto &smp = profile_.samples();
  double im_min = 0.0, im_max = 0.0;
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const double r0 = smp[i].rho, r1 = smp[i + 1].rho;
    radial_sq_ += Gauss::integrate(
        [&](double r) { return std::norm(profile_.delta(r)) * r; }, r0, r1);
    radial_im_ += Gauss::integrate(
        [&](double r) { return profile_.delta(r).imag() * r; }, r0, r1);
    const double im = smp[i].a.im() - profile_.a_cp().im();
    im_min = std::min(im_min, im);
    im_max = std::max(im_max, im);
  }
  const double tol = 1e-9 * std::max(1.0, profile_.a_cp().abs());
  sign_consistent_ = im_min > -tol || im_max < tol;
}

double QuenchCalculator::v_au(const QuenchScenario &s) const {
  s.validate();
  if (std::abs(s.Q - profile_.Q()) > 1e-12 * std::max(1.0, s.Q))
    fail(ErrorCode::invalid_argument,
         "scenario charge does not match the profile charge");
  return c_.to_au(s.v, Dimension::velocity);
}

ComplexLength QuenchCalculator::a_of_t(double d, double v, double t) const {
  const double rho = trajectory_rho(c_.to_au(d, Dimension::length),
                                    c_.to_au(v, Dimension::velocity),
                                    c_.to_au(t, Dimension::time));
  return profile_.at(rho);
}

cplx QuenchCalculator::a_dot_au(double d_au, double v_au, double t_au) const {
  const double rho = trajectory_rho(d_au, v_au, t_au);
  if (rho == 0.0)
    return 0.0;
  return profile_.derivative(rho) * (v_au * v_au * t_au / rho);
}

double QuenchCalculator::window_half_au(double d_au, double v_au) const {
  const double r = profile_.rho_hi();
  return d_au >= r ? 0.0 : std::sqrt(r * r - d_au * d_au) / v_au;
}

std::vector<double> QuenchCalculator::time_breaks_au(double d_au,
                                                     double v_au) const {
  std::vector<double> t{0.0};
  for (const auto &s : profile_.samples())
    if (s.rho > d_au)
      t.push_back(std::sqrt(s.rho * s.rho - d_au * d_au) / v_au);
  return t;
}

cplx QuenchCalculator::delta_a_fourier_au(double d_au, double v_au,
                                          double omega_au) const {
  // The integrand vanishes outside the window, so the finite integral is the
  // infinite-window limit; a(t) even in t leaves the cosine transform.
  const auto t = time_breaks_au(d_au, v_au);
  profile_.require_resolved(d_au, profile_.rho_hi());
  cplx sum = 0.0;
  for (std::size_t j = 0; j + 1 < t.size(); ++j)
    sum += Gauss::integrate(
        [&](double tt) {
          return profile_.delta(trajectory_rho(d_au, v_au, tt)) *
                 std::cos(omega_au * tt);
        },
        t[j], t[j + 1]);
  return 2.0 * sum;
}

double QuenchCalculator::abs_im_delta_a_time_integral_au(double d_au,
                                                         double v_au) const {
  const auto t = time_breaks_au(d_au, v_au);
  profile_.require_resolved(d_au, profile_.rho_hi());
  double sum = 0.0;
  for (std::size_t j = 0; j + 1 < t.size(); ++j)
    sum += Gauss::integrate(
        [&](double tt) {
          return std::abs(profile_.delta(trajectory_rho(d_au, v_au, tt)).imag());
        },
        t[j], t[j + 1]);
  return 2.0 * sum;
}

namespace {
std::vector<double> centres_au(const Constants &c,
                               std::span<const double> t0_list) {
  std::vector<double> t;
  if (t0_list.empty())
    t.push_back(0.0);
  for (double t0 : t0_list)
    t.push_back(c.to_au(t0, Dimension::time));
  return t;
}
} // namespace

TransitionAmplitude
QuenchCalculator::transition_amplitude(int k, const QuenchScenario &s,
                                       std::span<const double> t0_list) const {
  if (k == 1)
    fail(ErrorCode::invalid_argument, "transition_amplitude needs k != 1");
  const double v = v_au(s);
  const double d = c_.to_au(s.d, Dimension::length);
  const double w = spectrum_.omega_au(1, k);
  const cplx F = delta_a_fourier_au(d, v, w);
  cplx phases = 0.0, phases_alt = 0.0;
  for (double t : centres_au(c_, t0_list)) {
    phases += std::exp(cplx(0.0, -w * t));
    phases_alt += std::exp(cplx(0.0, w * t));
  }
  const cplx pre = cplx(0.0, -Mg_au()) * F;
  const double tau = std::sqrt(c_.m_au() * c_.alpha_p) * s.Q / v;
  return {pre * phases, pre * phases_alt, std::abs(w) * tau};
}

TransitionAmplitude QuenchCalculator::transition_amplitude_low_frequency(
    int k, const QuenchScenario &s, std::span<const double> t0_list) const {
  if (k == 1)
    fail(ErrorCode::invalid_argument, "transition_amplitude needs k != 1");
  const double v = v_au(s);
  const double d = c_.to_au(s.d, Dimension::length);
  const double w = spectrum_.omega_au(1, k);
  const cplx F0 = delta_a_fourier_au(d, v, 0.0);
  cplx phases = 0.0, phases_alt = 0.0;
  for (double t : centres_au(c_, t0_list)) {
    phases += std::exp(cplx(0.0, -w * t));
    phases_alt += std::exp(cplx(0.0, w * t));
  }
  const cplx pre = cplx(0.0, -Mg_au()) * F0;
  const double tau = std::sqrt(c_.m_au() * c_.alpha_p) * s.Q / v;
  return {pre * phases, pre * phases_alt, std::abs(w) * tau};
}

double QuenchCalculator::survival_factor(const QuenchScenario &s) const {
  const double v = v_au(s);
  const double d = c_.to_au(s.d, Dimension::length);
  return std::exp(-2.0 * Mg_au() * s.N *
                  abs_im_delta_a_time_integral_au(d, v));
}

double QuenchCalculator::transition_probability(
    int k, const QuenchScenario &s, std::span<const double> t0_list) const {
  const TransitionAmplitude amp = transition_amplitude(k, s, t0_list);
  QuenchScenario per_centre = s;
  per_centre.N = static_cast<int>(std::max<std::size_t>(t0_list.size(), 1));
  return std::norm(amp.value) * survival_factor(per_centre);
}

template <class F> auto QuenchCalculator::chord_integral(double d_au, F &&f) const {
  using R = decltype(f(0.0));
  R sum{};
  const auto &smp = profile_.samples();
  double x_prev = 0.0;
  for (const auto &sample : smp) {
    if (sample.rho <= d_au)
      continue;
    const double x = std::sqrt(sample.rho * sample.rho - d_au * d_au);
    sum += Gauss::integrate([&](double xx) { return f(std::hypot(d_au, xx)); },
                            x_prev, x);
    x_prev = x;
  }
  return R(2.0) * sum;
}

double QuenchCalculator::total_transition_probability(
    const QuenchScenario &s) const {
  const double v = v_au(s);
  const double d = c_.to_au(s.d, Dimension::length);
  profile_.require_resolved(d, profile_.rho_hi());
  const double sq_dx =
      chord_integral(d, [&](double r) { return std::norm(profile_.delta(r)); });
  const double Mg = Mg_au();
  const double tau_g = spectrum_.scales_au().tau_g;
  return Mg * Mg * s.N * kPi * tau_g * (sq_dx / v) * survival_factor(s);
}

double QuenchCalculator::p_of_d(const QuenchScenario &s, double d) const {
  const double v = v_au(s);
  const double d_au = c_.to_au(std::abs(d), Dimension::length);
  profile_.require_resolved(d_au, profile_.rho_hi());
  const double sq_dx = chord_integral(
      d_au, [&](double r) { return std::norm(profile_.delta(r)); });
  const double Mg = Mg_au();
  return Mg * Mg * kPi * spectrum_.scales_au().tau_g * sq_dx / v;
}

DecayProbability QuenchCalculator::p_in_of_d(const QuenchScenario &s,
                                             double d) const {
  const double v = v_au(s);
  const double d_au = c_.to_au(std::abs(d), Dimension::length);
  profile_.require_resolved(d_au, profile_.rho_hi());
  const double im_dx =
      chord_integral(d_au, [&](double r) { return profile_.delta(r).imag(); });
  // Im taken of the integral; the modulus after integration.
  const double x = 2.0 * Mg_au() / v * std::abs(im_dx);
  if (x < 0.1)
    return {x, false};
  return {-std::expm1(-x), true};
}

template <class F>
double QuenchCalculator::cartesian_d_integral(F &&p_of_d_au) const {
  // Between samples P(d) is analytic except for a square-root branch at the
  // right end, where d meets the next sample; d = r1 - w^2 removes it.
  const auto &smp = profile_.samples();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < smp.size(); ++i) {
    const double r1 = smp[i + 1].rho;
    const double wmax = std::sqrt(r1 - smp[i].rho);
    sum += Gauss::integrate(
        [&](double w) { return p_of_d_au(r1 - w * w) * 2.0 * w; }, 0.0, wmax);
  }
  return 2.0 * sum; // P is even in d
}

double QuenchCalculator::d_tr(const QuenchScenario &s) const {
  const double v = v_au(s);
  profile_.require_resolved(0.0, profile_.rho_hi());
  const double Mg = Mg_au();
  const double d_au = Mg * Mg * kPi * spectrum_.scales_au().tau_g / v * 2.0 *
                      kPi * radial_sq_;
  return c_.from_au(d_au, Dimension::length);
}

double QuenchCalculator::d_tr_cartesian(const QuenchScenario &s) const {
  const double v = v_au(s);
  profile_.require_resolved(0.0, profile_.rho_hi());
  const double Mg = Mg_au();
  const double pref = Mg * Mg * kPi * spectrum_.scales_au().tau_g / v;
  const double d_au = cartesian_d_integral([&](double d) {
    return pref *
           chord_integral(d, [&](double r) { return std::norm(profile_.delta(r)); });
  });
  return c_.from_au(d_au, Dimension::length);
}

double QuenchCalculator::d_in_polar(const QuenchScenario &s) const {
  const double v = v_au(s);
  profile_.require_resolved(0.0, profile_.rho_hi());
  const double d_au = 2.0 * Mg_au() / v * 2.0 * kPi * std::abs(radial_im_);
  return c_.from_au(d_au, Dimension::length);
}

double QuenchCalculator::d_in_cartesian(const QuenchScenario &s) const {
  const double v = v_au(s);
  profile_.require_resolved(0.0, profile_.rho_hi());
  const double pref = 2.0 * Mg_au() / v;
  const double d_au = cartesian_d_integral([&](double d) {
    return pref * std::abs(chord_integral(
                      d, [&](double r) { return profile_.delta(r).imag(); }));
  });
  return c_.from_au(d_au, Dimension::length);
}

double QuenchCalculator::d_in(const QuenchScenario &s) const {
  return sign_consistent_ ? d_in_polar(s) : d_in_cartesian(s);
}

double QuenchCalculator::gamma_t(const QuenchScenario &s) const {
  return c_.hbar * d_tr(s) * s.sigma * s.v;
}

double QuenchCalculator::gamma_t_radial(const QuenchScenario &s) const {
  v_au(s);
  profile_.require_resolved(0.0, profile_.rho_hi());
  const double sigma_au = s.sigma * c_.bohr_radius * c_.bohr_radius;
  const double Mg = Mg_au();
  const double g_au = 2.0 * Mg * Mg * sigma_au * kPi * kPi *
                      spectrum_.scales_au().tau_g * radial_sq_;
  return c_.from_au(g_au, Dimension::energy);
}

double QuenchCalculator::gamma_d(const QuenchScenario &s) const {
  return c_.hbar * d_in(s) * s.sigma * s.v;
}

double QuenchCalculator::gamma_d_radial(const QuenchScenario &s) const {
  v_au(s);
  profile_.require_resolved(0.0, profile_.rho_hi());
  const double sigma_au = s.sigma * c_.bohr_radius * c_.bohr_radius;
  return c_.from_au(4.0 * Mg_au() * kPi * sigma_au * std::abs(radial_im_),
                    Dimension::energy);
}

double QuenchCalculator::gamma_cp() const {
  return c_.from_au(2.0 * Mg_au() * std::abs(profile_.a_cp().im()),
                    Dimension::energy);
}

double QuenchCalculator::survival(const QuenchScenario &s) const {
  const double exponent =
      d_in(s) * s.L * s.sigma + gamma_cp() * s.L / (c_.hbar * s.v);
  return -std::expm1(-exponent);
}

double QuenchCalculator::quench_ratio() const {
  if (!(std::abs(radial_im_) > 0.0))
    fail(ErrorCode::domain, "quench ratio undefined: d_in vanishes");
  return kPi * radial_sq_ /
         (2.0 * spectrum_.scales_au().l_g * std::abs(radial_im_));
}

double QuenchCalculator::n_effective(const QuenchScenario &s) const {
  const double v = v_au(s);
  const double tau = std::sqrt(c_.m_au() * c_.alpha_p) * s.Q / v;
  if (!(tau > 0.0))
    fail(ErrorCode::domain, "n_effective needs a positive passage time (Q > 0)");
  return kPi * spectrum_.scales_au().tau_g / tau;
}

double QuenchCalculator::sigma_critical() const {
  if (!(std::abs(radial_im_) > 0.0))
    return std::numeric_limits<double>::infinity();
  const double sigma_au =
      std::abs(profile_.a_cp().im()) / (2.0 * kPi * std::abs(radial_im_));
  return sigma_au / (c_.bohr_radius * c_.bohr_radius);
}

ValidityFlags QuenchCalculator::validity(const QuenchScenario &s) const {
  const double v = v_au(s);
  const double l_pol = std::sqrt(c_.m_au() * c_.alpha_p) * s.Q;
  const auto &g = spectrum_.scales_au();
  return {l_pol / g.l_g, l_pol / v / g.tau_g};
}

QuenchSummary QuenchCalculator::summary(const QuenchScenario &s) const {
  QuenchSummary out;
  out.validity = validity(s);
  out.d_tr = d_tr(s);
  out.d_in = d_in(s);
  out.d_in_from_cartesian = !sign_consistent_;
  out.Gamma_t = c_.hbar * out.d_tr * s.sigma * s.v;
  out.Gamma_d = c_.hbar * out.d_in * s.sigma * s.v;
  out.Gamma_CP = gamma_cp();
  out.Gamma_in = out.Gamma_d + out.Gamma_CP;
  out.R = -std::expm1(-(out.d_in * s.L * s.sigma +
                        out.Gamma_CP * s.L / (c_.hbar * s.v)));
  out.ratio = out.d_in > 0.0 ? out.d_tr / out.d_in : 0.0;
  out.n_eff = s.Q > 0.0 ? n_effective(s) : 0.0;
  out.sigma_c = sigma_critical();
  return out;
}

double mean_phase_sum_sq(int n_centres, double omega, double span,
                         int n_samples, std::uint64_t seed) {
  if (n_centres < 0 || n_samples < 1 || !(span > 0.0))
    fail(ErrorCode::invalid_argument, "mean_phase_sum_sq: bad arguments");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, span);
  double acc = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    cplx sum = 0.0;
    for (int n = 0; n < n_centres; ++n)
      sum += std::exp(cplx(0.0, -omega * uniform(rng)));
    acc += std::norm(sum);
  }
  return acc / n_samples;
}

} // namespace hbarq
