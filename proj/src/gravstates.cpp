#include "hbarq/gravstates.hpp"
#include "hbarq/error.hpp"
#include "json.hpp"
#include <boost/math/special_functions/airy.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>

namespace hbarq {

GravitationalScales gravitational_scales(double m, double M, double g,
                                         double hbar) {
  if (!(m > 0.0) || !(M > 0.0) || !(g > 0.0) || !(hbar > 0.0))
    fail(ErrorCode::invalid_argument, "masses, g and hbar must be positive");
  const double l_g = std::cbrt(hbar * hbar / (2.0 * m * M * g));
  const double eps_g = M * g * l_g;
  return {l_g, eps_g, hbar / eps_g};
}

GravitationalScales gravitational_scales_si(const Constants &c) {
  return gravitational_scales(c.m_inertial, c.M_grav, c.g, c.hbar);
}

GravitationalScales gravitational_scales_au(const Constants &c) {
  return gravitational_scales(c.m_au(), c.M_au(), c.g_au(), 1.0);
}

std::vector<double> airy_zeros(int n) {
  if (n < 1 || n > kMaxAiryZeros)
    fail(ErrorCode::invalid_argument,
         "airy_zeros: state count must be in [1, " +
             std::to_string(kMaxAiryZeros) + "]");
  using boost::math::airy_ai;
  auto ai = [](double lambda) { return airy_ai(-lambda); };
  std::vector<double> out;
  out.reserve(n);
  for (int k = 1; k <= n; ++k) {
    // Leading terms of the large-k expansion; already within 1e-4 at k = 1.
    const double t = 3.0 * std::numbers::pi * (4.0 * k - 1.0) / 8.0;
    const double t2 = 1.0 / (t * t);
    const double guess = std::pow(t, 2.0 / 3.0) *
                         (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2);
    const double half_gap = 0.3 * std::numbers::pi / std::sqrt(guess);
    double lo = guess - half_gap, hi = guess + half_gap;
    if (!out.empty())
      lo = std::max(lo, out.back() + 1e-12);
    if (ai(lo) * ai(hi) > 0.0)
      fail(ErrorCode::no_convergence,
           "airy_zeros: failed to bracket zero " + std::to_string(k));
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 200;
    const auto [a, b] =
        boost::math::tools::toms748_solve(ai, lo, hi, tol, iters);
    const double root = 0.5 * (a + b);
    if (std::abs(ai(root)) > 1e-9)
      fail(ErrorCode::no_convergence,
           "airy_zeros: residual too large at zero " + std::to_string(k));
    out.push_back(root);
  }
  return out;
}

GravitationalSpectrum::GravitationalSpectrum(const Constants &c, int n_states)
    : lambdas_(airy_zeros(n_states)), si_(gravitational_scales_si(c)),
      au_(gravitational_scales_au(c)) {}

void GravitationalSpectrum::check_index(int n) const {
  if (n < 1 || n > size())
    fail(ErrorCode::invalid_argument,
         "state index " + std::to_string(n) + " outside [1, " +
             std::to_string(size()) + "]");
}

double GravitationalSpectrum::lambda(int n) const {
  check_index(n);
  return lambdas_[n - 1];
}

double GravitationalSpectrum::omega(int i, int k) const {
  return (lambda(i) - lambda(k)) / si_.tau_g;
}

double GravitationalSpectrum::omega_au(int i, int k) const {
  return (lambda(i) - lambda(k)) / au_.tau_g;
}

double GravitationalSpectrum::coupling(int i, int k) const {
  if (i == k)
    fail(ErrorCode::domain,
         "coupling(i, i): the diagonal momentum matrix element vanishes and "
         "is excluded");
  return 1.0 / (lambda(i) - lambda(k));
}

std::string spectrum_json(const GravitationalSpectrum &s, const Constants &c) {
  using nlohmann::ordered_json;
  ordered_json states = ordered_json::array();
  for (int n = 1; n <= s.size(); ++n) {
    ordered_json row;
    row["n"] = n;
    row["lambda"] = s.lambda(n);
    row["E_peV"] = s.energy_si(n) / c.e_charge * 1e12;
    row["omega_1n_rad_s"] = s.omega(1, n);
    states.push_back(std::move(row));
  }
  return states.dump(2);
}

} // namespace hbarq
