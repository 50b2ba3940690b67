#pragma once
#include "hbarq/units.hpp"
#include <string>
#include <vector>

namespace hbarq {

//! l_g = (hbar^2 / (2 m M g))^(1/3), eps_g = M g l_g, tau_g = hbar / eps_g.
//! Units follow the inputs (SI in, SI out; a.u. in, a.u. out).
struct GravitationalScales {
  double l_g;
  double eps_g;
  double tau_g;
};

GravitationalScales gravitational_scales(double m, double M, double g,
                                         double hbar);
GravitationalScales gravitational_scales_si(const Constants &c);
GravitationalScales gravitational_scales_au(const Constants &c);

//! Largest state count airy_zeros() accepts.
inline constexpr int kMaxAiryZeros = 100000;

//! First n values lambda with Ai(-lambda) = 0, increasing.
std::vector<double> airy_zeros(int n);

//! Spectrum of an atom bouncing on an ideal mirror. States are numbered
//! from 1 as in E_n = lambda_n eps_g.
class GravitationalSpectrum {
public:
  GravitationalSpectrum(const Constants &c, int n_states);

  int size() const { return static_cast<int>(lambdas_.size()); }
  double lambda(int n) const;
  const std::vector<double> &lambdas() const { return lambdas_; }
  //! SI scales.
  const GravitationalScales &scales() const { return si_; }
  //! Atomic-unit scales.
  const GravitationalScales &scales_au() const { return au_; }
  double energy_si(int n) const { return lambda(n) * si_.eps_g; }
  double energy_au(int n) const { return lambda(n) * au_.eps_g; }

  //! omega_ik = (lambda_i - lambda_k) eps_g / hbar, rad/s.
  double omega(int i, int k) const;
  double omega_au(int i, int k) const;
  //! Momentum coupling 1/(lambda_i - lambda_k); Error(domain) for i == k.
  double coupling(int i, int k) const;

private:
  void check_index(int n) const;
  std::vector<double> lambdas_;
  GravitationalScales si_;
  GravitationalScales au_;
};

//! JSON array of {n, lambda, E_peV, omega_1n_rad_s}, stable key order.
std::string spectrum_json(const GravitationalSpectrum &s, const Constants &c);

} // namespace hbarq
