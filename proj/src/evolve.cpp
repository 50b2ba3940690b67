#include "hbarq/error.hpp"
#include "hbarq/quench.hpp"
#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

namespace hbarq {

namespace odeint = boost::numeric::odeint;
using cplx = std::complex<double>;

double AmplitudeTrace::norm(std::size_t i_time) const {
  double s = 0.0;
  for (const auto &c : amplitudes.at(i_time))
    s += std::norm(c);
  return s;
}

namespace {

using State = std::vector<double>; // Re C_1, Im C_1, ..., plus integral |Im da|

struct Couplings {
  int n;
  std::vector<double> lambda;
  double tau_g;
  double l_g;

  // M_ik(t) = exp(-i w_ki t) / (lambda_i - lambda_k), w_ki = (lambda_k - lambda_i)/tau_g.
  Eigen::MatrixXcd matrix(double t) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (i != k) {
          const double w = (lambda[k] - lambda[i]) / tau_g;
          m(i, k) = std::exp(cplx(0.0, -w * t)) / (lambda[i] - lambda[k]);
        }
    return m;
  }
};

Eigen::VectorXcd unpack(const State &x, int n) {
  Eigen::VectorXcd c(n);
  for (int i = 0; i < n; ++i)
    c(i) = cplx(x[2 * i], x[2 * i + 1]);
  return c;
}

void pack(const Eigen::VectorXcd &c, State &x) {
  for (int i = 0; i < c.size(); ++i) {
    x[2 * i] = c(i).real();
    x[2 * i + 1] = c(i).imag();
  }
}

} // namespace

AmplitudeTrace evolve_coupled(const QuenchCalculator &calc,
                              const QuenchScenario &s,
                              const EvolveOptions &opts) {
  s.validate();
  if (opts.n_states < 2 || opts.n_states > calc.spectrum().size())
    fail(ErrorCode::invalid_argument,
         "evolve: n_states must lie in [2, spectrum size]");
  if (opts.n_report < 2)
    fail(ErrorCode::invalid_argument, "evolve: n_report must be >= 2");
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0))
    fail(ErrorCode::invalid_argument, "evolve: tolerances must be positive");

  const Constants &c = calc.constants();
  const RhoProfile &prof = calc.profile();
  const int n = opts.n_states;
  const double v = c.to_au(s.v, Dimension::velocity);
  const double d = c.to_au(s.d, Dimension::length);
  const double T = calc.window_half_au(d, v);
  prof.require_resolved(d, prof.rho_hi());

  Couplings cpl{n, {}, calc.spectrum().scales_au().tau_g,
                calc.spectrum().scales_au().l_g};
  for (int k = 1; k <= n; ++k)
    cpl.lambda.push_back(calc.spectrum().lambda(k));
  const double Mg = c.M_au() * c.g_au();

  auto real_if = [&](cplx z) { return opts.force_real_a ? cplx(z.real()) : z; };

  AmplitudeTrace out;
  State x(2 * n + 1, 0.0);
  x[0] = 1.0;

  auto record = [&](double t) {
    out.times.push_back(c.from_au(t, Dimension::time));
    std::vector<cplx> amps(n);
    for (int i = 0; i < n; ++i)
      amps[i] = cplx(x[2 * i], x[2 * i + 1]);
    out.amplitudes.push_back(std::move(amps));
    out.survival.push_back(std::exp(-2.0 * Mg * x[2 * n]));
  };

  if (T == 0.0) {
    for (int i = 0; i < opts.n_report; ++i)
      record(0.0);
    return out;
  }

  // a jumps from a_CP to a(rho_hi) on entering the window and back on leaving.
  const cplx jump = real_if(prof.delta(prof.rho_hi()));
  auto kick = [&](double t, double sign) {
    if (jump == cplx(0.0))
      return;
    const Eigen::MatrixXcd g = (sign * jump / cpl.l_g) * cpl.matrix(t);
    Eigen::VectorXcd cv = unpack(x, n);
    cv = g.exp() * cv;
    pack(cv, x);
  };

  auto rhs = [&](const State &y, State &dy, double t) {
    const cplx adot = real_if(calc.a_dot_au(d, v, t)) / cpl.l_g;
    for (int i = 0; i < n; ++i) {
      cplx acc = 0.0;
      for (int k = 0; k < n; ++k) {
        if (k == i)
          continue;
        const double w = (cpl.lambda[k] - cpl.lambda[i]) / cpl.tau_g;
        acc += std::exp(cplx(0.0, -w * t)) * cplx(y[2 * k], y[2 * k + 1]) /
               (cpl.lambda[i] - cpl.lambda[k]);
      }
      const cplx di = adot * acc;
      dy[2 * i] = di.real();
      dy[2 * i + 1] = di.imag();
    }
    const double im = prof.delta(trajectory_rho(d, v, t)).imag();
    dy[2 * n] = opts.force_real_a ? 0.0 : std::abs(im);
  };

  std::vector<double> report(opts.n_report);
  for (int i = 0; i < opts.n_report; ++i)
    report[i] = -T + 2.0 * T * i / (opts.n_report - 1);
  std::vector<double> stops = report;
  for (const auto &smp : prof.samples())
    if (smp.rho > d && smp.rho < prof.rho_hi()) {
      const double tb = std::sqrt(smp.rho * smp.rho - d * d) / v;
      stops.push_back(tb);
      stops.push_back(-tb);
    }
  stops.push_back(0.0);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end(),
                          [&](double a, double b) {
                            return std::abs(a - b) <= 1e-14 * T;
                          }),
              stops.end());

  auto stepper = odeint::make_controlled(
      opts.abs_tol, opts.rel_tol, odeint::runge_kutta_dopri5<State>());

  kick(-T, +1.0);
  std::size_t next_report = 0;
  for (std::size_t j = 0; j < stops.size(); ++j) {
    if (j > 0) {
      const double t0 = stops[j - 1], t1 = stops[j];
      out.ode_steps += static_cast<long>(odeint::integrate_adaptive(
          stepper, rhs, x, t0, t1, (t1 - t0) / 64.0));
    }
    if (j + 1 == stops.size())
      kick(T, -1.0);
    while (next_report < report.size() &&
           std::abs(report[next_report] - stops[j]) <= 1e-14 * T) {
      record(report[next_report]);
      ++next_report;
    }
  }
  while (next_report < report.size())
    record(report[next_report++]);
  return out;
}

} // namespace hbarq
