#include "hbarq/reflection.hpp"
#include "hbarq/error.hpp"
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace hbarq {

namespace odeint = boost::numeric::odeint;
using cplx = std::complex<double>;

void SolverConfig::validate() const {
  auto bad = [](const std::string &what) {
    fail(ErrorCode::invalid_argument, "solver config: " + what);
  };
  if (z_min < 0.0 || z_max < 0.0 || !std::isfinite(z_min) ||
      !std::isfinite(z_max))
    bad("z_min and z_max must be finite and non-negative");
  if (z_min > 0.0 && z_max > 0.0 && !(z_min < z_max))
    bad("z_min must be smaller than z_max");
  if (!(wkb_threshold > 0.0) || wkb_threshold > 0.01)
    bad("wkb_threshold must lie in (0, 0.01]");
  if (!(tol_rel >= 1e-10) || !std::isfinite(tol_rel))
    bad("tol_rel must be >= 1e-10");
  if (max_refinements < 0)
    bad("max_refinements must be non-negative");
}

std::string SolverConfig::id() const {
  std::ostringstream os;
  os.precision(10);
  os << "z_min=" << z_min << ";z_max=" << z_max << ";wkb=" << wkb_threshold
     << ";tol=" << tol_rel << ";ref=" << max_refinements
     << ";bc=" << static_cast<int>(boundary);
  return os.str();
}

double SolverConfig::ode_tolerance() const {
  return std::clamp(1e-4 * tol_rel, 1e-13, 1e-9);
}

BoundaryState boundary_state(const PotentialModel &model, const Constants &c,
                             double rho, double Q, double z_min,
                             double wkb_threshold, BoundaryOrder order) {
  const double B = badland(model, c, z_min, rho, Q, 0.0);
  if (!(std::abs(B) < wkb_threshold)) {
    std::ostringstream os;
    os.precision(6);
    os << "WKB invalid at z_min = " << z_min << " a.u. (|B| = " << std::abs(B)
       << " >= " << wkb_threshold << "); decrease z_min";
    fail(ErrorCode::wkb_invalid, os.str());
  }
  const PotentialDerivs d = v_total_derivs(model, c, z_min, rho, Q);
  const double m = c.m_au();
  const double p = std::sqrt(-2.0 * m * d.v);
  const double dp = -m * d.d1 / p;
  const cplx phi = 1.0 / std::sqrt(p);
  cplx log_deriv;
  switch (order) {
  case BoundaryOrder::plane_wave:
    log_deriv = cplx(0.0, -p);
    break;
  case BoundaryOrder::first:
    log_deriv = cplx(-dp / (2.0 * p), -p);
    break;
  case BoundaryOrder::second:
    log_deriv = cplx(-dp / (2.0 * p), -p * (1.0 - 0.5 * B));
    break;
  }
  return {phi, phi * log_deriv};
}

double polarization_length(const Constants &c, double Q) {
  return std::sqrt(2.0 * c.m_au() * c.alpha_p * Q * Q);
}

double auto_z_min(const PotentialModel &model, const Constants &c, double rho,
                  double Q, double wkb_threshold) {
  const double z_start = 0.05 * std::sqrt(2.0 * c.m_au() * model.C4());
  auto ok = [&](double z) {
    return std::abs(badland(model, c, z, rho, Q, 0.0)) < wkb_threshold;
  };
  for (double z = z_start; z > 1e-7 * z_start; z *= 0.5)
    if (ok(z) && ok(0.5 * z) && ok(0.25 * z))
      return z;
  fail(ErrorCode::wkb_invalid,
       "no WKB-valid starting point found near the wall");
}

double auto_z_max(const PotentialModel &model, const Constants &c, double rho,
                  double Q) {
  const double range =
      std::max({std::sqrt(2.0 * c.m_au() * model.C4()),
                polarization_length(c, Q), rho});
  return 50.0 * range;
}

cplx match_quartic_tail(double z, cplx phi, cplx dphi, double mass,
                        double C_eff) {
  // Exterior solution phi = z (A e^{ib/z} + B e^{-ib/z}), b = sqrt(2 m C_eff),
  // whose large-z form is (A + B)(z - a) with a = -i b (A - B)/(A + B).
  if (!(C_eff > 0.0))
    return z - phi / dphi;
  const double b = std::sqrt(2.0 * mass * C_eff);
  const cplx ib(0.0, b / z);
  const cplx ep = std::exp(ib), em = std::exp(-ib);
  const cplx nA = em * (phi * (1.0 + ib) - z * dphi);
  const cplx nB = ep * (z * dphi - phi * (1.0 - ib));
  return cplx(0.0, -b) * (nA - nB) / (nA + nB);
}

namespace {

using State = std::array<cplx, 2>; // (phi, z phi') as functions of s = ln z

//! Marches the zero-energy equation outward and records the tail-matched
//! scattering length at each of the increasing report points.
std::vector<cplx> march(const PotentialModel &model, const Constants &c,
                        double rho, double Q, double z_min,
                        const std::vector<double> &z_report,
                        BoundaryState start, double ode_tol, long *steps) {
  const double two_m = 2.0 * c.m_au();
  auto rhs = [&](const State &x, State &dxds, double s) {
    const double z = std::exp(s);
    const double w = z * z * two_m * v_total(model, c, z, rho, Q);
    dxds[0] = x[1];
    dxds[1] = x[1] + w * x[0];
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(
      1e-14, ode_tol);

  State x{start.value, z_min * start.derivative};
  double s = std::log(z_min);
  // Initial step: a small fraction of the local wavelength.
  const double p0 = std::abs(start.derivative / start.value);
  double ds = std::min(0.05, 0.1 / (p0 * z_min + 1.0));
  long n_steps = 0;
  std::vector<cplx> out;
  out.reserve(z_report.size());

  for (double z_target : z_report) {
    const double s_end = std::log(z_target);
    while (s < s_end) {
      double dt = std::min(ds, s_end - s);
      const bool clipped = dt < ds;
      int rejects = 0;
      while (stepper.try_step(rhs, x, s, dt) != odeint::success) {
        if (++rejects > 200 || dt < 1e-14)
          fail(ErrorCode::no_convergence,
               "step size collapse in scattering-length integration");
      }
      if (!clipped || dt > ds)
        ds = dt;
      ++n_steps;
      // Normalisation is arbitrary; keep |phi| + |z phi'| of order one.
      const double scale = std::abs(x[0]) + std::abs(x[1]);
      if (scale > 1e50 || scale < 1e-50) {
        x[0] /= scale;
        x[1] /= scale;
      }
    }
    const double z = std::exp(s);
    const double C_eff = -v_total(model, c, z, rho, Q) * z * z * z * z;
    out.push_back(match_quartic_tail(z, x[0], x[1] / z, c.m_au(), C_eff));
  }
  if (steps)
    *steps += n_steps;
  return out;
}

} // namespace

ComplexLength integrate_outward(const PotentialModel &model, const Constants &c,
                                double rho, double Q, double z_min,
                                double z_max, BoundaryState start,
                                double ode_tol, long *steps) {
  if (!(z_min > 0.0) || !(z_max > z_min))
    fail(ErrorCode::invalid_argument, "integrate_outward: need 0 < z_min < z_max");
  return {march(model, c, rho, Q, z_min, {z_max}, start, ode_tol, steps)[0]};
}

ComplexLength scattering_length(const PotentialModel &model, const Constants &c,
                                double rho, double Q, const SolverConfig &cfg,
                                ScatteringDiagnostics *diag) {
  cfg.validate();
  if (!(rho >= 0.0) || !(Q >= 0.0))
    fail(ErrorCode::invalid_argument, "rho and Q must be non-negative");
  double z_min = cfg.z_min > 0.0
                     ? cfg.z_min
                     : auto_z_min(model, c, rho, Q, cfg.wkb_threshold);
  double z_max = cfg.z_max > 0.0 ? cfg.z_max : auto_z_max(model, c, rho, Q);
  if (!(z_min < z_max))
    fail(ErrorCode::invalid_argument, "z_min must be smaller than z_max");
  const double tol = cfg.ode_tolerance();
  long steps = 0;

  auto solve = [&](double zmin, double zmax) {
    const BoundaryState bs = boundary_state(model, c, rho, Q, zmin,
                                            cfg.wkb_threshold, cfg.boundary);
    return march(model, c, rho, Q, zmin, {zmax, 2.0 * zmax, 4.0 * zmax}, bs,
                 tol, &steps);
  };

  ScatteringDiagnostics d;
  cplx result;
  for (int refinement = 0;; ++refinement) {
    const auto coarse = solve(z_min, z_max);
    const auto fine = solve(0.5 * z_min, z_max);
    // The tail-matching error decays geometrically under z_max doubling, at
    // a rate set by the leading deviation from -C/z^4 (1/z^2 for the
    // retardation crossover, 1/z^3 for the polarization tail). Extrapolate
    // with the observed rate when it is in that range.
    const cplx d1 = fine[1] - fine[0];
    const cplx d2 = fine[2] - fine[1];
    const double rate = std::abs(d1) / std::abs(d2);
    result = fine[2];
    if (std::isfinite(rate) && rate > 2.5 && rate < 12.0)
      result += d2 / (rate - 1.0);
    const double scale = std::abs(fine[2]);
    d.change_z_max = std::abs(d2) / scale;
    d.change_z_min = std::abs(fine[2] - coarse[2]) / scale;
    d.z_min = 0.5 * z_min;
    d.z_max = 4.0 * z_max;
    d.refinements = refinement;
    if (d.change_z_max < cfg.tol_rel && d.change_z_min < cfg.tol_rel)
      break;
    if (refinement >= cfg.max_refinements) {
      std::ostringstream os;
      os.precision(3);
      os << "scattering length not converged after " << refinement
         << " refinements (rho = " << rho << ", Q = " << Q
         << "; z_max change " << d.change_z_max << ", z_min change "
         << d.change_z_min << ")";
      fail(ErrorCode::no_convergence, os.str());
    }
    if (d.change_z_max >= cfg.tol_rel)
      z_max *= 2.0;
    if (d.change_z_min >= cfg.tol_rel)
      z_min *= 0.5;
  }
  d.ode_steps = steps;
  if (diag)
    *diag = d;
  if (result.imag() > cfg.tol_rel * std::abs(result)) {
    std::ostringstream os;
    os.precision(6);
    os << "Im a = " << result.imag()
       << " > 0 for an absorbing boundary (rho = " << rho << ", Q = " << Q
       << ")";
    fail(ErrorCode::sign_violation, os.str());
  }
  return {result};
}

ComplexLength a_cp(const PotentialModel &model, const Constants &c,
                   const SolverConfig &cfg) {
  static std::mutex mutex;
  static std::map<std::string, ComplexLength> cache;
  std::ostringstream key;
  key.precision(17);
  key << model.id() << '|' << cfg.id() << '|' << c.m_inertial << '|'
      << c.alpha_p;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key.str()); it != cache.end())
      return it->second;
  }
  const ComplexLength a = scattering_length(model, c, 0.0, 0.0, cfg);
  std::lock_guard lock(mutex);
  cache.emplace(key.str(), a);
  return a;
}

} // namespace hbarq
