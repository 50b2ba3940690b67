#include "hbarq/hbarq.h"
#include "hbarq/error.hpp"
#include "hbarq/gravstates.hpp"
#include "hbarq/potentials.hpp"
#include "hbarq/quench.hpp"
#include "hbarq/reflection.hpp"
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <sstream>
#include <string>

using namespace hbarq;

struct hbarq_model {
  PotentialModel m;
};
struct hbarq_profile {
  RhoProfile p;
};
struct hbarq_spectrum {
  GravitationalSpectrum s;
  Constants c;
};
struct hbarq_quench {
  QuenchCalculator q;
};
struct hbarq_trace {
  AmplitudeTrace t;
};

namespace {

thread_local std::string g_last_error;

hbarq_status set_error(hbarq_status st, const char *what) {
  g_last_error = what;
  return st;
}

template <class F> hbarq_status guard(F &&f) noexcept {
  try {
    g_last_error.clear();
    f();
    return HBARQ_OK;
  } catch (const Error &e) {
    return set_error(static_cast<hbarq_status>(e.code()), e.what());
  } catch (const std::bad_alloc &) {
    return set_error(HBARQ_E_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return set_error(HBARQ_E_INTERNAL, e.what());
  } catch (...) {
    return set_error(HBARQ_E_INTERNAL, "unknown exception");
  }
}

void need(const void *p, const char *name) {
  if (p == nullptr)
    fail(ErrorCode::invalid_argument, std::string(name) + " is null");
}

Constants to_cpp(const hbarq_constants *c) {
  need(c, "constants");
  Constants k{c->hbar,     c->electron_mass, c->bohr_radius,
              c->hartree,  c->e_charge,      c->m_inertial,
              c->M_grav,   c->g,             c->alpha_p};
  k.validate();
  return k;
}

SolverConfig to_cpp(const hbarq_solver_config *c) {
  if (c == nullptr)
    return {};
  SolverConfig s;
  s.z_min = c->z_min_au;
  s.z_max = c->z_max_au;
  s.wkb_threshold = c->wkb_threshold;
  s.tol_rel = c->tol_rel;
  s.max_refinements = c->max_refinements;
  switch (c->boundary) {
  case HBARQ_BOUNDARY_PLANE_WAVE: s.boundary = BoundaryOrder::plane_wave; break;
  case HBARQ_BOUNDARY_FIRST: s.boundary = BoundaryOrder::first; break;
  case HBARQ_BOUNDARY_SECOND: s.boundary = BoundaryOrder::second; break;
  default: fail(ErrorCode::invalid_argument, "unknown boundary order");
  }
  return s;
}

QuenchScenario to_cpp(const hbarq_scenario *s) {
  need(s, "scenario");
  QuenchScenario q;
  q.Q = s->Q;
  q.v = s->v;
  q.d = s->d;
  q.sigma = s->sigma;
  q.L = s->L;
  q.N = s->N;
  return q;
}

void copy_text(const std::string &text, char *buf, size_t cap, size_t *needed) {
  if (needed != nullptr)
    *needed = text.size();
  if (buf == nullptr || cap <= text.size())
    fail(ErrorCode::buffer_too_small,
         "output buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
}

void put_complex(std::complex<double> z, double *re, double *im) {
  if (re != nullptr)
    *re = z.real();
  if (im != nullptr)
    *im = z.imag();
}

} // namespace

extern "C" {

const char *hbarq_version(void) { return HBARQ_VERSION_STRING; }

const char *hbarq_last_error(void) { return g_last_error.c_str(); }

const char *hbarq_status_name(hbarq_status status) {
  switch (status) {
  case HBARQ_OK: return "ok";
  case HBARQ_E_INVALID_ARGUMENT: return "invalid_argument";
  case HBARQ_E_DOMAIN: return "domain";
  case HBARQ_E_FORBIDDEN_REGION: return "forbidden_region";
  case HBARQ_E_WKB_INVALID: return "wkb_invalid";
  case HBARQ_E_NO_CONVERGENCE: return "no_convergence";
  case HBARQ_E_SIGN_VIOLATION: return "sign_violation";
  case HBARQ_E_UNRESOLVED_RESONANCE: return "unresolved_resonance";
  case HBARQ_E_IO: return "io";
  case HBARQ_E_BUFFER_TOO_SMALL: return "buffer_too_small";
  case HBARQ_E_INTERNAL: return "internal";
  }
  return "unknown";
}

void hbarq_constants_default(hbarq_constants *out) {
  if (out == nullptr)
    return;
  const Constants c = Constants::defaults();
  *out = {c.hbar,       c.electron_mass, c.bohr_radius, c.hartree, c.e_charge,
          c.m_inertial, c.M_grav,        c.g,           c.alpha_p};
}

hbarq_status hbarq_constants_validate(const hbarq_constants *c) {
  return guard([&] { to_cpp(c); });
}

hbarq_status hbarq_to_au(const hbarq_constants *c, const char *dimension,
                         double value_si, double *out_au) {
  return guard([&] {
    need(dimension, "dimension");
    need(out_au, "out");
    *out_au = to_cpp(c).to_au(value_si, parse_dimension(dimension));
  });
}

hbarq_status hbarq_from_au(const hbarq_constants *c, const char *dimension,
                           double value_au, double *out_si) {
  return guard([&] {
    need(dimension, "dimension");
    need(out_si, "out");
    *out_si = to_cpp(c).from_au(value_au, parse_dimension(dimension));
  });
}

hbarq_status hbarq_constants_json(const hbarq_constants *c, char *buf,
                                  size_t cap, size_t *needed) {
  return guard([&] { copy_text(constants_json(to_cpp(c)), buf, cap, needed); });
}

hbarq_status hbarq_model_pure_quartic(double C4, hbarq_model **out) {
  return guard([&] {
    need(out, "out");
    *out = new hbarq_model{PotentialModel::pure_quartic(C4)};
  });
}

hbarq_status hbarq_model_two_scale(double C3, double C4, hbarq_model **out) {
  return guard([&] {
    need(out, "out");
    *out = new hbarq_model{PotentialModel::two_scale(C3, C4)};
  });
}

hbarq_status hbarq_model_load_tabulated(const char *path,
                                        const hbarq_constants *c,
                                        hbarq_model **out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new hbarq_model{PotentialModel::load_tabulated(path, to_cpp(c))};
  });
}

void hbarq_model_free(hbarq_model *model) { delete model; }

hbarq_status hbarq_model_c4(const hbarq_model *model, double *out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = model->m.C4();
  });
}

hbarq_status hbarq_model_id(const hbarq_model *model, char *buf, size_t cap,
                            size_t *needed) {
  return guard([&] {
    need(model, "model");
    copy_text(model->m.id(), buf, cap, needed);
  });
}

hbarq_status hbarq_potential_au(const hbarq_model *model,
                                const hbarq_constants *c, double z_au,
                                double rho_au, double Q, int with_gravity,
                                double energy_offset_au, double *out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = v_total(model->m, to_cpp(c), z_au, rho_au, Q,
                   with_gravity ? Gravity::included : Gravity::excluded,
                   energy_offset_au);
  });
}

hbarq_status hbarq_badland(const hbarq_model *model, const hbarq_constants *c,
                           double z_au, double rho_au, double Q,
                           double energy_au, double *out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = badland(model->m, to_cpp(c), z_au, rho_au, Q, energy_au);
  });
}

hbarq_status hbarq_badland_numeric(const hbarq_model *model,
                                   const hbarq_constants *c, double z_au,
                                   double rho_au, double Q, double energy_au,
                                   double rel_step, double *out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    *out = badland_numeric(model->m, to_cpp(c), z_au, rho_au, Q, energy_au,
                           Gravity::excluded, rel_step);
  });
}

hbarq_status hbarq_badland_intervals(const hbarq_model *model,
                                     const hbarq_constants *c, double rho_au,
                                     double Q, double energy_au,
                                     double z_lo_au, double z_hi_au,
                                     int n_grid, double *pairs,
                                     size_t cap_pairs, size_t *count) {
  return guard([&] {
    need(model, "model");
    need(count, "count");
    const auto iv = badland_intervals(model->m, to_cpp(c), rho_au, Q,
                                      energy_au, z_lo_au, z_hi_au, n_grid);
    *count = iv.size();
    if (cap_pairs > 0)
      need(pairs, "pairs");
    for (size_t i = 0; i < iv.size() && i < cap_pairs; ++i) {
      pairs[2 * i] = iv[i].first;
      pairs[2 * i + 1] = iv[i].second;
    }
  });
}

void hbarq_solver_config_default(hbarq_solver_config *out) {
  if (out == nullptr)
    return;
  const SolverConfig s;
  *out = {s.z_min, s.z_max, s.wkb_threshold, s.tol_rel, s.max_refinements,
          HBARQ_BOUNDARY_SECOND};
}

hbarq_status hbarq_scattering_length(const hbarq_model *model,
                                     const hbarq_constants *c, double rho_au,
                                     double Q, const hbarq_solver_config *cfg,
                                     double *re_au, double *im_au) {
  return guard([&] {
    need(model, "model");
    const auto a =
        scattering_length(model->m, to_cpp(c), rho_au, Q, to_cpp(cfg));
    put_complex(a.au, re_au, im_au);
  });
}

hbarq_status hbarq_a_cp(const hbarq_model *model, const hbarq_constants *c,
                        const hbarq_solver_config *cfg, double *re_au,
                        double *im_au) {
  return guard([&] {
    need(model, "model");
    put_complex(a_cp(model->m, to_cpp(c), to_cpp(cfg)).au, re_au, im_au);
  });
}

hbarq_status hbarq_profile_options_default(const hbarq_model *model,
                                           const hbarq_constants *c, double Q,
                                           hbarq_profile_options *out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    const auto o = default_profile_options(model->m, to_cpp(c), Q);
    *out = {o.rho_lo, o.rho_hi, o.n_initial, o.jump_tol, o.max_depth,
            o.threads};
  });
}

hbarq_status hbarq_profile_scan(const hbarq_model *model,
                                const hbarq_constants *c, double Q,
                                const hbarq_profile_options *opts,
                                const hbarq_solver_config *cfg,
                                hbarq_profile **out) {
  return guard([&] {
    need(model, "model");
    need(out, "out");
    ProfileOptions o;
    if (opts != nullptr) {
      o.rho_lo = opts->rho_lo_au;
      o.rho_hi = opts->rho_hi_au;
      o.n_initial = opts->n_initial;
      o.jump_tol = opts->jump_tol;
      o.max_depth = opts->max_depth;
      o.threads = opts->threads;
    }
    *out = new hbarq_profile{
        scan_profile(model->m, to_cpp(c), Q, o, to_cpp(cfg))};
  });
}

void hbarq_profile_free(hbarq_profile *profile) { delete profile; }

size_t hbarq_profile_size(const hbarq_profile *profile) {
  return profile == nullptr ? 0 : profile->p.samples().size();
}

int hbarq_profile_warnings(const hbarq_profile *profile) {
  return profile == nullptr ? 0 : profile->p.warnings();
}

hbarq_status hbarq_profile_sample(const hbarq_profile *profile, size_t i,
                                  double *rho_au, double *re_au, double *im_au,
                                  int *resolved) {
  return guard([&] {
    need(profile, "profile");
    if (i >= profile->p.samples().size())
      fail(ErrorCode::invalid_argument, "sample index out of range");
    const auto &s = profile->p.samples()[i];
    if (rho_au != nullptr)
      *rho_au = s.rho;
    put_complex(s.a.au, re_au, im_au);
    if (resolved != nullptr)
      *resolved = s.resolved ? 1 : 0;
  });
}

hbarq_status hbarq_profile_at(const hbarq_profile *profile, double rho_au,
                              double *re_au, double *im_au) {
  return guard([&] {
    need(profile, "profile");
    put_complex(profile->p.at(rho_au).au, re_au, im_au);
  });
}

hbarq_status hbarq_profile_a_cp(const hbarq_profile *profile, double *re_au,
                                double *im_au) {
  return guard([&] {
    need(profile, "profile");
    put_complex(profile->p.a_cp().au, re_au, im_au);
  });
}

hbarq_status hbarq_profile_write_csv(const hbarq_profile *profile,
                                     const hbarq_constants *c,
                                     const char *path, const char *comment) {
  return guard([&] {
    need(profile, "profile");
    need(path, "path");
    std::vector<std::string> lines;
    if (comment != nullptr) {
      std::istringstream is(comment);
      for (std::string line; std::getline(is, line);)
        lines.push_back(line);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
      fail(ErrorCode::io, std::string("cannot open ") + path);
    write_profile_csv(f, profile->p, to_cpp(c), lines);
    if (!f)
      fail(ErrorCode::io, std::string("write failed: ") + path);
  });
}

hbarq_status hbarq_gravitational_scales(const hbarq_constants *c,
                                        hbarq_scales *si, hbarq_scales *au) {
  return guard([&] {
    const Constants k = to_cpp(c);
    if (si != nullptr) {
      const auto g = gravitational_scales_si(k);
      *si = {g.l_g, g.eps_g, g.tau_g};
    }
    if (au != nullptr) {
      const auto g = gravitational_scales_au(k);
      *au = {g.l_g, g.eps_g, g.tau_g};
    }
  });
}

hbarq_status hbarq_airy_zeros(int n, double *out) {
  return guard([&] {
    const auto z = airy_zeros(n);
    if (!z.empty())
      need(out, "out");
    std::copy(z.begin(), z.end(), out);
  });
}

hbarq_status hbarq_spectrum_new(const hbarq_constants *c, int n_states,
                                hbarq_spectrum **out) {
  return guard([&] {
    need(out, "out");
    const Constants k = to_cpp(c);
    *out = new hbarq_spectrum{GravitationalSpectrum(k, n_states), k};
  });
}

void hbarq_spectrum_free(hbarq_spectrum *spectrum) { delete spectrum; }

int hbarq_spectrum_size(const hbarq_spectrum *spectrum) {
  return spectrum == nullptr ? 0 : spectrum->s.size();
}

hbarq_status hbarq_spectrum_lambda(const hbarq_spectrum *spectrum, int n,
                                   double *out) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(out, "out");
    *out = spectrum->s.lambda(n);
  });
}

hbarq_status hbarq_spectrum_energy(const hbarq_spectrum *spectrum, int n,
                                   double *out_joule) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(out_joule, "out");
    *out_joule = spectrum->s.energy_si(n);
  });
}

hbarq_status hbarq_spectrum_omega(const hbarq_spectrum *spectrum, int i, int k,
                                  double *out_rad_s) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(out_rad_s, "out");
    *out_rad_s = spectrum->s.omega(i, k);
  });
}

hbarq_status hbarq_spectrum_coupling(const hbarq_spectrum *spectrum, int i,
                                     int k, double *out) {
  return guard([&] {
    need(spectrum, "spectrum");
    need(out, "out");
    *out = spectrum->s.coupling(i, k);
  });
}

hbarq_status hbarq_spectrum_json(const hbarq_spectrum *spectrum, char *buf,
                                 size_t cap, size_t *needed) {
  return guard([&] {
    need(spectrum, "spectrum");
    copy_text(spectrum_json(spectrum->s, spectrum->c), buf, cap,
              needed);
  });
}

void hbarq_scenario_default(hbarq_scenario *out) {
  if (out == nullptr)
    return;
  const QuenchScenario s;
  *out = {s.Q, s.v, s.d, s.sigma, s.L, s.N};
}

hbarq_status hbarq_quench_new(const hbarq_constants *c,
                              const hbarq_profile *profile,
                              const hbarq_spectrum *spectrum,
                              hbarq_quench **out) {
  return guard([&] {
    need(profile, "profile");
    need(spectrum, "spectrum");
    need(out, "out");
    *out = new hbarq_quench{
        QuenchCalculator(to_cpp(c), profile->p, spectrum->s)};
  });
}

void hbarq_quench_free(hbarq_quench *calc) { delete calc; }

hbarq_status hbarq_quench_summary(const hbarq_quench *calc,
                                  const hbarq_scenario *s,
                                  hbarq_summary *out) {
  return guard([&] {
    need(calc, "calculator");
    need(out, "out");
    const QuenchSummary r = calc->q.summary(to_cpp(s));
    *out = {r.d_tr,
            r.d_in,
            r.Gamma_t,
            r.Gamma_d,
            r.Gamma_CP,
            r.Gamma_in,
            r.R,
            r.ratio,
            r.n_eff,
            r.sigma_c,
            r.d_in_from_cartesian ? 1 : 0,
            r.validity.l_pol_over_l_g,
            r.validity.tau_over_tau_g,
            r.validity.ok() ? 1 : 0};
  });
}

hbarq_status hbarq_quench_observable(const hbarq_quench *calc,
                                     hbarq_observable which,
                                     const hbarq_scenario *s, double *out) {
  return guard([&] {
    need(calc, "calculator");
    need(out, "out");
    const QuenchCalculator &q = calc->q;
    // Scenario-free observables accept a null scenario.
    switch (which) {
    case HBARQ_GAMMA_CP: *out = q.gamma_cp(); return;
    case HBARQ_QUENCH_RATIO: *out = q.quench_ratio(); return;
    case HBARQ_SIGMA_CRITICAL: *out = q.sigma_critical(); return;
    case HBARQ_RADIAL_SQ_MOMENT_AU: *out = q.radial_sq_moment_au(); return;
    case HBARQ_RADIAL_IM_MOMENT_AU: *out = q.radial_im_moment_au(); return;
    default: break;
    }
    const QuenchScenario sc = to_cpp(s);
    switch (which) {
    case HBARQ_D_TR: *out = q.d_tr(sc); return;
    case HBARQ_D_TR_CARTESIAN: *out = q.d_tr_cartesian(sc); return;
    case HBARQ_D_IN: *out = q.d_in(sc); return;
    case HBARQ_D_IN_POLAR: *out = q.d_in_polar(sc); return;
    case HBARQ_D_IN_CARTESIAN: *out = q.d_in_cartesian(sc); return;
    case HBARQ_GAMMA_T: *out = q.gamma_t(sc); return;
    case HBARQ_GAMMA_T_RADIAL: *out = q.gamma_t_radial(sc); return;
    case HBARQ_GAMMA_D: *out = q.gamma_d(sc); return;
    case HBARQ_GAMMA_D_RADIAL: *out = q.gamma_d_radial(sc); return;
    case HBARQ_SURVIVAL: *out = q.survival(sc); return;
    case HBARQ_N_EFFECTIVE: *out = q.n_effective(sc); return;
    case HBARQ_SURVIVAL_FACTOR: *out = q.survival_factor(sc); return;
    case HBARQ_TOTAL_TRANSITION_PROBABILITY:
      *out = q.total_transition_probability(sc);
      return;
    default: fail(ErrorCode::invalid_argument, "unknown observable");
    }
  });
}

hbarq_status hbarq_transition_amplitude(const hbarq_quench *calc, int k,
                                        const hbarq_scenario *s,
                                        const double *t0, size_t n_t0,
                                        int low_frequency, double *re,
                                        double *im, double *alt_re,
                                        double *alt_im, double *omega_tau) {
  return guard([&] {
    need(calc, "calculator");
    if (n_t0 > 0)
      need(t0, "t0");
    const std::span<const double> times(t0, n_t0);
    const auto a =
        low_frequency
            ? calc->q.transition_amplitude_low_frequency(k, to_cpp(s), times)
            : calc->q.transition_amplitude(k, to_cpp(s), times);
    put_complex(a.value, re, im);
    put_complex(a.alt_phase, alt_re, alt_im);
    if (omega_tau != nullptr)
      *omega_tau = a.omega_tau;
  });
}

hbarq_status hbarq_transition_probability(const hbarq_quench *calc, int k,
                                          const hbarq_scenario *s,
                                          const double *t0, size_t n_t0,
                                          double *out) {
  return guard([&] {
    need(calc, "calculator");
    need(out, "out");
    if (n_t0 > 0)
      need(t0, "t0");
    *out = calc->q.transition_probability(k, to_cpp(s),
                                          std::span<const double>(t0, n_t0));
  });
}

hbarq_status hbarq_p_of_d(const hbarq_quench *calc, const hbarq_scenario *s,
                          double d, double *out) {
  return guard([&] {
    need(calc, "calculator");
    need(out, "out");
    *out = calc->q.p_of_d(to_cpp(s), d);
  });
}

hbarq_status hbarq_p_in_of_d(const hbarq_quench *calc, const hbarq_scenario *s,
                             double d, double *p, int *exact_form) {
  return guard([&] {
    need(calc, "calculator");
    need(p, "p");
    const auto r = calc->q.p_in_of_d(to_cpp(s), d);
    *p = r.p;
    if (exact_form != nullptr)
      *exact_form = r.exact_form ? 1 : 0;
  });
}

hbarq_status hbarq_mean_phase_sum_sq(int n_centres, double omega, double span,
                                     int n_samples, unsigned long long seed,
                                     double *out) {
  return guard([&] {
    need(out, "out");
    *out = mean_phase_sum_sq(n_centres, omega, span, n_samples, seed);
  });
}

void hbarq_evolve_options_default(hbarq_evolve_options *out) {
  if (out == nullptr)
    return;
  const EvolveOptions o;
  *out = {o.n_states, o.n_report, o.force_real_a ? 1 : 0, o.rel_tol,
          o.abs_tol};
}

hbarq_status hbarq_evolve(const hbarq_quench *calc, const hbarq_scenario *s,
                          const hbarq_evolve_options *opts, hbarq_trace **out) {
  return guard([&] {
    need(calc, "calculator");
    need(out, "out");
    EvolveOptions o;
    if (opts != nullptr) {
      o.n_states = opts->n_states;
      o.n_report = opts->n_report;
      o.force_real_a = opts->force_real_a != 0;
      o.rel_tol = opts->rel_tol;
      o.abs_tol = opts->abs_tol;
    }
    *out = new hbarq_trace{evolve_coupled(calc->q, to_cpp(s), o)};
  });
}

void hbarq_trace_free(hbarq_trace *trace) { delete trace; }

size_t hbarq_trace_times(const hbarq_trace *trace) {
  return trace == nullptr ? 0 : trace->t.times.size();
}

int hbarq_trace_states(const hbarq_trace *trace) {
  if (trace == nullptr || trace->t.amplitudes.empty())
    return 0;
  return static_cast<int>(trace->t.amplitudes.front().size());
}

long hbarq_trace_ode_steps(const hbarq_trace *trace) {
  return trace == nullptr ? 0 : trace->t.ode_steps;
}

hbarq_status hbarq_trace_point(const hbarq_trace *trace, size_t i,
                               double *time, double *survival) {
  return guard([&] {
    need(trace, "trace");
    if (i >= trace->t.times.size())
      fail(ErrorCode::invalid_argument, "time index out of range");
    if (time != nullptr)
      *time = trace->t.times[i];
    if (survival != nullptr)
      *survival = trace->t.survival[i];
  });
}

hbarq_status hbarq_trace_amplitude(const hbarq_trace *trace, size_t i, int k,
                                   double *re, double *im) {
  return guard([&] {
    need(trace, "trace");
    if (i >= trace->t.times.size())
      fail(ErrorCode::invalid_argument, "time index out of range");
    const auto &row = trace->t.amplitudes[i];
    if (k < 1 || k > static_cast<int>(row.size()))
      fail(ErrorCode::invalid_argument, "state index out of range");
    put_complex(row[k - 1], re, im);
  });
}

} // extern "C"
