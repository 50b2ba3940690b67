/* C interface to the hbarq library.
 *
 * All functions return an hbarq_status; on failure a description is
 * available from hbarq_last_error() until the next call on the same thread.
 * Physical inputs and outputs are SI unless the name says _au.
 * Handles are immutable after creation and may be shared between threads.
 */
#ifndef HBARQ_H
#define HBARQ_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(HBARQ_BUILDING_LIBRARY)
#define HBARQ_API __declspec(dllexport)
#else
#define HBARQ_API __declspec(dllimport)
#endif
#else
#define HBARQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hbarq_status {
  HBARQ_OK = 0,
  HBARQ_E_INVALID_ARGUMENT = 1,
  HBARQ_E_DOMAIN = 2,
  HBARQ_E_FORBIDDEN_REGION = 3,
  HBARQ_E_WKB_INVALID = 4,
  HBARQ_E_NO_CONVERGENCE = 5,
  HBARQ_E_SIGN_VIOLATION = 6,
  HBARQ_E_UNRESOLVED_RESONANCE = 7,
  HBARQ_E_IO = 8,
  HBARQ_E_BUFFER_TOO_SMALL = 9,
  HBARQ_E_INTERNAL = 99
} hbarq_status;

HBARQ_API const char *hbarq_version(void);
HBARQ_API const char *hbarq_last_error(void);
HBARQ_API const char *hbarq_status_name(hbarq_status status);

/* ---------------------------------------------------------------- units */

typedef struct hbarq_constants {
  double hbar;          /* J s */
  double electron_mass; /* kg */
  double bohr_radius;   /* m */
  double hartree;       /* J */
  double e_charge;      /* C */
  double m_inertial;    /* kg */
  double M_grav;        /* kg */
  double g;             /* m/s^2 */
  double alpha_p;       /* a.u. */
} hbarq_constants;

/* CODATA 2018, hydrogen mass, standard gravity, alpha_p = 4.5. */
HBARQ_API void hbarq_constants_default(hbarq_constants *out);
HBARQ_API hbarq_status hbarq_constants_validate(const hbarq_constants *c);

/* dimension: "length", "energy", "time", "mass", "velocity", "frequency". */
HBARQ_API hbarq_status hbarq_to_au(const hbarq_constants *c,
                                   const char *dimension, double value_si,
                                   double *out_au);
HBARQ_API hbarq_status hbarq_from_au(const hbarq_constants *c,
                                     const char *dimension, double value_au,
                                     double *out_si);

/* Text outputs: snprintf-style. *needed receives the length without the
 * terminating NUL; HBARQ_E_BUFFER_TOO_SMALL when cap <= *needed. */
HBARQ_API hbarq_status hbarq_constants_json(const hbarq_constants *c,
                                            char *buf, size_t cap,
                                            size_t *needed);

/* ----------------------------------------------------------- potentials */

typedef struct hbarq_model hbarq_model;

HBARQ_API hbarq_status hbarq_model_pure_quartic(double C4, hbarq_model **out);
HBARQ_API hbarq_status hbarq_model_two_scale(double C3, double C4,
                                             hbarq_model **out);
/* Two columns z [m], V [J] per line, or a.u. after a line "units: au";
 * "#" starts a comment. */
HBARQ_API hbarq_status hbarq_model_load_tabulated(const char *path,
                                                  const hbarq_constants *c,
                                                  hbarq_model **out);
HBARQ_API void hbarq_model_free(hbarq_model *model);
HBARQ_API hbarq_status hbarq_model_c4(const hbarq_model *model, double *out);
HBARQ_API hbarq_status hbarq_model_id(const hbarq_model *model, char *buf,
                                      size_t cap, size_t *needed);

/* Atom-surface potential plus polarization [+ M g z] - energy_offset, a.u. */
HBARQ_API hbarq_status hbarq_potential_au(const hbarq_model *model,
                                          const hbarq_constants *c,
                                          double z_au, double rho_au, double Q,
                                          int with_gravity,
                                          double energy_offset_au,
                                          double *out);
HBARQ_API hbarq_status hbarq_badland(const hbarq_model *model,
                                     const hbarq_constants *c, double z_au,
                                     double rho_au, double Q, double energy_au,
                                     double *out);
HBARQ_API hbarq_status hbarq_badland_numeric(const hbarq_model *model,
                                             const hbarq_constants *c,
                                             double z_au, double rho_au,
                                             double Q, double energy_au,
                                             double rel_step, double *out);
/* Intervals as pairs (z_a, z_b) in a.u.; *count receives the number of
 * intervals, of which min(count, cap_pairs) are written. */
HBARQ_API hbarq_status hbarq_badland_intervals(
    const hbarq_model *model, const hbarq_constants *c, double rho_au,
    double Q, double energy_au, double z_lo_au, double z_hi_au, int n_grid,
    double *pairs, size_t cap_pairs, size_t *count);

/* ----------------------------------------------------------- reflection */

typedef enum hbarq_boundary {
  HBARQ_BOUNDARY_PLANE_WAVE = 0,
  HBARQ_BOUNDARY_FIRST = 1,
  HBARQ_BOUNDARY_SECOND = 2
} hbarq_boundary;

typedef struct hbarq_solver_config {
  double z_min_au; /* 0 = automatic */
  double z_max_au; /* 0 = automatic */
  double wkb_threshold;
  double tol_rel;
  int max_refinements;
  hbarq_boundary boundary;
} hbarq_solver_config;

HBARQ_API void hbarq_solver_config_default(hbarq_solver_config *out);

HBARQ_API hbarq_status hbarq_scattering_length(const hbarq_model *model,
                                               const hbarq_constants *c,
                                               double rho_au, double Q,
                                               const hbarq_solver_config *cfg,
                                               double *re_au, double *im_au);
HBARQ_API hbarq_status hbarq_a_cp(const hbarq_model *model,
                                  const hbarq_constants *c,
                                  const hbarq_solver_config *cfg,
                                  double *re_au, double *im_au);

typedef struct hbarq_profile_options {
  double rho_lo_au; /* 0 = default */
  double rho_hi_au; /* 0 = default */
  int n_initial;
  double jump_tol;
  int max_depth;
  int threads; /* 0 = hardware concurrency */
} hbarq_profile_options;

HBARQ_API hbarq_status hbarq_profile_options_default(
    const hbarq_model *model, const hbarq_constants *c, double Q,
    hbarq_profile_options *out);

typedef struct hbarq_profile hbarq_profile;

HBARQ_API hbarq_status hbarq_profile_scan(const hbarq_model *model,
                                          const hbarq_constants *c, double Q,
                                          const hbarq_profile_options *opts,
                                          const hbarq_solver_config *cfg,
                                          hbarq_profile **out);
HBARQ_API void hbarq_profile_free(hbarq_profile *profile);
HBARQ_API size_t hbarq_profile_size(const hbarq_profile *profile);
/* Number of gaps left unresolved by refinement. */
HBARQ_API int hbarq_profile_warnings(const hbarq_profile *profile);
HBARQ_API hbarq_status hbarq_profile_sample(const hbarq_profile *profile,
                                            size_t i, double *rho_au,
                                            double *re_au, double *im_au,
                                            int *resolved);
HBARQ_API hbarq_status hbarq_profile_at(const hbarq_profile *profile,
                                        double rho_au, double *re_au,
                                        double *im_au);
HBARQ_API hbarq_status hbarq_profile_a_cp(const hbarq_profile *profile,
                                          double *re_au, double *im_au);
/* comment: lines written as '# ...' before the column header; may be NULL
 * and may contain newlines. */
HBARQ_API hbarq_status hbarq_profile_write_csv(const hbarq_profile *profile,
                                               const hbarq_constants *c,
                                               const char *path,
                                               const char *comment);

/* ----------------------------------------------------------- gravstates */

typedef struct hbarq_scales {
  double l_g;
  double eps_g;
  double tau_g;
} hbarq_scales;

HBARQ_API hbarq_status hbarq_gravitational_scales(const hbarq_constants *c,
                                                  hbarq_scales *si,
                                                  hbarq_scales *au);
/* First n zeros of Ai(-x). */
HBARQ_API hbarq_status hbarq_airy_zeros(int n, double *out);

typedef struct hbarq_spectrum hbarq_spectrum;

HBARQ_API hbarq_status hbarq_spectrum_new(const hbarq_constants *c,
                                          int n_states, hbarq_spectrum **out);
HBARQ_API void hbarq_spectrum_free(hbarq_spectrum *spectrum);
HBARQ_API int hbarq_spectrum_size(const hbarq_spectrum *spectrum);
/* States are numbered from 1. */
HBARQ_API hbarq_status hbarq_spectrum_lambda(const hbarq_spectrum *spectrum,
                                             int n, double *out);
HBARQ_API hbarq_status hbarq_spectrum_energy(const hbarq_spectrum *spectrum,
                                             int n, double *out_joule);
HBARQ_API hbarq_status hbarq_spectrum_omega(const hbarq_spectrum *spectrum,
                                            int i, int k, double *out_rad_s);
HBARQ_API hbarq_status hbarq_spectrum_coupling(const hbarq_spectrum *spectrum,
                                               int i, int k, double *out);
HBARQ_API hbarq_status hbarq_spectrum_json(const hbarq_spectrum *spectrum,
                                           char *buf, size_t cap,
                                           size_t *needed);

/* --------------------------------------------------------------- quench */

typedef struct hbarq_scenario {
  double Q;     /* units of e */
  double v;     /* m/s */
  double d;     /* m */
  double sigma; /* 1/m^2 */
  double L;     /* m */
  int N;
} hbarq_scenario;

HBARQ_API void hbarq_scenario_default(hbarq_scenario *out);

typedef struct hbarq_summary {
  double d_tr;
  double d_in;
  double Gamma_t;
  double Gamma_d;
  double Gamma_CP;
  double Gamma_in;
  double R;
  double ratio;
  double n_eff;
  double sigma_c; /* +inf when Q = 0 */
  int d_in_from_cartesian;
  double l_pol_over_l_g;
  double tau_over_tau_g;
  int valid; /* both ratios <= 0.1 */
} hbarq_summary;

typedef struct hbarq_quench hbarq_quench;

/* The calculator keeps its own references; the profile and spectrum may be
 * freed afterwards. */
HBARQ_API hbarq_status hbarq_quench_new(const hbarq_constants *c,
                                        const hbarq_profile *profile,
                                        const hbarq_spectrum *spectrum,
                                        hbarq_quench **out);
HBARQ_API void hbarq_quench_free(hbarq_quench *calc);

HBARQ_API hbarq_status hbarq_quench_summary(const hbarq_quench *calc,
                                            const hbarq_scenario *s,
                                            hbarq_summary *out);

typedef enum hbarq_observable {
  HBARQ_D_TR = 0,
  HBARQ_D_TR_CARTESIAN,
  HBARQ_D_IN,
  HBARQ_D_IN_POLAR,
  HBARQ_D_IN_CARTESIAN,
  HBARQ_GAMMA_T,
  HBARQ_GAMMA_T_RADIAL,
  HBARQ_GAMMA_D,
  HBARQ_GAMMA_D_RADIAL,
  HBARQ_GAMMA_CP,
  HBARQ_SURVIVAL,
  HBARQ_QUENCH_RATIO,
  HBARQ_N_EFFECTIVE,
  HBARQ_SIGMA_CRITICAL,
  HBARQ_SURVIVAL_FACTOR,
  HBARQ_TOTAL_TRANSITION_PROBABILITY,
  HBARQ_RADIAL_SQ_MOMENT_AU,
  HBARQ_RADIAL_IM_MOMENT_AU
} hbarq_observable;

HBARQ_API hbarq_status hbarq_quench_observable(const hbarq_quench *calc,
                                               hbarq_observable which,
                                               const hbarq_scenario *s,
                                               double *out);

/* Perturbative 1 -> k amplitude; t0 lists closest-approach times (s) of the
 * centres passed (NULL/0 for a single centre at t = 0). low_frequency
 * replaces the Fourier factor by its w = 0 value. */
HBARQ_API hbarq_status hbarq_transition_amplitude(
    const hbarq_quench *calc, int k, const hbarq_scenario *s,
    const double *t0, size_t n_t0, int low_frequency, double *re, double *im,
    double *alt_re, double *alt_im, double *omega_tau);
HBARQ_API hbarq_status hbarq_transition_probability(const hbarq_quench *calc,
                                                    int k,
                                                    const hbarq_scenario *s,
                                                    const double *t0,
                                                    size_t n_t0, double *out);
HBARQ_API hbarq_status hbarq_p_of_d(const hbarq_quench *calc,
                                    const hbarq_scenario *s, double d,
                                    double *out);
HBARQ_API hbarq_status hbarq_p_in_of_d(const hbarq_quench *calc,
                                       const hbarq_scenario *s, double d,
                                       double *p, int *exact_form);
HBARQ_API hbarq_status hbarq_mean_phase_sum_sq(int n_centres, double omega,
                                               double span, int n_samples,
                                               unsigned long long seed,
                                               double *out);

/* ------------------------------------------------------- coupled channels */

typedef struct hbarq_evolve_options {
  int n_states;
  int n_report;
  int force_real_a;
  double rel_tol;
  double abs_tol;
} hbarq_evolve_options;

HBARQ_API void hbarq_evolve_options_default(hbarq_evolve_options *out);

typedef struct hbarq_trace hbarq_trace;

HBARQ_API hbarq_status hbarq_evolve(const hbarq_quench *calc,
                                    const hbarq_scenario *s,
                                    const hbarq_evolve_options *opts,
                                    hbarq_trace **out);
HBARQ_API void hbarq_trace_free(hbarq_trace *trace);
HBARQ_API size_t hbarq_trace_times(const hbarq_trace *trace);
HBARQ_API int hbarq_trace_states(const hbarq_trace *trace);
HBARQ_API long hbarq_trace_ode_steps(const hbarq_trace *trace);
/* time in s, survival factor, and C_k for k = 1..states at report i. */
HBARQ_API hbarq_status hbarq_trace_point(const hbarq_trace *trace, size_t i,
                                         double *time, double *survival);
HBARQ_API hbarq_status hbarq_trace_amplitude(const hbarq_trace *trace,
                                             size_t i, int k, double *re,
                                             double *im);

#ifdef __cplusplus
}
#endif

#endif
