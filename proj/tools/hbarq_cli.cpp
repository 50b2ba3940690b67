// Command-line front end. Talks to the library only through hbarq.h.
#include "CLI11.hpp"
#include "hbarq/hbarq.h"
#include "json.hpp"
#include "run_config.hpp"
#include "svg_plot.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hbarq_cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitWarnings = 2;

struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(hbarq_status st, const char *what) {
  if (st != HBARQ_OK)
    throw LibraryError(std::string(what) + ": " + hbarq_status_name(st) +
                       ": " + hbarq_last_error());
}

struct Free {
  void operator()(hbarq_model *p) const { hbarq_model_free(p); }
  void operator()(hbarq_profile *p) const { hbarq_profile_free(p); }
  void operator()(hbarq_spectrum *p) const { hbarq_spectrum_free(p); }
  void operator()(hbarq_quench *p) const { hbarq_quench_free(p); }
  void operator()(hbarq_trace *p) const { hbarq_trace_free(p); }
};
template <class T> using Handle = std::unique_ptr<T, Free>;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string q_tag(double Q) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", Q);
  return buf;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

struct Context {
  RunConfig cfg;
  hbarq_constants c{};
  fs::path out;
  int threads = 1;
  std::string version;
  std::string hash;

  std::string header() const {
    return "hbarq " + version + " config=" + hash;
  }
  json meta() const {
    json m;
    m["tool"] = "hbarq";
    m["version"] = version;
    m["config_hash"] = hash;
    return m;
  }
  fs::path file(const std::string &name) const { return out / name; }
};

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open " + path.string());
  f << text;
  if (!f)
    throw std::runtime_error("write failed: " + path.string());
}

void write_json(const Context &ctx, const fs::path &path, json body) {
  json doc;
  doc["meta"] = ctx.meta();
  for (auto &[k, v] : body.items())
    doc[k] = v;
  write_text(path, doc.dump(2) + "\n");
}

std::string svg(const Context &ctx, PlotSpec spec,
                const std::vector<Series> &series) {
  spec.comment = ctx.header();
  return render_svg(spec, series);
}

// ------------------------------------------------------------ library glue

Handle<hbarq_model> make_model(const Context &ctx) {
  const std::string kind = ctx.cfg.raw("model");
  hbarq_model *m = nullptr;
  if (kind == "two_scale")
    check(hbarq_model_two_scale(ctx.cfg.number("C3"), ctx.cfg.number("C4"), &m),
          "model");
  else if (kind == "pure_quartic")
    check(hbarq_model_pure_quartic(ctx.cfg.number("C4"), &m), "model");
  else if (kind == "tabulated")
    check(hbarq_model_load_tabulated(ctx.cfg.raw("table").c_str(), &ctx.c, &m),
          "model");
  else
    throw std::invalid_argument("model: unknown kind '" + kind + "'");
  return Handle<hbarq_model>(m);
}

hbarq_solver_config solver_config(const Context &ctx) {
  hbarq_solver_config s;
  hbarq_solver_config_default(&s);
  s.z_min_au = ctx.cfg.length_au("z_min", "au");
  s.z_max_au = ctx.cfg.length_au("z_max", "au");
  s.wkb_threshold = ctx.cfg.number("wkb_threshold");
  s.tol_rel = ctx.cfg.number("tol_rel");
  s.max_refinements = ctx.cfg.integer("max_refinements");
  const std::string b = ctx.cfg.raw("boundary");
  if (b == "plane_wave")
    s.boundary = HBARQ_BOUNDARY_PLANE_WAVE;
  else if (b == "first")
    s.boundary = HBARQ_BOUNDARY_FIRST;
  else if (b == "second")
    s.boundary = HBARQ_BOUNDARY_SECOND;
  else
    throw std::invalid_argument("boundary: unknown order '" + b + "'");
  return s;
}

Handle<hbarq_profile> make_profile(const Context &ctx, const hbarq_model *m,
                                   double Q, int threads) {
  hbarq_profile_options o;
  check(hbarq_profile_options_default(m, &ctx.c, Q, &o), "profile options");
  const double lo = ctx.cfg.length_au("rho_lo", "au");
  const double hi = ctx.cfg.length_au("rho_hi", "au");
  if (lo > 0.0)
    o.rho_lo_au = lo;
  if (hi > 0.0)
    o.rho_hi_au = hi;
  o.n_initial = ctx.cfg.integer("n_initial");
  o.jump_tol = ctx.cfg.number("jump_tol");
  o.max_depth = ctx.cfg.integer("max_depth");
  o.threads = threads;
  const hbarq_solver_config s = solver_config(ctx);
  hbarq_profile *p = nullptr;
  check(hbarq_profile_scan(m, &ctx.c, Q, &o, &s, &p), "profile scan");
  return Handle<hbarq_profile>(p);
}

Handle<hbarq_spectrum> make_spectrum(const Context &ctx, int n) {
  hbarq_spectrum *s = nullptr;
  check(hbarq_spectrum_new(&ctx.c, n, &s), "spectrum");
  return Handle<hbarq_spectrum>(s);
}

Handle<hbarq_quench> make_quench(const Context &ctx, const hbarq_profile *p,
                                 const hbarq_spectrum *s) {
  hbarq_quench *q = nullptr;
  check(hbarq_quench_new(&ctx.c, p, s, &q), "quench");
  return Handle<hbarq_quench>(q);
}

hbarq_scenario scenario(const Context &ctx, double Q) {
  hbarq_scenario s;
  hbarq_scenario_default(&s);
  s.Q = Q;
  s.v = ctx.cfg.number("v");
  double d_si = 0.0, L_si = 0.0;
  check(hbarq_from_au(&ctx.c, "length", ctx.cfg.length_au("d", "m"), &d_si),
        "units");
  check(hbarq_from_au(&ctx.c, "length", ctx.cfg.length_au("L", "m"), &L_si),
        "units");
  s.d = d_si;
  s.L = L_si;
  s.sigma = ctx.cfg.number("sigma");
  s.N = ctx.cfg.integer("N");
  return s;
}

std::vector<double> charges(const Context &ctx) {
  auto q = ctx.cfg.number_list("Q");
  for (double v : q)
    if (!(v >= 0.0))
      throw std::invalid_argument("Q: charges must be non-negative");
  return q;
}

// Runs body(i) for i < n on the worker pool; the first exception wins.
template <class F> void parallel_map(std::size_t n, int threads, F &&body) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!err)
            err = std::current_exception();
        }
      }
    });
  for (auto &t : pool)
    t.join();
  if (err)
    std::rethrow_exception(err);
}

// ---------------------------------------------------------------- commands

int cmd_scan_a(const Context &ctx) {
  const auto model = make_model(ctx);
  int status = kExitOk;
  for (double Q : charges(ctx)) {
    const auto prof = make_profile(ctx, model.get(), Q, ctx.threads);
    double acp_re = 0.0, acp_im = 0.0;
    check(hbarq_profile_a_cp(prof.get(), &acp_re, &acp_im), "a_cp");
    const int warn = hbarq_profile_warnings(prof.get());
    const std::string stem = "a_profile_Q" + q_tag(Q);
    if (ctx.cfg.has_format("csv")) {
      const std::string comment = ctx.header() + "\nQ=" + fmt17(Q) +
                                  " a_cp_au=" + fmt17(acp_re) + "," +
                                  fmt17(acp_im) +
                                  " unresolved=" + std::to_string(warn);
      check(hbarq_profile_write_csv(prof.get(), &ctx.c,
                                    ctx.file(stem + ".csv").string().c_str(),
                                    comment.c_str()),
            "profile csv");
    }
    if (ctx.cfg.has_format("svg")) {
      Series re{"Re a (a.u.)", {}, {}, ""}, im{"Im a (a.u.)", {}, {}, ""};
      for (std::size_t i = 0; i < hbarq_profile_size(prof.get()); ++i) {
        double r = 0, a = 0, b = 0;
        check(hbarq_profile_sample(prof.get(), i, &r, &a, &b, nullptr),
              "profile sample");
        re.x.push_back(r);
        re.y.push_back(a);
        im.x.push_back(r);
        im.y.push_back(b);
      }
      PlotSpec spec;
      spec.title = "scattering length, Q = " + q_tag(Q);
      spec.x_label = "rho (a.u.)";
      spec.y_label = "a (a.u.)";
      spec.log_x = true;
      write_text(ctx.file(stem + ".svg"), svg(ctx, spec, {re, im}));
    }
    if (warn > 0) {
      std::cerr << "warning: Q=" << q_tag(Q) << ": " << warn
                << " unresolved resonance gap(s)\n";
      status = kExitWarnings;
    }
    std::cout << stem << ": " << hbarq_profile_size(prof.get())
              << " samples\n";
  }
  return status;
}

double badland_energy_au(const Context &ctx) {
  const std::string e = ctx.cfg.raw("energy");
  if (!e.empty() && (e[0] == 'E' || e[0] == 'e') && e.size() > 1 &&
      std::isdigit(static_cast<unsigned char>(e[1]))) {
    const int n = std::stoi(e.substr(1));
    if (n < 1)
      throw std::invalid_argument("energy: state index must be >= 1");
    const auto spec = make_spectrum(ctx, n);
    double lam = 0.0;
    check(hbarq_spectrum_lambda(spec.get(), n, &lam), "spectrum");
    hbarq_scales au;
    check(hbarq_gravitational_scales(&ctx.c, nullptr, &au), "scales");
    return lam * au.eps_g;
  }
  return ctx.cfg.number("energy");
}

int cmd_badland(const Context &ctx) {
  const auto model = make_model(ctx);
  const auto rhos = ctx.cfg.length_list_au("rho", "au");
  const double E = badland_energy_au(ctx);
  const double z_lo = ctx.cfg.length_au("z_lo", "au");
  const double z_hi = ctx.cfg.length_au("z_hi", "au");
  const int n_plot = ctx.cfg.integer("n_plot");
  const int n_grid = ctx.cfg.integer("n_grid");
  if (!(z_lo > 0.0) || !(z_hi > z_lo) || n_plot < 2)
    throw std::invalid_argument("badland: need 0 < z_lo < z_hi and n_plot >= 2");

  for (double Q : charges(ctx)) {
    const std::string stem = "badland_Q" + q_tag(Q);
    std::vector<double> z(n_plot);
    for (int i = 0; i < n_plot; ++i)
      z[i] = z_lo * std::pow(z_hi / z_lo, double(i) / (n_plot - 1));
    std::vector<std::vector<double>> B(rhos.size(), std::vector<double>(n_plot));
    for (std::size_t r = 0; r < rhos.size(); ++r)
      for (int i = 0; i < n_plot; ++i)
        check(hbarq_badland(model.get(), &ctx.c, z[i], rhos[r], Q, E,
                            &B[r][i]),
              "badland");

    std::string table = "# " + ctx.header() + "\n# Q=" + fmt17(Q) +
                        " E_au=" + fmt17(E) + "\nz_au";
    for (double r : rhos)
      table += ",B_rho" + q_tag(r);
    table += "\n";
    for (int i = 0; i < n_plot; ++i) {
      table += fmt17(z[i]);
      for (std::size_t r = 0; r < rhos.size(); ++r)
        table += "," + fmt17(B[r][i]);
      table += "\n";
    }

    std::string iv = "# " + ctx.header() + "\n# Q=" + fmt17(Q) +
                     " E_au=" + fmt17(E) + "\nrho_au,index,z_a_au,z_b_au\n";
    for (double r : rhos) {
      size_t count = 0;
      check(hbarq_badland_intervals(model.get(), &ctx.c, r, Q, E, z_lo, z_hi,
                                    n_grid, nullptr, 0, &count),
            "badland intervals");
      std::vector<double> pairs(2 * count);
      check(hbarq_badland_intervals(model.get(), &ctx.c, r, Q, E, z_lo, z_hi,
                                    n_grid, pairs.data(), count, &count),
            "badland intervals");
      for (size_t k = 0; k < count; ++k)
        iv += fmt17(r) + "," + std::to_string(k + 1) + "," +
              fmt17(pairs[2 * k]) + "," + fmt17(pairs[2 * k + 1]) + "\n";
      std::cout << "Q=" << q_tag(Q) << " rho=" << q_tag(r) << " a.u.: " << count
                << " badland interval(s)";
      for (size_t k = 0; k < count; ++k)
        std::cout << " [" << q_tag(pairs[2 * k]) << ", "
                  << q_tag(pairs[2 * k + 1]) << "]";
      std::cout << "\n";
    }
    if (ctx.cfg.has_format("csv")) {
      write_text(ctx.file(stem + ".csv"), table);
      write_text(ctx.file(stem + "_intervals.csv"), iv);
    }
    if (ctx.cfg.has_format("svg")) {
      std::vector<Series> series;
      for (std::size_t r = 0; r < rhos.size(); ++r) {
        Series s{"rho = " + q_tag(rhos[r]) + " a.u.", z, {}, ""};
        for (double b : B[r])
          s.y.push_back(std::abs(b));
        series.push_back(std::move(s));
      }
      series.push_back({"|B| = 1", {z_lo, z_hi}, {1.0, 1.0}, "#777777"});
      PlotSpec spec;
      spec.title = "badland function, Q = " + q_tag(Q);
      spec.x_label = "z (a.u.)";
      spec.y_label = "|B|";
      spec.log_x = spec.log_y = true;
      write_text(ctx.file(stem + ".svg"), svg(ctx, spec, series));
    }
  }
  return kExitOk;
}

int cmd_widths(const Context &ctx) {
  const auto model = make_model(ctx);
  const auto Qs = charges(ctx);
  const auto spec = make_spectrum(ctx, ctx.cfg.integer("n_states"));
  std::vector<hbarq_summary> rows(Qs.size());
  std::vector<int> warnings(Qs.size(), 0);
  const int inner = Qs.size() > 1 ? 1 : ctx.threads;
  parallel_map(Qs.size(), ctx.threads, [&](std::size_t i) {
    const auto prof = make_profile(ctx, model.get(), Qs[i], inner);
    warnings[i] = hbarq_profile_warnings(prof.get());
    const auto q = make_quench(ctx, prof.get(), spec.get());
    const hbarq_scenario s = scenario(ctx, Qs[i]);
    check(hbarq_quench_summary(q.get(), &s, &rows[i]), "summary");
  });

  const double v = ctx.cfg.number("v");
  std::string csv = "# " + ctx.header() + "\n# v=" + fmt17(v) +
                    " sigma=" + fmt17(ctx.cfg.number("sigma")) +
                    "\nQ,din_v_m2s,dtr_v_m2s,gamma_d_J,gamma_t_J,gamma_cp_J,ratio\n";
  Series din{"d_in v", {}, {}, "#000000"}, dtr{"d_tr v", {}, {}, "#c0392b"};
  for (std::size_t i = 0; i < Qs.size(); ++i) {
    const auto &r = rows[i];
    csv += fmt17(Qs[i]) + "," + fmt17(r.d_in * v) + "," + fmt17(r.d_tr * v) +
           "," + fmt17(r.Gamma_d) + "," + fmt17(r.Gamma_t) + "," +
           fmt17(r.Gamma_CP) + "," + fmt17(r.ratio) + "\n";
    din.x.push_back(Qs[i]);
    din.y.push_back(r.d_in * v);
    dtr.x.push_back(Qs[i]);
    dtr.y.push_back(r.d_tr * v);
    if (!r.valid)
      std::cerr << "note: Q=" << q_tag(Qs[i])
                << ": outside the short-range/sudden-passage regime (l_pol/l_g="
                << r.l_pol_over_l_g << ", tau/tau_g=" << r.tau_over_tau_g
                << ")\n";
  }
  if (ctx.cfg.has_format("csv"))
    write_text(ctx.file("widths.csv"), csv);
  if (ctx.cfg.has_format("svg")) {
    PlotSpec p;
    p.title = "effective radii times velocity";
    p.x_label = "Q (e)";
    p.y_label = "d v (m^2/s)";
    p.log_y = true;
    write_text(ctx.file("widths.svg"), svg(ctx, p, {din, dtr}));
  }
  std::cout << "widths.csv: " << Qs.size() << " rows\n";
  return kExitOk;
}

json summary_json(const hbarq_summary &r, const hbarq_constants &c) {
  json j;
  j["d_tr_m"] = r.d_tr;
  j["d_in_m"] = r.d_in;
  j["Gamma_t_J"] = r.Gamma_t;
  j["Gamma_d_J"] = r.Gamma_d;
  j["Gamma_CP_J"] = r.Gamma_CP;
  j["Gamma_in_J"] = r.Gamma_in;
  j["R"] = r.R;
  j["survival"] = 1.0 - r.R;
  j["ratio"] = r.ratio;
  j["n_eff"] = r.n_eff;
  j["sigma_c_m2"] = finite_or_null(r.sigma_c);
  j["lifetime_CP_s"] = finite_or_null(c.hbar / r.Gamma_CP);
  j["d_in_from_cartesian"] = r.d_in_from_cartesian != 0;
  json v;
  v["l_pol_over_l_g"] = r.l_pol_over_l_g;
  v["tau_over_tau_g"] = r.tau_over_tau_g;
  v["ok"] = r.valid != 0;
  j["validity"] = v;
  return j;
}

int cmd_survive(const Context &ctx) {
  const auto model = make_model(ctx);
  const auto Qs = charges(ctx);
  const auto spec = make_spectrum(ctx, ctx.cfg.integer("n_states"));
  std::vector<hbarq_summary> rows(Qs.size());
  const int inner = Qs.size() > 1 ? 1 : ctx.threads;
  parallel_map(Qs.size(), ctx.threads, [&](std::size_t i) {
    const auto prof = make_profile(ctx, model.get(), Qs[i], inner);
    const auto q = make_quench(ctx, prof.get(), spec.get());
    const hbarq_scenario s = scenario(ctx, Qs[i]);
    check(hbarq_quench_summary(q.get(), &s, &rows[i]), "summary");
  });
  const hbarq_scenario s0 = scenario(ctx, 0.0);
  json sc;
  sc["v_m_s"] = s0.v;
  sc["sigma_m2"] = s0.sigma;
  sc["L_m"] = s0.L;
  json results = json::array();
  for (std::size_t i = 0; i < Qs.size(); ++i) {
    json r;
    r["Q"] = Qs[i];
    const json sj = summary_json(rows[i], ctx.c);
    for (auto &[k, v] : sj.items())
      r[k] = v;
    results.push_back(r);
  }
  json body;
  body["scenario"] = sc;
  body["results"] = results;
  write_json(ctx, ctx.file("survive.json"), body);
  for (std::size_t i = 0; i < Qs.size(); ++i)
    std::cout << "Q=" << q_tag(Qs[i]) << ": R=" << rows[i].R
              << " survival=" << 1.0 - rows[i].R << "\n";
  return kExitOk;
}

json spectrum_states(const hbarq_spectrum *spec) {
  size_t need = 0;
  hbarq_spectrum_json(spec, nullptr, 0, &need);
  std::string buf(need + 1, '\0');
  check(hbarq_spectrum_json(spec, buf.data(), buf.size(), &need), "spectrum");
  buf.resize(need);
  return json::parse(buf);
}

json scales_json(const hbarq_constants &c) {
  hbarq_scales si, au;
  check(hbarq_gravitational_scales(&c, &si, &au), "scales");
  json j;
  j["l_g_m"] = si.l_g;
  j["l_g_au"] = au.l_g;
  j["eps_g_J"] = si.eps_g;
  j["eps_g_peV"] = si.eps_g / c.e_charge * 1e12;
  j["tau_g_s"] = si.tau_g;
  return j;
}

int cmd_spectrum(const Context &ctx) {
  const auto spec = make_spectrum(ctx, ctx.cfg.integer("n_states"));
  json body;
  body["scales"] = scales_json(ctx.c);
  body["states"] = spectrum_states(spec.get());
  write_json(ctx, ctx.file("spectrum.json"), body);
  std::cout << "spectrum.json: " << hbarq_spectrum_size(spec.get())
            << " states\n";
  return kExitOk;
}

int cmd_evolve(const Context &ctx) {
  const auto model = make_model(ctx);
  const int n = ctx.cfg.integer("n_states");
  const auto spec = make_spectrum(ctx, n);
  hbarq_evolve_options eo;
  hbarq_evolve_options_default(&eo);
  eo.n_states = n;
  eo.n_report = ctx.cfg.integer("n_report");
  eo.force_real_a = ctx.cfg.flag("force_real_a") ? 1 : 0;

  for (double Q : charges(ctx)) {
    const auto prof = make_profile(ctx, model.get(), Q, ctx.threads);
    const auto q = make_quench(ctx, prof.get(), spec.get());
    const hbarq_scenario s = scenario(ctx, Q);
    hbarq_trace *tp = nullptr;
    check(hbarq_evolve(q.get(), &s, &eo, &tp), "evolve");
    const Handle<hbarq_trace> tr(tp);
    const std::size_t nt = hbarq_trace_times(tr.get());
    const std::string stem = "evolve_Q" + q_tag(Q);

    std::string csv = "# " + ctx.header() + "\n# Q=" + fmt17(Q) +
                      " ode_steps=" +
                      std::to_string(hbarq_trace_ode_steps(tr.get())) +
                      "\nt_s,survival,norm";
    for (int k = 1; k <= n; ++k)
      csv += ",p" + std::to_string(k);
    csv += "\n";
    std::vector<Series> series;
    for (int k = 2; k <= std::min(n, 5); ++k)
      series.push_back({"|C_" + std::to_string(k) + "|^2", {}, {}, ""});
    std::vector<double> final_p(n);
    double final_surv = 1.0;
    for (std::size_t i = 0; i < nt; ++i) {
      double t = 0, surv = 0;
      check(hbarq_trace_point(tr.get(), i, &t, &surv), "trace");
      std::vector<double> p(n);
      double norm = 0.0;
      for (int k = 1; k <= n; ++k) {
        double re = 0, im = 0;
        check(hbarq_trace_amplitude(tr.get(), i, k, &re, &im), "trace");
        p[k - 1] = re * re + im * im;
        norm += p[k - 1];
      }
      csv += fmt17(t) + "," + fmt17(surv) + "," + fmt17(norm);
      for (double x : p)
        csv += "," + fmt17(x);
      csv += "\n";
      for (std::size_t k = 0; k < series.size(); ++k) {
        series[k].x.push_back(t);
        series[k].y.push_back(p[k + 1]);
      }
      final_p = p;
      final_surv = surv;
    }

    // Both columns carry the survival factor; row 1 compares against the
    // perturbative complement 1 - sum_k P_k.
    std::string cmp = "# " + ctx.header() + "\n# Q=" + fmt17(Q) +
                      " survival=" + fmt17(final_surv) +
                      "\nk,p_coupled,p_perturbative,omega_tau\n";
    double pert_sum = 0.0;
    std::vector<std::string> lines;
    for (int k = 2; k <= n; ++k) {
      double wt = 0, pk = 0;
      check(hbarq_transition_amplitude(q.get(), k, &s, nullptr, 0, 0, nullptr,
                                       nullptr, nullptr, nullptr, &wt),
            "transition amplitude");
      check(hbarq_transition_probability(q.get(), k, &s, nullptr, 0, &pk),
            "transition probability");
      pert_sum += pk;
      lines.push_back(std::to_string(k) + "," +
                      fmt17(final_p[k - 1] * final_surv) + "," + fmt17(pk) +
                      "," + fmt17(wt) + "\n");
    }
    cmp += "1," + fmt17(final_p[0] * final_surv) + "," +
           fmt17(1.0 - pert_sum) + ",0\n";
    for (const auto &l : lines)
      cmp += l;

    if (ctx.cfg.has_format("csv")) {
      write_text(ctx.file(stem + ".csv"), csv);
      write_text(ctx.file(stem + "_compare.csv"), cmp);
    }
    if (ctx.cfg.has_format("svg")) {
      PlotSpec p;
      p.title = "coupled-channel populations, Q = " + q_tag(Q);
      p.x_label = "t (s)";
      p.y_label = "|C_k|^2";
      p.log_y = true;
      write_text(ctx.file(stem + ".svg"), svg(ctx, p, series));
    }
    std::cout << stem << ": |C_1(T)|^2=" << fmt17(final_p[0] * final_surv)
              << " perturbative complement=" << fmt17(1.0 - pert_sum) << "\n";
  }
  return kExitOk;
}

int cmd_constants(const Context &ctx) {
  size_t need = 0;
  hbarq_constants_json(&ctx.c, nullptr, 0, &need);
  std::string buf(need + 1, '\0');
  check(hbarq_constants_json(&ctx.c, buf.data(), buf.size(), &need),
        "constants");
  buf.resize(need);
  json body;
  body["constants"] = json::parse(buf);
  body["scales"] = scales_json(ctx.c);
  write_json(ctx, ctx.file("constants.json"), body);
  std::cout << body.dump(2) << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quenching of gravitational states of antihydrogen by surface "
               "charges"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hbarq_version()));
  std::string config_path;
  app.add_option("-c,--config", config_path, "key=value configuration file");

  std::map<std::string, std::optional<std::string>> flags;
  for (const auto &k : known_keys()) {
    auto &slot = flags[k.name];
    app.add_option_function<std::string>(
        std::string("--") + k.name,
        [&slot](const std::string &v) { slot = v; },
        std::string(k.help) + " [" + k.fallback + "]");
  }

  using Command = int (*)(const Context &);
  const std::vector<std::tuple<const char *, const char *, Command>> commands =
      {{"scan-a", "scattering length versus rho (CSV, SVG)", cmd_scan_a},
       {"badland", "WKB badland function and intervals", cmd_badland},
       {"widths", "effective radii and widths versus Q", cmd_widths},
       {"survive", "survival summary (JSON)", cmd_survive},
       {"spectrum", "gravitational spectrum (JSON)", cmd_spectrum},
       {"evolve", "coupled-channel evolution (CSV)", cmd_evolve},
       {"constants", "physical constants and scales (JSON)", cmd_constants}};
  Command chosen = nullptr;
  for (const auto &[name, help, fn] : commands) {
    auto *sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&chosen, fn = fn] { chosen = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e) == 0 ? kExitOk : kExitFailure;
  }

  try {
    Context ctx;
    if (!config_path.empty())
      ctx.cfg.load_file(config_path);
    for (const auto &[k, v] : flags)
      if (v)
        ctx.cfg.set(k, *v);
    hbarq_constants_default(&ctx.c);
    ctx.version = hbarq_version();
    ctx.hash = ctx.cfg.hash();
    ctx.threads = ctx.cfg.integer("threads");
    if (ctx.threads < 0)
      throw std::invalid_argument("threads must be >= 0");
    if (ctx.threads == 0)
      ctx.threads = static_cast<int>(
          std::max(1u, std::thread::hardware_concurrency()));
    ctx.out = ctx.cfg.raw("out");
    fs::create_directories(ctx.out);
    return chosen(ctx);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
