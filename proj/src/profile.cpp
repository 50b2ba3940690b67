#include "hbarq/error.hpp"
#include "hbarq/gravstates.hpp"
#include "hbarq/reflection.hpp"
#include "parallel.hpp"
#include <algorithm>
#include <cmath>
using std::isnan; // Boost 1.74 pchip calls isnan unqualified
#include <boost/math/interpolators/pchip.hpp>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace hbarq {

using cplx = std::complex<double>;
using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

struct RhoProfile::Interp {
  Pchip re;
  Pchip im;
};

namespace {
std::shared_ptr<const RhoProfile::Interp>
build_interp(const std::vector<ProfileSample> &samples, cplx a_cp) {
  // Interpolating a - a_CP keeps a flat profile exactly flat.
  std::vector<double> x, re, im;
  for (const auto &s : samples) {
    x.push_back(s.rho);
    re.push_back(s.a.re() - a_cp.real());
    im.push_back(s.a.im() - a_cp.imag());
  }
  // a(rho) is even in rho, so its slope vanishes on the charge axis.
  const double left = samples.front().rho == 0.0
                          ? 0.0
                          : std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x2 = x;
  Pchip pre(std::move(x), std::move(re), left);
  Pchip pim(std::move(x2), std::move(im), left);
  return std::make_shared<const RhoProfile::Interp>(
      RhoProfile::Interp{std::move(pre), std::move(pim)});
}
} // namespace

RhoProfile::RhoProfile(std::vector<ProfileSample> samples, double Q,
                       ComplexLength a_cp, std::string model_id,
                       std::string config_id)
    : samples_(std::move(samples)), Q_(Q), a_cp_(a_cp),
      model_id_(std::move(model_id)), config_id_(std::move(config_id)) {
  if (samples_.size() < 4)
    fail(ErrorCode::invalid_argument, "profile needs at least four samples");
  for (std::size_t i = 1; i < samples_.size(); ++i)
    if (!(samples_[i].rho > samples_[i - 1].rho))
      fail(ErrorCode::invalid_argument, "profile rho must be strictly increasing");
  if (samples_.front().rho < 0.0)
    fail(ErrorCode::invalid_argument, "profile rho must be non-negative");
  samples_.back().resolved = true;
  interp_ = build_interp(samples_, a_cp_.au);
}

int RhoProfile::warnings() const {
  return static_cast<int>(std::count_if(
      samples_.begin(), samples_.end(),
      [](const ProfileSample &s) { return !s.resolved; }));
}

int RhoProfile::gap_index(double rho) const {
  rho = std::abs(rho);
  if (rho > rho_hi())
    return -1;
  auto it = std::upper_bound(
      samples_.begin(), samples_.end(), rho,
      [](double r, const ProfileSample &s) { return r < s.rho; });
  if (it == samples_.begin())
    return 0;
  const auto i = static_cast<int>(it - samples_.begin()) - 1;
  return std::min(i, static_cast<int>(samples_.size()) - 2);
}

void RhoProfile::require_resolved(double r0, double r1) const {
  r0 = std::abs(r0);
  r1 = std::abs(r1);
  if (r0 > r1)
    std::swap(r0, r1);
  if (warnings() == 0 || r0 > rho_hi())
    return;
  const int i0 = gap_index(r0);
  const int i1 = r1 > rho_hi() ? static_cast<int>(samples_.size()) - 2
                               : gap_index(r1);
  for (int i = i0; i <= i1; ++i)
    if (!samples_[i].resolved) {
      std::ostringstream os;
      os.precision(10);
      os << "unresolved resonance in rho interval [" << samples_[i].rho << ", "
         << samples_[i + 1].rho << "] a.u.";
      fail(ErrorCode::unresolved_resonance, os.str());
    }
}

ComplexLength RhoProfile::at(double rho) const {
  rho = std::abs(rho);
  if (rho > rho_hi())
    return a_cp_;
  return {a_cp_.au + delta(rho)};
}

std::complex<double> RhoProfile::derivative(double rho) const {
  const double sign = rho < 0.0 ? -1.0 : 1.0;
  rho = std::abs(rho);
  if (rho > rho_hi() || rho < samples_.front().rho)
    return 0.0;
  const int i = gap_index(rho);
  if (!samples_[i].resolved)
    require_resolved(rho, rho);
  return sign * cplx(interp_->re.prime(rho), interp_->im.prime(rho));
}

std::complex<double> RhoProfile::delta(double rho) const {
  rho = std::abs(rho);
  if (rho > rho_hi())
    return 0.0;
  const int i = gap_index(rho);
  if (!samples_[i].resolved)
    require_resolved(rho, rho);
  const double x = std::max(rho, samples_.front().rho);
  return cplx(interp_->re(x), interp_->im(x));
}

ProfileOptions default_profile_options(const PotentialModel &model,
                                       const Constants &c, double Q) {
  const double L = std::max(polarization_length(c, Q),
                            std::sqrt(2.0 * c.m_au() * model.C4()));
  ProfileOptions o;
  o.rho_lo = 0.01 * L;
  o.rho_hi = std::min(20.0 * L, gravitational_scales_au(c).l_g);
  return o;
}

RhoProfile scan_profile(const PotentialModel &model, const Constants &c,
                        double Q, const ProfileOptions &opts_in,
                        const SolverConfig &cfg) {
  cfg.validate();
  if (!(Q >= 0.0) || !std::isfinite(Q))
    fail(ErrorCode::invalid_argument, "charge Q must be non-negative");
  ProfileOptions opts = opts_in;
  const ProfileOptions defaults = default_profile_options(model, c, Q);
  if (opts.rho_lo <= 0.0)
    opts.rho_lo = defaults.rho_lo;
  if (opts.rho_hi <= 0.0)
    opts.rho_hi = defaults.rho_hi;
  if (!(opts.rho_hi > opts.rho_lo))
    fail(ErrorCode::invalid_argument, "profile needs rho_lo < rho_hi");
  if (opts.n_initial < 4 || !(opts.jump_tol > 0.0) || opts.max_depth < 0)
    fail(ErrorCode::invalid_argument, "invalid profile refinement options");

  const ComplexLength acp = a_cp(model, c, cfg);
  // Without a charge the potential does not depend on rho.
  auto solve = [&](double rho) {
    return Q == 0.0 ? acp : scattering_length(model, c, rho, Q, cfg);
  };

  std::vector<double> rho{0.0};
  const double step = std::log(opts.rho_hi / opts.rho_lo) / (opts.n_initial - 1);
  for (int i = 0; i < opts.n_initial; ++i)
    rho.push_back(i == opts.n_initial - 1 ? opts.rho_hi
                                          : opts.rho_lo * std::exp(step * i));
  std::vector<ComplexLength> a(rho.size());
  detail::parallel_for(rho.size(), opts.threads,
                       [&](std::size_t i) { a[i] = solve(rho[i]); });
  std::vector<int> depth(rho.size() - 1, 0);

  auto violates = [&](std::size_t i) {
    const double scale = std::max(a[i].abs(), acp.abs());
    return std::abs(a[i + 1].au - a[i].au) > opts.jump_tol * scale;
  };

  // Bisect offending gaps round by round. Each round is decided from the
  // current table only, so the result does not depend on evaluation order.
  for (;;) {
    std::vector<std::size_t> split;
    for (std::size_t i = 0; i + 1 < rho.size(); ++i)
      if (depth[i] < opts.max_depth && violates(i))
        split.push_back(i);
    if (split.empty())
      break;
    std::vector<double> mid(split.size());
    std::vector<ComplexLength> a_mid(split.size());
    for (std::size_t j = 0; j < split.size(); ++j)
      mid[j] = 0.5 * (rho[split[j]] + rho[split[j] + 1]);
    detail::parallel_for(mid.size(), opts.threads,
                         [&](std::size_t j) { a_mid[j] = solve(mid[j]); });

    std::vector<double> rho2;
    std::vector<ComplexLength> a2;
    std::vector<int> depth2;
    std::size_t j = 0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      rho2.push_back(rho[i]);
      a2.push_back(a[i]);
      if (i + 1 == rho.size())
        break;
      if (j < split.size() && split[j] == i) {
        depth2.push_back(depth[i] + 1);
        rho2.push_back(mid[j]);
        a2.push_back(a_mid[j]);
        depth2.push_back(depth[i] + 1);
        ++j;
      } else {
        depth2.push_back(depth[i]);
      }
    }
    rho = std::move(rho2);
    a = std::move(a2);
    depth = std::move(depth2);
  }

  std::vector<ProfileSample> samples(rho.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    samples[i].rho = rho[i];
    samples[i].a = a[i];
    samples[i].resolved = (i + 1 == rho.size()) || !violates(i);
  }
  std::ostringstream cfg_id;
  cfg_id << cfg.id() << ";jump=" << opts.jump_tol
         << ";depth=" << opts.max_depth << ";n0=" << opts.n_initial;
  return RhoProfile(std::move(samples), Q, acp, model.id(), cfg_id.str());
}

RhoProfile flat_profile(ComplexLength a_cp, double rho_hi) {
  if (!(rho_hi > 0.0))
    fail(ErrorCode::invalid_argument, "flat_profile needs rho_hi > 0");
  std::vector<ProfileSample> s;
  for (double f : {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0})
    s.push_back({f * rho_hi, a_cp, true});
  return RhoProfile(std::move(s), 0.0, a_cp, "flat", "flat");
}

void write_profile_csv(std::ostream &out, const RhoProfile &profile,
                       const Constants &c,
                       const std::vector<std::string> &comment) {
  for (const auto &line : comment)
    out << "# " << line << '\n';
  out << "rho_au,rho_m,re_a_au,im_a_au,re_a_m,im_a_m,resolved\n";
  char buf[512];
  for (const auto &s : profile.samples()) {
    const double L = c.bohr_radius;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                  s.rho, s.rho * L, s.a.re(), s.a.im(), s.a.re() * L,
                  s.a.im() * L, s.resolved ? 1 : 0);
    out << buf;
  }
}

} // namespace hbarq
