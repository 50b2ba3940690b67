#include "hbarq/potentials.hpp"
#include "hbarq/error.hpp"
#include <boost/math/interpolators/barycentric_rational.hpp>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace hbarq {

struct PotentialModel::Table {
  std::vector<double> z;
  std::vector<double> v;
  boost::math::barycentric_rational<double> log_interp;
  double low_power; // V = v[0] (z[0]/z)^low_power below the table
  double tail_C4;
  std::uint64_t digest = 1469598103934665603ull; // FNV-1a over the samples

  Table(std::vector<double> zs, std::vector<double> vs,
        std::vector<double> ln_z, std::vector<double> ln_mv)
      : z(std::move(zs)), v(std::move(vs)),
        log_interp(ln_z.begin(), ln_z.end(), ln_mv.begin(), 3) {
    low_power = std::log(v[1] / v[0]) / std::log(z[0] / z[1]);
    tail_C4 = -v.back() * std::pow(z.back(), 4);
    for (const auto *col : {&z, &v})
      for (double x : *col) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &x, sizeof(double));
        for (unsigned char b : bytes)
          digest = (digest ^ b) * 1099511628211ull;
      }
  }
};

PotentialModel::PotentialModel(PotentialKind kind, double C3, double C4,
                               std::shared_ptr<const Table> table)
    : kind_(kind), C3_(C3), C4_(C4), table_(std::move(table)) {}

PotentialModel PotentialModel::pure_quartic(double C4) {
  if (!(C4 > 0.0) || !std::isfinite(C4))
    fail(ErrorCode::invalid_argument, "C4 must be positive");
  return PotentialModel(PotentialKind::pure_quartic, 0.0, C4, nullptr);
}

PotentialModel PotentialModel::two_scale(double C3, double C4) {
  if (!(C4 > 0.0) || !(C3 > 0.0) || !std::isfinite(C3) || !std::isfinite(C4))
    fail(ErrorCode::invalid_argument, "C3 and C4 must be positive");
  return PotentialModel(PotentialKind::two_scale, C3, C4, nullptr);
}

PotentialModel PotentialModel::tabulated(std::vector<double> z,
                                         std::vector<double> v) {
  if (z.size() != v.size())
    fail(ErrorCode::invalid_argument, "potential table: column size mismatch");
  if (z.size() < 100)
    fail(ErrorCode::invalid_argument,
         "potential table needs at least 100 points, got " +
             std::to_string(z.size()));
  std::vector<double> ln_z(z.size()), ln_mv(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0) || !std::isfinite(z[i]))
      fail(ErrorCode::invalid_argument, "potential table: z must be positive");
    if (i > 0 && !(z[i] > z[i - 1]))
      fail(ErrorCode::invalid_argument,
           "potential table: z not strictly increasing at row " +
               std::to_string(i));
    if (!(v[i] < 0.0) || !std::isfinite(v[i]))
      fail(ErrorCode::invalid_argument,
           "potential table: V must be negative (row " + std::to_string(i) +
               ")");
    ln_z[i] = std::log(z[i]);
    ln_mv[i] = std::log(-v[i]);
  }
  auto table = std::make_shared<const Table>(std::move(z), std::move(v),
                                             std::move(ln_z), std::move(ln_mv));
  const double c4 = table->tail_C4;
  return PotentialModel(PotentialKind::tabulated, 0.0, c4, std::move(table));
}

PotentialModel PotentialModel::load_tabulated(const std::string &path,
                                              const Constants &c) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorCode::io, "cannot open potential table '" + path + "'");
  bool atomic_units = false;
  std::vector<double> z, v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream ss(line);
    std::string first;
    if (!(ss >> first))
      continue;
    if (first == "units:") {
      std::string unit;
      ss >> unit;
      if (unit != "au")
        fail(ErrorCode::invalid_argument,
             path + ":" + std::to_string(line_no) + ": unsupported units '" +
                 unit + "'");
      atomic_units = true;
      continue;
    }
    double zi = 0.0, vi = 0.0;
    std::istringstream row(line);
    if (!(row >> zi >> vi))
      fail(ErrorCode::invalid_argument,
           path + ":" + std::to_string(line_no) + ": expected two numbers");
    if (!atomic_units) {
      zi = c.to_au(zi, Dimension::length);
      vi = c.to_au(vi, Dimension::energy);
    }
    z.push_back(zi);
    v.push_back(vi);
  }
  return tabulated(std::move(z), std::move(v));
}

double PotentialModel::z_floor() const {
  return table_ ? table_->z.front() : 0.0;
}

std::string PotentialModel::id() const {
  std::ostringstream os;
  os.precision(10);
  switch (kind_) {
  case PotentialKind::pure_quartic:
    os << "pure_quartic(C4=" << C4_ << ")";
    break;
  case PotentialKind::two_scale:
    os << "two_scale(C3=" << C3_ << ",C4=" << C4_ << ")";
    break;
  case PotentialKind::tabulated:
    os << "tabulated(n=" << table_->z.size() << ",z=[" << table_->z.front()
       << "," << table_->z.back() << "],C4_tail=" << C4_ << ",fnv=" << std::hex
       << table_->digest << std::dec << ")";
    break;
  }
  return os.str();
}

double PotentialModel::operator()(double z) const {
  if (!(z > 0.0))
    fail(ErrorCode::domain, "potential evaluated at z <= 0");
  switch (kind_) {
  case PotentialKind::pure_quartic: {
    const double z2 = z * z;
    return -C4_ / (z2 * z2);
  }
  case PotentialKind::two_scale:
    return -C4_ / (z * z * z * (z + C4_ / C3_));
  case PotentialKind::tabulated: {
    const Table &t = *table_;
    if (z < t.z.front())
      return t.v.front() * std::pow(t.z.front() / z, t.low_power);
    if (z > t.z.back()) {
      const double z2 = z * z;
      return -t.tail_C4 / (z2 * z2);
    }
    return -std::exp(t.log_interp(std::log(z)));
  }
  }
  return 0.0;
}

PotentialDerivs PotentialModel::derivs(double z) const {
  if (!(z > 0.0))
    fail(ErrorCode::domain, "potential evaluated at z <= 0");
  switch (kind_) {
  case PotentialKind::pure_quartic: {
    const double zi = 1.0 / z;
    const double zi4 = zi * zi * zi * zi;
    return {-C4_ * zi4, 4.0 * C4_ * zi4 * zi, -20.0 * C4_ * zi4 * zi * zi};
  }
  case PotentialKind::two_scale: {
    const double l = C4_ / C3_;
    const double zi = 1.0 / z;
    const double wi = 1.0 / (z + l);
    const double zi3 = zi * zi * zi;
    const double f = zi3 * wi;
    const double f1 = -3.0 * zi3 * zi * wi - zi3 * wi * wi;
    const double f2 = 12.0 * zi3 * zi * zi * wi + 6.0 * zi3 * zi * wi * wi +
                      2.0 * zi3 * wi * wi * wi;
    return {-C4_ * f, -C4_ * f1, -C4_ * f2};
  }
  case PotentialKind::tabulated: {
    const double h = z * 1e-4;
    const double fm2 = (*this)(z - 2 * h), fm1 = (*this)(z - h);
    const double f0 = (*this)(z);
    const double fp1 = (*this)(z + h), fp2 = (*this)(z + 2 * h);
    return {f0, (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h),
            (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h)};
  }
  }
  return {};
}

double v_pol(double z, double rho, double Q, double alpha_p) {
  const double s = z * z + rho * rho;
  if (!(s > 0.0))
    fail(ErrorCode::domain, "polarization potential is singular at z = rho = 0");
  return -alpha_p * Q * Q / (2.0 * s * s);
}

PotentialDerivs v_pol_derivs(double z, double rho, double Q, double alpha_p) {
  const double s = z * z + rho * rho;
  if (!(s > 0.0))
    fail(ErrorCode::domain, "polarization potential is singular at z = rho = 0");
  const double A = 0.5 * alpha_p * Q * Q;
  const double si = 1.0 / s;
  const double si3 = si * si * si;
  return {-A * si * si, 4.0 * A * z * si3,
          4.0 * A * si3 - 24.0 * A * z * z * si3 * si};
}

double v_total(const PotentialModel &model, const Constants &c, double z,
               double rho, double Q, Gravity gravity, double energy_offset) {
  if (!(z > 0.0))
    fail(ErrorCode::domain, "v_total requires z > 0");
  double v = model(z) + v_pol(z, rho, Q, c.alpha_p) - energy_offset;
  if (gravity == Gravity::included)
    v += c.M_au() * c.g_au() * z;
  return v;
}

PotentialDerivs v_total_derivs(const PotentialModel &model, const Constants &c,
                               double z, double rho, double Q,
                               Gravity gravity) {
  if (!(z > 0.0))
    fail(ErrorCode::domain, "v_total requires z > 0");
  PotentialDerivs a = model.derivs(z);
  const PotentialDerivs b = v_pol_derivs(z, rho, Q, c.alpha_p);
  a.v += b.v;
  a.d1 += b.d1;
  a.d2 += b.d2;
  if (gravity == Gravity::included) {
    const double Mg = c.M_au() * c.g_au();
    a.v += Mg * z;
    a.d1 += Mg;
  }
  return a;
}

namespace {
[[noreturn]] void forbidden(double z) {
  std::ostringstream os;
  os.precision(17);
  os << "classically forbidden region at z = " << z << " a.u.";
  fail(ErrorCode::forbidden_region, os.str());
}
} // namespace

double classical_momentum(const PotentialModel &model, const Constants &c,
                          double z, double rho, double Q, double E,
                          Gravity gravity) {
  const double radicand =
      2.0 * c.m_au() * (E - v_total(model, c, z, rho, Q, gravity));
  if (!(radicand >= 0.0))
    forbidden(z);
  return std::sqrt(radicand);
}

double badland(const PotentialModel &model, const Constants &c, double z,
               double rho, double Q, double E, Gravity gravity) {
  if (!model.has_analytic_derivatives())
    return badland_numeric(model, c, z, rho, Q, E, gravity);
  const PotentialDerivs d = v_total_derivs(model, c, z, rho, Q, gravity);
  const double m = c.m_au();
  const double p2 = 2.0 * m * (E - d.v);
  if (!(p2 > 0.0))
    forbidden(z);
  // With p' = -m V'/p and p'' = -m V''/p - m^2 V'^2/p^3.
  const double p4 = p2 * p2;
  return -m * d.d2 / (2.0 * p4) - 1.25 * m * m * d.d1 * d.d1 / (p4 * p2);
}

double badland_numeric(const PotentialModel &model, const Constants &c,
                       double z, double rho, double Q, double E,
                       Gravity gravity, double rel_step) {
  const double h = z * rel_step;
  auto p = [&](double zz) {
    return classical_momentum(model, c, zz, rho, Q, E, gravity);
  };
  const double fm2 = p(z - 2 * h), fm1 = p(z - h), f0 = p(z);
  const double fp1 = p(z + h), fp2 = p(z + 2 * h);
  const double p1 = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
  const double p2 = (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
  const double r = p1 / (f0 * f0);
  return p2 / (2.0 * f0 * f0 * f0) - 0.75 * r * r;
}

std::vector<std::pair<double, double>>
badland_intervals(const PotentialModel &model, const Constants &c, double rho,
                  double Q, double E, double z_lo, double z_hi, int n_grid,
                  Gravity gravity) {
  if (!(z_lo > 0.0) || !(z_hi > z_lo) || n_grid < 2)
    fail(ErrorCode::invalid_argument, "badland_intervals: bad z range");
  auto excess = [&](double z) {
    return std::abs(badland(model, c, z, rho, Q, E, gravity)) - 1.0;
  };
  auto crossing = [&](double a, double b) {
    // excess(a) and excess(b) have opposite signs
    const bool a_inside = excess(a) >= 0.0;
    for (int it = 0; it < 200 && (b - a) > 1e-12 * b; ++it) {
      const double mid = std::sqrt(a * b);
      if ((excess(mid) >= 0.0) == a_inside)
        a = mid;
      else
        b = mid;
    }
    return std::sqrt(a * b);
  };

  std::vector<std::pair<double, double>> out;
  const double ratio = std::log(z_hi / z_lo) / (n_grid - 1);
  double z_prev = z_lo;
  bool inside = excess(z_lo) >= 0.0;
  double start = z_lo;
  for (int i = 1; i < n_grid; ++i) {
    const double z = (i == n_grid - 1) ? z_hi : z_lo * std::exp(ratio * i);
    const bool now = excess(z) >= 0.0;
    if (now != inside) {
      const double edge = crossing(z_prev, z);
      if (now)
        start = edge;
      else
        out.emplace_back(start, edge);
      inside = now;
    }
    z_prev = z;
  }
  if (inside)
    out.emplace_back(start, z_hi);
  return out;
}

} // namespace hbarq
