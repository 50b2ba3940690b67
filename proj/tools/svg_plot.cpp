#include "svg_plot.hpp"
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hbarq_cli {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    default: out += ch;
    }
  }
  return out;
}

struct Axis {
  bool log = false;
  double lo = 0.0, hi = 1.0;

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double t(double v) const { return log ? std::log10(v) : v; }
  double frac(double v) const { return (t(v) - t(lo)) / (t(hi) - t(lo)); }

  void fit(const std::vector<double> &values) {
    double a = std::numeric_limits<double>::infinity(), b = -a;
    for (double v : values)
      if (usable(v)) {
        a = std::min(a, v);
        b = std::max(b, v);
      }
    if (!std::isfinite(a)) {
      a = log ? 1.0 : 0.0;
      b = log ? 10.0 : 1.0;
    }
    if (a == b) {
      const double pad = a == 0.0 ? 1.0 : std::abs(a) * 0.1;
      a = log ? a / 2.0 : a - pad;
      b = log ? b * 2.0 : b + pad;
    }
    lo = a;
    hi = b;
  }

  std::vector<double> ticks() const {
    std::vector<double> out;
    if (log) {
      const int e0 = static_cast<int>(std::floor(std::log10(lo)));
      const int e1 = static_cast<int>(std::ceil(std::log10(hi)));
      const int stride = std::max(1, (e1 - e0) / 8);
      for (int e = e0; e <= e1; e += stride) {
        const double v = std::pow(10.0, e);
        if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12))
          out.push_back(v);
      }
      return out;
    }
    const double raw = (hi - lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0})
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step;
         v += step)
      out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    return out;
  }
};

} // namespace

std::string render_svg(const PlotSpec &spec, const std::vector<Series> &series) {
  const double W = spec.width, H = spec.height;
  const double left = 90, right = 20, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;

  Axis ax{spec.log_x}, ay{spec.log_y};
  std::vector<double> xs, ys;
  for (const auto &s : series) {
    xs.insert(xs.end(), s.x.begin(), s.x.end());
    ys.insert(ys.end(), s.y.begin(), s.y.end());
  }
  ax.fit(xs);
  ay.fit(ys);
  auto px = [&](double x) { return left + ax.frac(x) * pw; };
  auto py = [&](double y) { return top + (1.0 - ay.frac(y)) * ph; };

  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  if (!spec.comment.empty())
    o << "<!-- " << escape(spec.comment) << " -->\n";
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
    << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width
    << ' ' << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(W / 2) << "\" y=\"22\" text-anchor=\"middle\" "
    << "font-size=\"14\">" << escape(spec.title) << "</text>\n";
  o << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
    << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : ax.ticks()) {
    const double x = px(t);
    o << "<line x1=\"" << num(x) << "\" y1=\"" << num(top + ph) << "\" x2=\""
      << num(x) << "\" y2=\"" << num(top + ph + 5) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 18)
      << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ay.ticks()) {
    const double y = py(t);
    o << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(y) << "\" x2=\""
      << num(left) << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4)
      << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  if (!ay.log && ay.lo < 0.0 && ay.hi > 0.0)
    o << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(0.0)) << "\" x2=\""
      << num(left + pw) << "\" y2=\"" << num(py(0.0))
      << "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
  o << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(H - 15)
    << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(20," << num(top + ph / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label)
    << "</text>\n";

  static const char *palette[] = {"#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad",
                                  "#d35400"};
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto &s = series[k];
    const std::string colour =
        s.colour.empty() ? palette[k % std::size(palette)] : s.colour;
    std::string pts;
    auto flush = [&] {
      if (!pts.empty())
        o << "<polyline fill=\"none\" stroke=\"" << colour
          << "\" stroke-width=\"1.2\" points=\"" << pts << "\"/>\n";
      pts.clear();
    };
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) {
        flush();
        continue;
      }
      if (!pts.empty())
        pts += ' ';
      pts += num(px(s.x[i])) + ',' + num(py(s.y[i]));
    }
    flush();
    const double ly = top + 16 + 16 * static_cast<double>(k);
    o << "<line x1=\"" << num(left + pw - 150) << "\" y1=\"" << num(ly - 4)
      << "\" x2=\"" << num(left + pw - 125) << "\" y2=\"" << num(ly - 4)
      << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << num(left + pw - 120) << "\" y=\"" << num(ly) << "\">"
      << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

} // namespace hbarq_cli
