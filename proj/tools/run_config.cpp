#include "run_config.hpp"
#include "hbarq/hbarq.h"
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hbarq_cli {

const std::vector<KeySpec> &known_keys() {
  static const std::vector<KeySpec> keys = {
      {"model", "two_scale", "two_scale | pure_quartic | tabulated"},
      {"C3", "0.25", "two-scale C3, a.u."},
      {"C4", "73.6", "C4, a.u."},
      {"table", "", "tabulated potential file (z V in a.u.)"},
      {"z_min", "0", "solver start, a.u. unless suffixed; 0 = auto"},
      {"z_max", "0", "solver matching point, a.u. unless suffixed; 0 = auto"},
      {"wkb_threshold", "1e-5", "max |B| at the solver start"},
      {"tol_rel", "1e-6", "relative accuracy of a"},
      {"max_refinements", "8", "solver refinement rounds"},
      {"boundary", "second", "plane_wave | first | second"},
      {"Q", "30", "charge list, e.g. 10,20,30 or 10:100:10"},
      {"rho_lo", "0", "first nonzero profile point, a.u. unless suffixed"},
      {"rho_hi", "0", "profile cut-off, a.u. unless suffixed"},
      {"n_initial", "240", "initial log-spaced profile points"},
      {"jump_tol", "0.02", "relative jump that triggers bisection"},
      {"max_depth", "12", "bisection depth per initial gap"},
      {"rho", "1000,2000", "badland rho list, a.u. unless suffixed"},
      {"energy", "E1", "badland energy: En, or a number in a.u."},
      {"z_lo", "1", "badland scan start, a.u. unless suffixed"},
      {"z_hi", "1e6", "badland scan end, a.u. unless suffixed"},
      {"n_grid", "4000", "badland detection grid"},
      {"n_plot", "1000", "rows of the badland table"},
      {"v", "1", "planar velocity, m/s"},
      {"d", "0", "impact parameter, m unless suffixed"},
      {"sigma", "1e12", "surface density of charges, 1/m^2"},
      {"L", "0.1", "mirror length, m unless suffixed"},
      {"N", "1", "centres passed"},
      {"n_states", "10", "gravitational states"},
      {"n_report", "101", "evolve reporting points"},
      {"force_real_a", "false", "evolve with Im a dropped"},
      {"out", ".", "output directory"},
      {"formats", "csv,svg,json", "output formats"},
      {"threads", "0", "worker threads; 0 = hardware"},
  };
  return keys;
}

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty())
      out.push_back(item);
  }
  return out;
}

double to_double(const std::string &text, const std::string &what) {
  double v = 0.0;
  const char *b = text.data(), *e = text.data() + text.size();
  const auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e || !std::isfinite(v))
    throw std::invalid_argument(what + ": not a number: '" + text + "'");
  return v;
}

} // namespace

RunConfig::RunConfig() {
  for (const auto &k : known_keys())
    values_[k.name] = k.fallback;
}

void RunConfig::load_file(const std::string &path) {
  std::ifstream f(path);
  if (!f)
    throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void RunConfig::set(const std::string &key, const std::string &value) {
  if (values_.find(key) == values_.end())
    throw std::invalid_argument("unknown configuration key '" + key + "'");
  values_[key] = value;
}

const std::string &RunConfig::raw(const std::string &key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("unknown configuration key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string &key) const {
  return to_double(raw(key), key);
}

int RunConfig::integer(const std::string &key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw std::invalid_argument(key + ": expected an integer");
  return static_cast<int>(v);
}

bool RunConfig::flag(const std::string &key) const {
  const std::string &v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on")
    return true;
  if (v == "false" || v == "0" || v == "no" || v == "off")
    return false;
  throw std::invalid_argument(key + ": expected true or false");
}

std::vector<double> RunConfig::number_list(const std::string &key) const {
  std::vector<double> out;
  for (const auto &item : split(raw(key), ',')) {
    const auto parts = split(item, ':');
    if (parts.size() == 3) {
      const double a = to_double(parts[0], key), b = to_double(parts[1], key),
                   step = to_double(parts[2], key);
      if (!(step > 0.0) || b < a)
        throw std::invalid_argument(key + ": range needs start <= end, step > 0");
      const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
      for (long i = 0; i <= n; ++i)
        out.push_back(a + step * static_cast<double>(i));
    } else if (parts.size() == 1) {
      out.push_back(to_double(parts[0], key));
    } else {
      throw std::invalid_argument(key + ": bad list item '" + item + "'");
    }
  }
  if (out.empty())
    throw std::invalid_argument(key + ": empty list");
  return out;
}

double parse_length_au(const std::string &text, const std::string &bare_unit) {
  static const std::pair<const char *, double> suffixes[] = {
      {"au", 0.0}, {"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0}};
  std::string t = trim(text);
  std::string unit = bare_unit;
  for (const auto &[suf, scale] : suffixes) {
    const std::string s(suf);
    if (t.size() > s.size() && t.compare(t.size() - s.size(), s.size(), s) == 0 &&
        !std::isalpha(static_cast<unsigned char>(t[t.size() - s.size() - 1]))) {
      unit = s;
      t = trim(t.substr(0, t.size() - s.size()));
      break;
    }
  }
  const double v = to_double(t, "length");
  if (unit == "au")
    return v;
  double scale = 1.0;
  for (const auto &[suf, sc] : suffixes)
    if (unit == suf)
      scale = sc;
  hbarq_constants c;
  hbarq_constants_default(&c);
  double out = 0.0;
  if (hbarq_to_au(&c, "length", v * scale, &out) != HBARQ_OK)
    throw std::invalid_argument(hbarq_last_error());
  return out;
}

double RunConfig::length_au(const std::string &key,
                            const std::string &bare_unit) const {
  try {
    return parse_length_au(raw(key), bare_unit);
  } catch (const std::invalid_argument &e) {
    throw std::invalid_argument(key + ": " + e.what());
  }
}

std::vector<double> RunConfig::length_list_au(const std::string &key,
                                              const std::string &bare_unit) const {
  std::vector<double> out;
  for (const auto &item : split(raw(key), ','))
    out.push_back(parse_length_au(item, bare_unit));
  if (out.empty())
    throw std::invalid_argument(key + ": empty list");
  return out;
}

bool RunConfig::has_format(const std::string &fmt) const {
  const auto f = split(raw("formats"), ',');
  return std::find(f.begin(), f.end(), fmt) != f.end();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto &[k, v] : values_) {
    // Thread count and output location do not change any emitted value.
    if (k == "threads" || k == "out")
      continue;
    for (char ch : k + "=" + v + "\n") {
      h ^= static_cast<unsigned char>(ch);
      h *= 1099511628211ull;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace hbarq_cli
