#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hbarq_cli {

//! A recognised configuration key with its default and bare-number unit.
struct KeySpec {
  const char *name;
  const char *fallback;
  const char *help;
};

const std::vector<KeySpec> &known_keys();

//! key=value settings. Later sources override earlier ones; keys outside
//! known_keys() are rejected.
class RunConfig {
public:
  RunConfig();

  //! Lines "key = value"; blank lines and '#' comments ignored.
  void load_file(const std::string &path);
  void set(const std::string &key, const std::string &value);

  const std::string &raw(const std::string &key) const;
  double number(const std::string &key) const;
  int integer(const std::string &key) const;
  bool flag(const std::string &key) const;
  std::vector<double> number_list(const std::string &key) const;
  //! Length in a.u.; suffixes au, m, mm, um, nm. Bare numbers use
  //! `bare_unit` ("au" or "m").
  double length_au(const std::string &key, const std::string &bare_unit) const;
  std::vector<double> length_list_au(const std::string &key,
                                     const std::string &bare_unit) const;
  bool has_format(const std::string &fmt) const;

  //! FNV-1a 64 of the sorted effective settings, 16 hex digits.
  std::string hash() const;
  const std::map<std::string, std::string> &values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

double parse_length_au(const std::string &text, const std::string &bare_unit);

} // namespace hbarq_cli
