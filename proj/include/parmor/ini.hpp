// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_INI_HPP
#define PARMOR_INI_HPP

#include <optional>
#include <string>
#include <vector>

#include "parmor/types.hpp"

namespace parmor {

// Minimal line-oriented config format shared by run configs, model
// manifests, and ROM files:
//
//   # comment (also ';'); blank lines ignored
//   [section]          <- sections may repeat; order is preserved
//   key = value        <- value is everything after the first '=', trimmed;
//                         keys may repeat within a section (ordered list)
//
// Every entry remembers its line number so validation errors can point at
// the offending line.
struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;

  const IniEntry *find(const std::string &key) const;
  std::vector<const IniEntry *> find_all(const std::string &key) const;

  // Typed getters; throw ConfigError anchored at the entry's line on bad
  // values, and on missing keys for the require_* forms.
  std::string require_string(const std::string &key) const;
  double require_double(const std::string &key) const;
  long long require_int(const std::string &key) const;
  std::string get_string(const std::string &key, const std::string &dflt) const;
  double get_double(const std::string &key, double dflt) const;
  long long get_int(const std::string &key, long long dflt) const;
  bool get_bool(const std::string &key, bool dflt) const;
  // Whitespace-separated list of doubles.
  std::vector<double> require_doubles(const std::string &key) const;

  [[noreturn]] void fail(const std::string &msg, int line) const;
};

struct IniFile {
  std::string origin; // path or pseudo-name, used in error messages
  std::vector<IniSection> sections;

  static IniFile parse_file(const std::string &path);
  static IniFile parse_string(const std::string &text, const std::string &origin);

  // First section with the given name, or null.
  const IniSection *find(const std::string &name) const;
  std::vector<const IniSection *> find_all(const std::string &name) const;
};

} // namespace parmor

#endif // PARMOR_INI_HPP
