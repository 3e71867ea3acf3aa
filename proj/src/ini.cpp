// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/ini.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace parmor {

namespace {

std::string trim(const std::string &s)
{
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
  {
    a++;
  }
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
  {
    b--;
  }
  return s.substr(a, b - a);
}

[[noreturn]] void fail_at(const std::string &origin, int line, const std::string &msg)
{
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string &origin, int line, const std::string &key,
                    const std::string &value)
{
  const char *begin = value.c_str();
  char *end = nullptr;
  double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
  {
    fail_at(origin, line, "key '" + key + "': '" + value + "' is not a number");
  }
  return x;
}

long long parse_int(const std::string &origin, int line, const std::string &key,
                    const std::string &value)
{
  const char *begin = value.c_str();
  char *end = nullptr;
  long long x = std::strtoll(begin, &end, 10);
  if (end == begin || *end != '\0')
  {
    fail_at(origin, line, "key '" + key + "': '" + value + "' is not an integer");
  }
  return x;
}

} // namespace

const IniEntry *IniSection::find(const std::string &key) const
{
  for (const auto &e : entries)
  {
    if (e.key == key)
    {
      return &e;
    }
  }
  return nullptr;
}

std::vector<const IniEntry *> IniSection::find_all(const std::string &key) const
{
  std::vector<const IniEntry *> out;
  for (const auto &e : entries)
  {
    if (e.key == key)
    {
      out.push_back(&e);
    }
  }
  return out;
}

void IniSection::fail(const std::string &msg, int at) const
{
  fail_at("[" + name + "]", at, msg);
}

std::string IniSection::require_string(const std::string &key) const
{
  const IniEntry *e = find(key);
  if (!e)
  {
    fail_at("[" + name + "]", line, "missing required key '" + key + "'");
  }
  return e->value;
}

double IniSection::require_double(const std::string &key) const
{
  const IniEntry *e = find(key);
  if (!e)
  {
    fail_at("[" + name + "]", line, "missing required key '" + key + "'");
  }
  return parse_double("[" + name + "]", e->line, key, e->value);
}

long long IniSection::require_int(const std::string &key) const
{
  const IniEntry *e = find(key);
  if (!e)
  {
    fail_at("[" + name + "]", line, "missing required key '" + key + "'");
  }
  return parse_int("[" + name + "]", e->line, key, e->value);
}

std::string IniSection::get_string(const std::string &key,
                                   const std::string &dflt) const
{
  const IniEntry *e = find(key);
  return e ? e->value : dflt;
}

double IniSection::get_double(const std::string &key, double dflt) const
{
  const IniEntry *e = find(key);
  return e ? parse_double("[" + name + "]", e->line, key, e->value) : dflt;
}

long long IniSection::get_int(const std::string &key, long long dflt) const
{
  const IniEntry *e = find(key);
  return e ? parse_int("[" + name + "]", e->line, key, e->value) : dflt;
}

bool IniSection::get_bool(const std::string &key, bool dflt) const
{
  const IniEntry *e = find(key);
  if (!e)
  {
    return dflt;
  }
  if (e->value == "1" || e->value == "true" || e->value == "yes" || e->value == "on")
  {
    return true;
  }
  if (e->value == "0" || e->value == "false" || e->value == "no" ||
      e->value == "off")
  {
    return false;
  }
  fail_at("[" + name + "]", e->line,
          "key '" + key + "': '" + e->value + "' is not a boolean");
}

std::vector<double> IniSection::require_doubles(const std::string &key) const
{
  const IniEntry *e = find(key);
  if (!e)
  {
    fail_at("[" + name + "]", line, "missing required key '" + key + "'");
  }
  std::istringstream in(e->value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok)
  {
    out.push_back(parse_double("[" + name + "]", e->line, key, tok));
  }
  if (out.empty())
  {
    fail_at("[" + name + "]", e->line, "key '" + key + "': empty number list");
  }
  return out;
}

IniFile IniFile::parse_string(const std::string &text, const std::string &origin)
{
  IniFile file;
  file.origin = origin;
  IniSection *current = nullptr;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw))
  {
    lineno++;
    if (!raw.empty() && raw.back() == '\r')
    {
      raw.pop_back();
    }
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#' || line[0] == ';')
    {
      continue;
    }
    if (line.front() == '[')
    {
      if (line.back() != ']' || line.size() < 3)
      {
        fail_at(origin, lineno, "malformed section header '" + line + "'");
      }
      IniSection sec;
      sec.name = trim(line.substr(1, line.size() - 2));
      sec.line = lineno;
      file.sections.push_back(std::move(sec));
      current = &file.sections.back();
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
    {
      fail_at(origin, lineno, "expected 'key = value', got '" + line + "'");
    }
    if (!current)
    {
      fail_at(origin, lineno, "key outside of any [section]");
    }
    IniEntry entry;
    entry.key = trim(line.substr(0, eq));
    entry.value = trim(line.substr(eq + 1));
    entry.line = lineno;
    if (entry.key.empty())
    {
      fail_at(origin, lineno, "empty key");
    }
    current->entries.push_back(std::move(entry));
  }
  return file;
}

IniFile IniFile::parse_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError(path + ": cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

const IniSection *IniFile::find(const std::string &name) const
{
  for (const auto &s : sections)
  {
    if (s.name == name)
    {
      return &s;
    }
  }
  return nullptr;
}

std::vector<const IniSection *> IniFile::find_all(const std::string &name) const
{
  std::vector<const IniSection *> out;
  for (const auto &s : sections)
  {
    if (s.name == name)
    {
      out.push_back(&s);
    }
  }
  return out;
}

} // namespace parmor
