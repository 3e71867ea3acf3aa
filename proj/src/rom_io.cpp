// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/rom_io.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "parmor/csv.hpp"
#include "parmor/ini.hpp"

namespace parmor {

namespace {

constexpr const char *kMagic = "# parmor rom v1";

std::string family_key(Family fam)
{
  return std::string("f") + family_name(fam);
}

Vec parse_bound(const IniSection &section, const std::string &key)
{
  const std::vector<double> values = section.require_doubles(key);
  Vec out(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); i++)
  {
    out[static_cast<Index>(i)] = values[i];
  }
  return out;
}

} // namespace

std::string rom_to_string(const ParametricRom &rom)
{
  const AnsatzSpec &spec = rom.ansatz();
  std::ostringstream out;
  out << kMagic << "\n";
  out << "[dims]\n";
  out << "r = " << rom.r() << "\n";
  out << "n_u = " << rom.n_u() << "\n";
  out << "n_y = " << rom.n_y() << "\n";
  out << "[ansatz]\n";
  out << "psd_safe_mode = " << (spec.psd_safe_mode ? 1 : 0) << "\n";
  out << "ph_mode = " << (spec.ph_mode ? 1 : 0) << "\n";
  out << "eps_r = " << fmt_float(spec.eps_R) << "\n";
  out << "eps_q = " << fmt_float(spec.eps_Q) << "\n";
  if (spec.domain.lo.size() > 0)
  {
    out << "domain_lo =";
    for (Index i = 0; i < spec.domain.lo.size(); i++)
    {
      out << " " << fmt_float(spec.domain.lo[i]);
    }
    out << "\n";
    out << "domain_hi =";
    for (Index i = 0; i < spec.domain.hi.size(); i++)
    {
      out << " " << fmt_float(spec.domain.hi[i]);
    }
    out << "\n";
  }
  for (Family fam : kFamilies)
  {
    for (const ScalarFunction &f : spec.family(fam))
    {
      out << family_key(fam) << " = " << f.describe() << "\n";
    }
  }
  out << "[theta]\n";
  const Vec &theta = rom.theta();
  for (Index i = 0; i < theta.size(); i++)
  {
    out << "v = " << fmt_float(theta[i]) << "\n";
  }
  return out.str();
}

ParametricRom rom_from_string(const std::string &text, const std::string &origin)
{
  if (text.rfind(kMagic, 0) != 0)
  {
    throw IngestionError(origin + ": not a parmor rom file (missing '" +
                         std::string(kMagic) + "' header)");
  }
  const IniFile ini = IniFile::parse_string(text, origin);

  const IniSection *dims = ini.find("dims");
  const IniSection *ansatz = ini.find("ansatz");
  const IniSection *theta_sec = ini.find("theta");
  if (dims == nullptr || ansatz == nullptr || theta_sec == nullptr)
  {
    throw IngestionError(origin + ": rom file needs [dims], [ansatz] and [theta]");
  }

  const Index r = static_cast<Index>(dims->require_int("r"));
  const Index n_u = static_cast<Index>(dims->require_int("n_u"));
  const Index n_y = static_cast<Index>(dims->require_int("n_y"));

  AnsatzSpec spec;
  spec.psd_safe_mode = ansatz->get_bool("psd_safe_mode", false);
  spec.ph_mode = ansatz->get_bool("ph_mode", false);
  spec.eps_R = ansatz->get_double("eps_r", 1e-8);
  spec.eps_Q = ansatz->get_double("eps_q", 1e-8);
  if (ansatz->find("domain_lo") != nullptr || ansatz->find("domain_hi") != nullptr)
  {
    spec.domain.lo = parse_bound(*ansatz, "domain_lo");
    spec.domain.hi = parse_bound(*ansatz, "domain_hi");
    if (spec.domain.lo.size() != spec.domain.hi.size())
    {
      ansatz->fail("domain bounds have different lengths", ansatz->line);
    }
  }
  for (Family fam : kFamilies)
  {
    for (const IniEntry *entry : ansatz->find_all(family_key(fam)))
    {
      try
      {
        spec.family(fam).push_back(ScalarFunction::parse(entry->value));
      }
      catch (const Error &e)
      {
        ansatz->fail(e.what(), entry->line);
      }
    }
  }

  ParametricRom rom(r, n_u, n_y, spec);

  const std::vector<const IniEntry *> values = theta_sec->find_all("v");
  if (static_cast<Index>(values.size()) != rom.n_theta())
  {
    theta_sec->fail("expected " + std::to_string(rom.n_theta()) +
                        " theta entries, found " + std::to_string(values.size()),
                    theta_sec->line);
  }
  Vec theta(rom.n_theta());
  for (size_t i = 0; i < values.size(); i++)
  {
    try
    {
      theta[static_cast<Index>(i)] = std::stod(values[i]->value);
    }
    catch (const std::exception &)
    {
      theta_sec->fail("bad theta entry '" + values[i]->value + "'", values[i]->line);
    }
  }
  rom.set_theta(theta);
  return rom;
}

void save_rom(const ParametricRom &rom, const std::string &path)
{
  atomic_write_file(path, rom_to_string(rom));
}

ParametricRom load_rom(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IngestionError("cannot open rom file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return rom_from_string(buffer.str(), path);
}

} // namespace parmor
