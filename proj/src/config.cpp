// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include "parmor/config.hpp"

#include <filesystem>
#include <string>

#include "parmor/matrix_market.hpp"

namespace parmor {

namespace {

Vec to_vec(const std::vector<double> &values)
{
  Vec out(static_cast<Index>(values.size()));
  for (size_t i = 0; i < values.size(); i++)
  {
    out[static_cast<Index>(i)] = values[i];
  }
  return out;
}

} // namespace

RunConfig run_config_from_ini(const IniFile &ini)
{
  RunConfig cfg;

  const IniSection *fom = ini.find("fom");
  if (fom == nullptr)
  {
    throw ConfigError(ini.origin + ": missing required [fom] section");
  }
  const std::string source = fom->get_string("source", "msd");
  if (source == "msd")
  {
    cfg.use_msd = true;
    cfg.msd_n = static_cast<Index>(fom->get_int("n", cfg.msd_n));
    cfg.msd_m = fom->get_double("m", cfg.msd_m);
    cfg.msd_k = fom->get_double("k", cfg.msd_k);
    cfg.msd_c = fom->get_double("c", cfg.msd_c);
    if (cfg.msd_n < 1 || !(cfg.msd_m > 0.0) || !(cfg.msd_k > 0.0) || !(cfg.msd_c > 0.0))
    {
      fom->fail("chain needs n >= 1 and positive m, k, c", fom->line);
    }
    cfg.domain = Box{Vec::Constant(1, 0.5), Vec::Constant(1, 1.5)};
  }
  else if (source == "manifest")
  {
    cfg.use_msd = false;
    const IniEntry *path = fom->find("path");
    if (path == nullptr || path->value.empty())
    {
      fom->fail("manifest source needs a path", fom->line);
    }
    namespace fs = std::filesystem;
    fs::path resolved(path->value);
    if (resolved.is_relative() && !ini.origin.empty() && ini.origin != "<string>")
    {
      resolved = fs::path(ini.origin).parent_path() / resolved;
    }
    if (!fs::exists(resolved))
    {
      fom->fail("manifest file does not exist: " + resolved.string(), path->line);
    }
    cfg.manifest_path = resolved.string();
    cfg.domain = Box{Vec(), Vec()}; // resolved from the manifest later
  }
  else
  {
    fom->fail("unknown fom source '" + source + "' (expected msd or manifest)",
              fom->line);
  }

  if (const IniSection *domain = ini.find("domain"))
  {
    cfg.domain.lo = to_vec(domain->require_doubles("lo"));
    cfg.domain.hi = to_vec(domain->require_doubles("hi"));
    if (cfg.domain.lo.size() != cfg.domain.hi.size())
    {
      domain->fail("lo and hi have different lengths", domain->line);
    }
    for (Index i = 0; i < cfg.domain.lo.size(); i++)
    {
      if (!(cfg.domain.hi[i] > cfg.domain.lo[i]))
      {
        domain->fail("domain axis " + std::to_string(i) + " is empty (lo >= hi)",
                     domain->line);
      }
    }
  }

  if (const IniSection *rom = ini.find("rom"))
  {
    cfg.r = static_cast<Index>(rom->get_int("r", cfg.r));
    cfg.kappa = static_cast<Index>(rom->get_int("kappa", cfg.kappa));
    cfg.ph_mode = rom->get_bool("ph_mode", cfg.ph_mode);
    cfg.psd_safe_mode = rom->get_bool("psd_safe_mode", cfg.psd_safe_mode);
    cfg.eps_r = rom->get_double("eps_r", cfg.eps_r);
    cfg.eps_q = rom->get_double("eps_q", cfg.eps_q);
    if (cfg.r < 1)
    {
      rom->fail("reduced order r must be at least 1", rom->line);
    }
    if (cfg.kappa < 1)
    {
      rom->fail("kappa must be at least 1", rom->line);
    }
    if (cfg.eps_r < 0.0 || cfg.eps_q < 0.0)
    {
      rom->fail("diagonal shifts eps_r/eps_q cannot be negative", rom->line);
    }
  }

  if (const IniSection *opt = ini.find("optimizer"))
  {
    const std::string gamma = opt->get_string("gamma_u", "auto");
    if (gamma == "auto")
    {
      cfg.gamma_u = 0.0;
    }
    else
    {
      cfg.gamma_u = opt->require_double("gamma_u");
      if (!(cfg.gamma_u > 0.0))
      {
        opt->fail("gamma_u must be positive (or 'auto')", opt->line);
      }
    }
    cfg.eps1 = opt->get_double("eps1", cfg.eps1);
    cfg.eps2 = opt->get_double("eps2", cfg.eps2);
    cfg.inner_budget = static_cast<Index>(opt->get_int("inner_budget", cfg.inner_budget));
    const long long seed = opt->get_int("seed", static_cast<long long>(cfg.seed));
    if (seed < 0)
    {
      opt->fail("seed cannot be negative", opt->line);
    }
    cfg.seed = static_cast<uint64_t>(seed);
    cfg.threads = static_cast<int>(opt->get_int("threads", cfg.threads));
    cfg.timing = opt->get_bool("timing", cfg.timing);
    if (!(cfg.eps1 > 0.0) || !(cfg.eps2 > 0.0))
    {
      opt->fail("eps1 and eps2 must be positive", opt->line);
    }
    if (cfg.threads < 1)
    {
      opt->fail("threads must be at least 1", opt->line);
    }
  }

  if (const IniSection *sampling = ini.find("sampling"))
  {
    cfg.omega_lo = sampling->get_double("omega_lo", cfg.omega_lo);
    cfg.omega_hi = sampling->get_double("omega_hi", cfg.omega_hi);
    cfg.omega_count = static_cast<Index>(sampling->get_int("omega_count", cfg.omega_count));
    cfg.p_count = static_cast<Index>(sampling->get_int("p_count", cfg.p_count));
    cfg.vertex_budget =
        static_cast<Index>(sampling->get_int("vertex_budget", cfg.vertex_budget));
    if (!(cfg.omega_lo > 0.0) || !(cfg.omega_hi > cfg.omega_lo))
    {
      sampling->fail("frequency band must satisfy 0 < omega_lo < omega_hi",
                     sampling->line);
    }
    if (cfg.omega_count < 2 || cfg.p_count < 2)
    {
      sampling->fail("initial grids need at least two points per axis", sampling->line);
    }
    if (cfg.vertex_budget < 1)
    {
      sampling->fail("vertex_budget must be positive", sampling->line);
    }
  }

  if (const IniSection *eval = ini.find("evaluate"))
  {
    cfg.eval_omega_count =
        static_cast<Index>(eval->get_int("omega_count", cfg.eval_omega_count));
    cfg.eval_p_count = static_cast<Index>(eval->get_int("p_count", cfg.eval_p_count));
    cfg.eval_h2 = eval->get_bool("h2", cfg.eval_h2);
    if (cfg.eval_omega_count < 2 || cfg.eval_p_count < 1)
    {
      eval->fail("evaluation grids are too small", eval->line);
    }
  }

  if (const IniSection *output = ini.find("output"))
  {
    cfg.out_dir = output->get_string("dir", cfg.out_dir);
  }

  return cfg;
}

RunConfig load_run_config(const std::string &path)
{
  return run_config_from_ini(IniFile::parse_file(path));
}

ParamSeparableLTI build_fom(const RunConfig &cfg)
{
  if (cfg.use_msd)
  {
    return msd_chain(cfg.msd_n, cfg.msd_m, cfg.msd_k, cfg.msd_c);
  }
  return load_model_manifest(cfg.manifest_path);
}

Box resolve_domain(const RunConfig &cfg, const ParamSeparableLTI &fom)
{
  if (cfg.domain.lo.size() > 0)
  {
    return cfg.domain;
  }
  return fom.domain();
}

AnsatzSpec build_ansatz(const RunConfig &cfg, const Box &domain)
{
  if (domain.lo.size() != 1)
  {
    throw ConfigError("the config format drives a single parameter axis; this "
                      "model has " +
                      std::to_string(domain.lo.size()));
  }
  AnsatzSpec spec;
  spec.domain = domain;
  spec.psd_safe_mode = cfg.psd_safe_mode;
  spec.eps_R = cfg.eps_r;
  spec.eps_Q = cfg.eps_q;
  for (Family fam : kFamilies)
  {
    spec.family(fam) = uniform_hat_family(cfg.kappa, 0, domain.lo[0], domain.hi[0]);
  }
  if (cfg.ph_mode)
  {
    spec.ph_mode = true;
    spec.fC.clear();
    spec.fD.clear();
  }
  return spec;
}

} // namespace parmor
