// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#ifndef PARMOR_CONFIG_HPP
#define PARMOR_CONFIG_HPP

#include <string>

#include "parmor/fom.hpp"
#include "parmor/ini.hpp"
#include "parmor/rom.hpp"

namespace parmor {

// A full batch-run description: which model to reduce, the ansatz, the
// optimizer tolerances, sampling and evaluation grids, and where artifacts
// land. Parsed from the flat key=value format; every validation failure is a
// ConfigError pointing at the offending line.
//
//   [fom]        source = msd | manifest; msd takes n/m/k/c, manifest a path
//   [domain]     lo / hi (whitespace-separated per axis; msd defaults apply)
//   [rom]        r, kappa, ph_mode, psd_safe_mode, eps_r, eps_q
//   [optimizer]  gamma_u (auto | number), eps1, eps2, inner_budget, seed,
//                threads, timing
//   [sampling]   omega_lo, omega_hi, omega_count, p_count, vertex_budget
//   [evaluate]   omega_count, p_count, h2
//   [output]     dir
//
// Only [fom] is mandatory; everything else defaults to the values below.
struct RunConfig {
  // [fom]
  bool use_msd = true;
  Index msd_n = 50;
  double msd_m = 4.0, msd_k = 4.0, msd_c = 1.0;
  std::string manifest_path;
  // [domain] (empty means "take the model's own domain")
  Box domain{Vec(), Vec()};
  // [rom]
  Index r = 10;
  Index kappa = 2;
  bool ph_mode = false;
  bool psd_safe_mode = false;
  double eps_r = 1e-8, eps_q = 1e-8;
  // [optimizer]
  double gamma_u = 0.0; // <= 0 means auto
  double eps1 = 1e-2, eps2 = 1e-6;
  Index inner_budget = 0;
  uint64_t seed = 1;
  int threads = 1;
  bool timing = false;
  // [sampling]
  double omega_lo = 1e-3, omega_hi = 1e3;
  Index omega_count = 10;
  Index p_count = 5;
  Index vertex_budget = 20000;
  // [evaluate]
  Index eval_omega_count = 400;
  Index eval_p_count = 100;
  bool eval_h2 = true;
  // [output]
  std::string out_dir = "out";
};

RunConfig run_config_from_ini(const IniFile &ini);
RunConfig load_run_config(const std::string &path);

// Instantiate the configured full-order model (builtin chain or manifest;
// manifest paths resolve relative to the config file's directory).
ParamSeparableLTI build_fom(const RunConfig &cfg);

// The run's parameter box: the configured [domain] when present, otherwise
// the model's own.
Box resolve_domain(const RunConfig &cfg, const ParamSeparableLTI &fom);

// Hat-family ansatz of size kappa per family over the given box; the config
// format supports one parameter axis (the library API has no such limit).
AnsatzSpec build_ansatz(const RunConfig &cfg, const Box &domain);

} // namespace parmor

#endif // PARMOR_CONFIG_HPP
