// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/SVD>

#include "parmor/config.hpp"
#include "parmor/csv.hpp"
#include "parmor/log.hpp"
#include "parmor/matrix_market.hpp"
#include "parmor/metrics.hpp"
#include "parmor/rom_io.hpp"
#include "parmor/sampling.hpp"
#include "parmor/sobmor.hpp"
#include "parmor/types.hpp"

namespace fs = std::filesystem;
using namespace parmor;

namespace {

struct Overrides {
  long seed = -1;
  int threads = 0;
  std::string out;
};

RunConfig load_with_overrides(const std::string &config_path, const Overrides &ov)
{
  RunConfig cfg = load_run_config(config_path);
  if (ov.seed >= 0)
  {
    cfg.seed = static_cast<unsigned>(ov.seed);
  }
  if (ov.threads > 0)
  {
    cfg.threads = ov.threads;
  }
  if (!ov.out.empty())
  {
    cfg.out_dir = ov.out;
  }
  return cfg;
}

void ensure_out_dir(const std::string &dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw IngestionError(dir + ": cannot create output directory: " + ec.message());
  }
}

SampleGrid training_grid(const RunConfig &cfg, const Box &domain)
{
  const std::vector<Index> p_counts(static_cast<size_t>(domain.dim()), cfg.p_count);
  return initial_grid(cfg.omega_lo, cfg.omega_hi, domain, cfg.omega_count, p_counts);
}

int cmd_reduce(const std::string &config_path, const Overrides &ov)
{
  const RunConfig cfg = load_with_overrides(config_path, ov);
  const ParamSeparableLTI fom = build_fom(cfg);
  const Box domain = resolve_domain(cfg, fom);
  const AnsatzSpec spec = build_ansatz(cfg, domain);

  ParametricRom rom(cfg.r, fom.n_u(), fom.n_y(), spec);
  const Vec theta0 = random_theta(rom.layout(), cfg.seed);
  log::info("reduce: n_x=" + std::to_string(fom.n_x()) + " -> r=" +
            std::to_string(cfg.r) + ", n_theta=" + std::to_string(rom.n_theta()));

  SobmorOptions opts;
  opts.gamma_u = cfg.gamma_u;
  opts.eps1 = cfg.eps1;
  opts.eps2 = cfg.eps2;
  opts.inner_budget = cfg.inner_budget;
  opts.vertex_budget = cfg.vertex_budget;
  opts.threads = cfg.threads;
  opts.timing = cfg.timing;

  const BisectionTrace trace = sobmor(fom, rom, theta0, training_grid(cfg, domain), opts);

  ensure_out_dir(cfg.out_dir);
  const fs::path out(cfg.out_dir);
  save_rom(rom, (out / "rom.txt").string());
  write_trace_csv(trace, (out / "trace.csv").string());
  write_grid_csv(trace.grid, (out / "grid.csv").string());
  log::info("reduce: gamma_u=" + fmt_float(trace.gamma_u) + " after " +
            std::to_string(trace.iterations.size()) + " bisection steps; artifacts in " +
            cfg.out_dir);
  return 0;
}

int cmd_evaluate(const std::string &rom_path, const std::string &config_path,
                 const Overrides &ov)
{
  const RunConfig cfg = load_with_overrides(config_path, ov);
  const ParametricRom rom = load_rom(rom_path);
  const ParamSeparableLTI fom = build_fom(cfg);
  if (rom.n_u() != fom.n_u() || rom.n_y() != fom.n_y())
  {
    throw ConfigError(rom_path + ": rom is " + std::to_string(rom.n_y()) + "x" +
                      std::to_string(rom.n_u()) + " but the model is " +
                      std::to_string(fom.n_y()) + "x" + std::to_string(fom.n_u()));
  }
  const Box domain = resolve_domain(cfg, fom);
  const RomTransferSource rom_source(rom, domain);

  const Vec omega = log_omega_grid(cfg.omega_lo, cfg.omega_hi, cfg.eval_omega_count);
  std::vector<Vec> axes;
  for (Index ax = 0; ax < domain.dim(); ax++)
  {
    axes.push_back(uniform_axis(domain.lo[ax], domain.hi[ax], cfg.eval_p_count));
  }

  ErrorReport report =
      hinf_linf_estimate(fom, rom_source, tensor_points(axes), omega, cfg.threads);
  if (cfg.eval_h2)
  {
    report.h2_l2 = h2_l2_estimate(fom, rom_source, axes, omega, cfg.threads);
  }

  ensure_out_dir(cfg.out_dir);
  write_error_report_csv(report, (fs::path(cfg.out_dir) / "report.csv").string());
  log::info("evaluate: hinf_linf=" + fmt_float(report.hinf_linf) +
            (report.h2_l2 ? " h2_l2=" + fmt_float(*report.h2_l2) : std::string()) +
            "; report in " + cfg.out_dir);
  return 0;
}

int cmd_generate_msd(long n, double m, double k, double c, const std::string &out)
{
  const ParamSeparableLTI model = msd_chain(static_cast<Index>(n), m, k, c);
  save_model_manifest(model, out);
  log::info("generate-msd: wrote " + std::to_string(model.n_x()) +
            "-state chain manifest to " + out);
  return 0;
}

int cmd_grid_dump(const std::string &config_path, const Overrides &ov)
{
  const RunConfig cfg = load_with_overrides(config_path, ov);
  const ParamSeparableLTI fom = build_fom(cfg);
  const Box domain = resolve_domain(cfg, fom);

  SampleGrid grid = training_grid(cfg, domain);
  evaluate_field(
      grid,
      [&](const SamplePoint &sp) {
        const CMat h = fom.eval(Complex(0.0, sp.omega), sp.p);
        return Eigen::JacobiSVD<CMat>(h).singularValues()(0);
      },
      cfg.threads);

  ensure_out_dir(cfg.out_dir);
  write_grid_csv(grid, (fs::path(cfg.out_dir) / "grid.csv").string());
  log::info("grid-dump: " + std::to_string(grid.n_vertices()) + " vertices, " +
            std::to_string(grid.n_edges()) + " edges; grid in " + cfg.out_dir);
  return 0;
}

template <typename Fn> int guarded(Fn &&fn)
{
  try
  {
    return fn();
  }
  catch (const ConfigError &e)
  {
    log::error(e.what());
    return 2;
  }
  catch (const std::exception &e)
  {
    log::error(e.what());
    return 1;
  }
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"parmor: structure-preserving parametric model reduction"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path, rom_path;
  long msd_n = 50;
  double msd_m = 4.0, msd_k = 4.0, msd_c = 1.0;
  std::string msd_out = "msd_model";

  auto add_common = [&](CLI::App *cmd, bool with_seed) {
    cmd->add_option("--config", config_path, "run configuration file")->required();
    if (with_seed)
    {
      cmd->add_option("--seed", ov.seed, "override the configured RNG seed");
    }
    cmd->add_option("--threads", ov.threads, "override the configured worker count");
    cmd->add_option("--out", ov.out, "override the configured output directory");
  };

  CLI::App *reduce = app.add_subcommand(
      "reduce", "fit a reduced model and write rom.txt, trace.csv, grid.csv");
  add_common(reduce, true);

  CLI::App *evaluate = app.add_subcommand(
      "evaluate", "compare a saved rom against the configured model; write report.csv");
  evaluate->add_option("rom", rom_path, "rom file produced by reduce")->required();
  add_common(evaluate, false);

  CLI::App *generate = app.add_subcommand(
      "generate-msd", "write a mass-spring-damper chain as a model manifest");
  generate->add_option("--n", msd_n, "number of masses")->check(CLI::PositiveNumber);
  generate->add_option("--m", msd_m, "mass")->check(CLI::PositiveNumber);
  generate->add_option("--k", msd_k, "stiffness")->check(CLI::PositiveNumber);
  generate->add_option("--c", msd_c, "damping")->check(CLI::PositiveNumber);
  generate->add_option("--out", msd_out, "output directory");

  CLI::App *grid_dump = app.add_subcommand(
      "grid-dump", "evaluate the model's gain on the start grid; write grid.csv");
  add_common(grid_dump, false);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (reduce->parsed())
  {
    return guarded([&] { return cmd_reduce(config_path, ov); });
  }
  if (evaluate->parsed())
  {
    return guarded([&] { return cmd_evaluate(rom_path, config_path, ov); });
  }
  if (generate->parsed())
  {
    return guarded([&] { return cmd_generate_msd(msd_n, msd_m, msd_k, msd_c, msd_out); });
  }
  return guarded([&] { return cmd_grid_dump(config_path, ov); });
}
