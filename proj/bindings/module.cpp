// Copyright (c) 2026 The parmor developers
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parmor/csv.hpp"
#include "parmor/fom.hpp"
#include "parmor/lbfgs.hpp"
#include "parmor/metrics.hpp"
#include "parmor/objective.hpp"
#include "parmor/reshape.hpp"
#include "parmor/rom.hpp"
#include "parmor/rom_io.hpp"
#include "parmor/sampling.hpp"
#include "parmor/scalar_function.hpp"
#include "parmor/sobmor.hpp"
#include "parmor/types.hpp"

namespace py = pybind11;
using namespace parmor;

namespace {

AnsatzSpec hat_ansatz(Index kappa, double lo, double hi, bool ph_mode,
                      bool psd_safe_mode)
{
  AnsatzSpec spec;
  spec.domain = Box{Vec::Constant(1, lo), Vec::Constant(1, hi)};
  for (Family fam : kFamilies)
  {
    spec.family(fam) = uniform_hat_family(kappa, 0, lo, hi);
  }
  spec.psd_safe_mode = psd_safe_mode;
  if (ph_mode)
  {
    spec.ph_mode = true;
    spec.fC.clear();
    spec.fD.clear();
  }
  return spec;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Structure-preserving parametric model order reduction";

  py::register_exception<Error>(m, "ParmorError");

  // Reshaping maps between flat design vectors and matrix blocks.
  m.def("vtf", &vtf, py::arg("v"), py::arg("n"), py::arg("m"));
  m.def("ftv", &ftv, py::arg("M"));
  m.def("vtu", &vtu, py::arg("v"), py::arg("n"));
  m.def("utv", &utv, py::arg("M"));
  m.def("vtsu", &vtsu, py::arg("v"), py::arg("n"));
  m.def("sutv", &sutv, py::arg("M"));
  m.def("tri_len", &tri_len, py::arg("n"));
  m.def("strict_tri_len", &strict_tri_len, py::arg("n"));
  m.def("hat", &hat, py::arg("x"), py::arg("a"), py::arg("b"));

  py::class_<Box>(m, "Box")
      .def(py::init([](Vec lo, Vec hi) {
             return Box{std::move(lo), std::move(hi)};
           }),
           py::arg("lo"), py::arg("hi"))
      .def_readonly("lo", &Box::lo)
      .def_readonly("hi", &Box::hi);

  py::class_<AnsatzSpec>(m, "AnsatzSpec")
      .def_readonly("ph_mode", &AnsatzSpec::ph_mode)
      .def_readonly("psd_safe_mode", &AnsatzSpec::psd_safe_mode)
      .def_readonly("eps_R", &AnsatzSpec::eps_R)
      .def_readonly("eps_Q", &AnsatzSpec::eps_Q)
      .def_readonly("domain", &AnsatzSpec::domain);
  m.def("hat_ansatz", &hat_ansatz, py::arg("kappa"), py::arg("lo") = 0.5,
        py::arg("hi") = 1.5, py::arg("ph_mode") = false,
        py::arg("psd_safe_mode") = false,
        "Ansatz with a uniform hat partition of unity on every matrix family");

  py::class_<TransferSource>(m, "TransferSource")
      .def("n_u", &TransferSource::n_u)
      .def("n_y", &TransferSource::n_y)
      .def_property_readonly("domain", &TransferSource::domain)
      .def("eval", &TransferSource::eval, py::arg("s"), py::arg("p"));

  py::class_<ParamSeparableLTI, TransferSource>(m, "ParamSeparableLTI")
      .def("n_x", &ParamSeparableLTI::n_x);
  m.def("msd_chain", &msd_chain, py::arg("n_masses"), py::arg("m") = 4.0,
        py::arg("k") = 4.0, py::arg("c") = 1.0,
        "Port-Hamiltonian mass-spring-damper chain with parametric damping");

  py::class_<ParametricRom>(m, "ParametricRom")
      .def(py::init<Index, Index, Index, AnsatzSpec>(), py::arg("r"), py::arg("n_u"),
           py::arg("n_y"), py::arg("spec"))
      .def("r", &ParametricRom::r)
      .def("n_u", &ParametricRom::n_u)
      .def("n_y", &ParametricRom::n_y)
      .def("n_theta", &ParametricRom::n_theta)
      .def_property("theta", &ParametricRom::theta, &ParametricRom::set_theta)
      .def("transfer", &ParametricRom::transfer, py::arg("s"), py::arg("p"))
      .def(
          "system_matrix",
          [](const ParametricRom &rom, const Vec &p) {
            return rom.system_matrix(rom.assemble(p));
          },
          py::arg("p"))
      .def("is_ph", [](const ParametricRom &rom, const Vec &p,
                       double tol) { return is_ph(rom, p, tol); },
           py::arg("p"), py::arg("tol") = 1e-10);

  py::class_<RomTransferSource, TransferSource>(m, "RomTransferSource")
      .def(py::init<const ParametricRom &, Box>(), py::arg("rom"), py::arg("domain"),
           py::keep_alive<1, 2>());

  m.def(
      "random_theta",
      [](const ParametricRom &rom, uint64_t seed, double iota) {
        return random_theta(rom.layout(), seed, iota);
      },
      py::arg("rom"), py::arg("seed"), py::arg("iota") = 1.0);

  py::class_<SamplePoint>(m, "SamplePoint")
      .def_readonly("omega", &SamplePoint::omega)
      .def_readonly("p", &SamplePoint::p);

  m.def(
      "loss",
      [](const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
         double gamma, const std::vector<std::pair<double, Vec>> &samples,
         int threads) {
        std::vector<SamplePoint> pts;
        for (const auto &[omega, p] : samples)
        {
          pts.push_back({omega, p});
        }
        return loss(rom, theta, fom, gamma, pts, threads).value;
      },
      py::arg("rom"), py::arg("theta"), py::arg("fom"), py::arg("gamma"),
      py::arg("samples"), py::arg("threads") = 1);
  m.def(
      "loss_gradient",
      [](const ParametricRom &rom, const Vec &theta, const TransferSource &fom,
         double gamma, const std::vector<std::pair<double, Vec>> &samples,
         int threads) {
        std::vector<SamplePoint> pts;
        for (const auto &[omega, p] : samples)
        {
          pts.push_back({omega, p});
        }
        return loss_gradient(rom, theta, fom, gamma, pts, threads);
      },
      py::arg("rom"), py::arg("theta"), py::arg("fom"), py::arg("gamma"),
      py::arg("samples"), py::arg("threads") = 1);

  py::class_<SampleGrid>(m, "SampleGrid")
      .def("n_vertices", &SampleGrid::n_vertices)
      .def("n_edges", &SampleGrid::n_edges)
      .def_readonly("budget_hit", &SampleGrid::budget_hit)
      .def("samples", [](const SampleGrid &grid) {
        std::vector<std::pair<double, Vec>> out;
        for (const SamplePoint &sp : grid.samples())
        {
          out.emplace_back(sp.omega, sp.p);
        }
        return out;
      });
  m.def("initial_grid", &initial_grid, py::arg("omega_lo"), py::arg("omega_hi"),
        py::arg("domain"), py::arg("omega_count"), py::arg("p_counts"));

  py::class_<SobmorOptions>(m, "SobmorOptions")
      .def(py::init<>())
      .def_readwrite("gamma_u", &SobmorOptions::gamma_u)
      .def_readwrite("eps1", &SobmorOptions::eps1)
      .def_readwrite("eps2", &SobmorOptions::eps2)
      .def_readwrite("inner_budget", &SobmorOptions::inner_budget)
      .def_readwrite("grad_tol", &SobmorOptions::grad_tol)
      .def_readwrite("memory", &SobmorOptions::memory)
      .def_readwrite("vertex_budget", &SobmorOptions::vertex_budget)
      .def_readwrite("threads", &SobmorOptions::threads)
      .def_readwrite("timing", &SobmorOptions::timing)
      .def_readwrite("restarts", &SobmorOptions::restarts)
      .def_readwrite("restart_seed", &SobmorOptions::restart_seed);

  py::class_<BisectionIteration>(m, "BisectionIteration")
      .def_readonly("gamma", &BisectionIteration::gamma)
      .def_readonly("alpha", &BisectionIteration::alpha)
      .def_readonly("n_samples", &BisectionIteration::n_samples)
      .def_readonly("accepted", &BisectionIteration::accepted)
      .def_readonly("inner_iters", &BisectionIteration::inner_iters)
      .def_readonly("wall_ms", &BisectionIteration::wall_ms);

  py::class_<BisectionTrace>(m, "BisectionTrace")
      .def_readonly("iterations", &BisectionTrace::iterations)
      .def_readonly("gamma_u", &BisectionTrace::gamma_u)
      .def_readonly("gamma_l", &BisectionTrace::gamma_l)
      .def_readonly("theta_fin", &BisectionTrace::theta_fin)
      .def_readonly("bracket_failure", &BisectionTrace::bracket_failure)
      .def_readonly("gamma_u_certified", &BisectionTrace::gamma_u_certified)
      .def_readonly("sampling_budget_hit", &BisectionTrace::sampling_budget_hit)
      .def_property_readonly("grid", [](const BisectionTrace &trace) {
        return trace.grid;
      });

  m.def("sobmor", &sobmor, py::arg("fom"), py::arg("rom"), py::arg("theta0"),
        py::arg("initial"), py::arg("opts") = SobmorOptions{},
        "Bisection on the error level with adaptive sampling; leaves the "
        "accepted design in rom and returns the trace");

  // Error metrics.
  py::class_<HinfEstimate>(m, "HinfEstimate")
      .def_readonly("value", &HinfEstimate::value)
      .def_readonly("argmax_omega", &HinfEstimate::argmax_omega)
      .def_readonly("skipped", &HinfEstimate::skipped);
  m.def("log_omega_grid", &log_omega_grid, py::arg("lo"), py::arg("hi"),
        py::arg("count"));
  m.def("default_omega_grid", &default_omega_grid);
  m.def("uniform_axis", &uniform_axis, py::arg("lo"), py::arg("hi"), py::arg("count"));
  m.def("hinf_estimate", &hinf_estimate, py::arg("fom"), py::arg("rom"), py::arg("p"),
        py::arg("omega_grid"), py::arg("threads") = 1);
  m.def("h2_l2_estimate", &h2_l2_estimate, py::arg("fom"), py::arg("rom"),
        py::arg("p_axes"), py::arg("omega_grid"), py::arg("threads") = 1);

  // ROM file round trip.
  m.def("save_rom", &save_rom, py::arg("rom"), py::arg("path"));
  m.def("load_rom", &load_rom, py::arg("path"));
}
