// SPDX-License-Identifier: Apache-2.0
//
// wfmaxwell: Maxwell eigenvalues with vector Lagrange elements on
// Worsey-Farin refined box meshes.
//
// Exit codes: 0 success, 2 validation failure, 3 resource cap exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wfm/assembly.hpp"
#include "wfm/dof_map.hpp"
#include "wfm/error.hpp"
#include "wfm/experiments.hpp"
#include "wfm/mesh_io.hpp"
#include "wfm/quadrature.hpp"
#include "wfm/wf_refine.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitResourceCap = 3;

struct ScenarioFlags {
  std::string config;
  std::vector<int> n;
  std::optional<int> degree;
  std::string refine;
  std::optional<int> num_eigs;
  std::optional<double> zero_tol;
  std::string bc;
  std::string domain;
  std::optional<int> dense_cap;
  std::string solver;
  std::optional<double> shift;

  void add_to(CLI::App* cmd, bool with_config) {
    if (with_config) cmd->add_option("--config", config, "key = value scenario file");
    cmd->add_option("--n", n, "subdivisions per axis (one or more)");
    cmd->add_option("--degree", degree, "Lagrange degree k (1..4)");
    cmd->add_option("--refine", refine, "wf | none");
    cmd->add_option("--num-eigs", num_eigs, "number of nonzero eigenvalues to report");
    cmd->add_option("--zero-tol", zero_tol, "zero-mode threshold relative to the largest eigenvalue");
    cmd->add_option("--bc", bc, "tangential | none");
    cmd->add_option("--domain", domain, "x0,x1,y0,y1,z0,z1 (accepts pi, pi/2, ...)");
    cmd->add_option("--dense-cap", dense_cap, "largest dense eigenproblem dimension");
    cmd->add_option("--solver", solver, "dense | shift-invert");
    cmd->add_option("--shift", shift, "shift for the shift-invert solver");
  }

  wfm::Scenario resolve() const {
    wfm::Scenario s;
    if (!config.empty()) s = wfm::load_scenario(config);
    if (!n.empty()) s.n = n;
    if (degree) s.degree = *degree;
    if (!refine.empty()) s.refine = wfm::parse_refine_mode(refine);
    if (num_eigs) s.num_eigs = *num_eigs;
    if (zero_tol) s.zero_tol = *zero_tol;
    if (!bc.empty()) s.bc = wfm::parse_bc_mode(bc);
    if (!domain.empty()) s.domain = wfm::parse_domain(domain);
    if (dense_cap) s.dense_cap = *dense_cap;
    if (!solver.empty()) s.solver = wfm::parse_solver_mode(solver);
    if (shift) s.shift = *shift;
    s.validate();
    return s;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell eigenvalues with Lagrange elements on Worsey-Farin splits"};
  app.require_subcommand(1);

  int mesh_n = 1;
  std::string mesh_domain = "0,pi,0,pi,0,pi";
  std::string mesh_out;
  auto* mesh_cmd = app.add_subcommand("mesh", "structured 6-tet box mesh");
  mesh_cmd->add_option("--n", mesh_n, "subdivisions per axis")->required();
  mesh_cmd->add_option("--domain", mesh_domain, "x0,x1,y0,y1,z0,z1");
  mesh_cmd->add_option("--out", mesh_out, "output mesh path")->required();

  std::string refine_in, refine_out, refine_report;
  auto* refine_cmd = app.add_subcommand("refine", "Worsey-Farin refinement of a mesh");
  refine_cmd->add_option("--in", refine_in, "input mesh")->required();
  refine_cmd->add_option("--out", refine_out, "output mesh")->required();
  refine_cmd->add_option("--report", refine_report, "validation report path");

  std::string asm_mesh, asm_k, asm_m;
  int asm_degree = 2;
  auto* assemble_cmd = app.add_subcommand("assemble", "dump curl-curl and mass matrices");
  assemble_cmd->add_option("--mesh", asm_mesh, "mesh path")->required();
  assemble_cmd->add_option("--degree", asm_degree, "Lagrange degree k");
  assemble_cmd->add_option("--out-k", asm_k, "stiffness coordinate list")->required();
  assemble_cmd->add_option("--out-m", asm_m, "mass coordinate list")->required();

  ScenarioFlags spectrum_flags;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "single run, spectrum CSV on stdout");
  spectrum_flags.add_to(spectrum_cmd, true);

  ScenarioFlags experiment_flags;
  std::string experiment_out = "results";
  auto* experiment_cmd = app.add_subcommand("experiment", "run a scenario and write tables");
  experiment_flags.add_to(experiment_cmd, true);
  experiment_cmd->add_option("--out", experiment_out, "output directory");

  std::vector<std::string> rate_h, rate_err;
  auto* rates_cmd = app.add_subcommand("rates", "convergence rates from h and error lists");
  rates_cmd->set_help_flag("--help", "print this help message and exit");
  rates_cmd->add_option("--h", rate_h, "mesh sizes (accepts pi/5 etc.)")->required()->delimiter(',');
  rates_cmd->add_option("--err", rate_err, "errors")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitValidation;
  }

  try {
    if (*mesh_cmd) {
      wfm::write_mesh(mesh_out, wfm::build_box_mesh(wfm::parse_domain(mesh_domain), mesh_n));
    } else if (*refine_cmd) {
      const auto mesh = wfm::read_mesh(refine_in);
      const auto wf = wfm::worsey_farin_refine(mesh);
      wfm::write_mesh(refine_out, wf.fine);
      const auto report = wfm::validate_wf(wf);
      if (!refine_report.empty()) {
        std::ofstream out(refine_report);
        if (!out) throw wfm::Error(wfm::ErrorKind::Io, "cannot write " + refine_report);
        wfm::write_report(out, report);
      }
      if (!report.ok()) {
        wfm::write_report(std::cerr, report);
        return kExitValidation;
      }
    } else if (*assemble_cmd) {
      const auto mesh = wfm::read_mesh(asm_mesh);
      const auto dofs = wfm::build_dof_map(mesh, asm_degree);
      const wfm::ReferenceBasis basis(asm_degree);
      const auto quad = wfm::quadrature(2 * asm_degree);
      for (const auto& [path, matrix] :
           {std::pair{asm_k, wfm::assemble_curl_curl(mesh, dofs, basis, quad)},
            std::pair{asm_m, wfm::assemble_mass(mesh, dofs, basis, quad)}}) {
        std::ofstream out(path);
        if (!out) throw wfm::Error(wfm::ErrorKind::Io, "cannot write " + path);
        matrix.write_coordinates(out);
      }
    } else if (*spectrum_cmd) {
      auto scenario = spectrum_flags.resolve();
      if (scenario.n.size() != 1) {
        throw wfm::Error(wfm::ErrorKind::InvalidArgument, "spectrum takes a single --n");
      }
      const auto run = wfm::run_single(scenario, scenario.n.front());
      wfm::write_spectrum_csv(std::cout, run);
    } else if (*experiment_cmd) {
      const auto report = wfm::run_scenario(experiment_flags.resolve());
      for (const auto& path : wfm::emit_tables(report, experiment_out)) std::cout << path.string() << '\n';
    } else if (*rates_cmd) {
      std::vector<double> h, err;
      for (const auto& s : rate_h) h.push_back(wfm::parse_length(s));
      for (const auto& s : rate_err) err.push_back(wfm::parse_length(s));
      const auto rates = wfm::convergence_rates(h, err);
      std::cout << "h,abs_error,rate\n";
      for (std::size_t i = 0; i < h.size(); ++i) {
        std::printf("%.16e,%.16e,", h[i], err[i]);
        if (i > 0) std::printf("%.6f", rates[i - 1]);
        std::printf("\n");
      }
    }
  } catch (const wfm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == wfm::ErrorKind::ProblemTooLarge ? kExitResourceCap : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
