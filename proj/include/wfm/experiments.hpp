// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "wfm/eigensolve.hpp"
#include "wfm/mesh.hpp"

namespace wfm {

enum class RefineMode { None, WorseyFarin };
enum class BcMode { Tangential, None };
/// Dense: full spectrum through LAPACK. ShiftInvert: sparse Lanczos near `shift`,
/// for problems past the dense cap; the zero-mode count is then not computed.
enum class SolverMode { Dense, ShiftInvert };

std::string_view to_string(RefineMode mode);
std::string_view to_string(BcMode mode);
std::string_view to_string(SolverMode mode);
RefineMode parse_refine_mode(std::string_view text);
BcMode parse_bc_mode(std::string_view text);
SolverMode parse_solver_mode(std::string_view text);

/// Parses a length such as "3.5", "pi", "2*pi", "pi/5" or "3pi/4".
double parse_length(std::string_view text);
/// "x0,x1,y0,y1,z0,z1"
Box parse_domain(std::string_view text);

struct Scenario {
  Box domain = Box::cube(0.0, 3.14159265358979323846);
  std::vector<int> n{2};
  int degree = 2;
  RefineMode refine = RefineMode::WorseyFarin;
  int num_eigs = 13;
  double zero_tol = 1e-8;
  BcMode bc = BcMode::Tangential;
  int dense_cap = 12000;
  /// Accepted eigenpairs must have Rayleigh residual at most this.
  double residual_tol = 1e-8;
  Window window{};
  SolverMode solver = SolverMode::Dense;
  /// Shift for the iterative solver; keep it below the first physical eigenvalue.
  double shift = 1.0;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
  /// Applies one `key = value` setting; unknown keys throw InvalidArgument.
  void set(std::string_view key, std::string_view value);
};

/// Flat `key = value` lines; `#` starts a comment.
Scenario parse_scenario(std::istream& in, Scenario base = {});
Scenario load_scenario(const std::filesystem::path& path, Scenario base = {});

struct RunResult {
  int n = 0;
  /// Subcube side length (the labelled h).
  double h = 0.0;
  /// Largest tet diameter of the mesh actually discretized.
  double max_tet_diameter = 0.0;
  double max_shape_ratio = 0.0;
  int num_tets = 0;
  int scalar_nodes = 0;
  int reduced_dim = 0;
  /// -1 when the solver does not compute it.
  int zero_count = 0;
  Spectrum spectrum;  // eigenvalues only
  SpectrumComparison comparison;
  /// Fewer nonzero eigenvalues than requested; comparison covers the available ones.
  bool truncated = false;
  double max_residual = 0.0;
  /// Nonzero eigenvalues in [2.5, 4] (the lambda = 3 cluster on the pi-cube).
  int second_window_count = 0;
  /// The computed eigenvalues reach past both windows, so the counts are
  /// complete. Always true for the dense solver.
  bool window_covered = true;
};

struct ExperimentReport {
  Scenario scenario;
  std::vector<RunResult> runs;  // ascending n
  std::vector<double> h;
  std::vector<double> lambda1_errors;
  /// Empty when fewer than two runs.
  std::vector<double> rates;
};

/// mesh -> (refine) -> assemble -> constrain -> solve -> compare for one n.
/// Throws ValidationFailed naming the failing check, ProblemTooLarge when the
/// reduced dimension exceeds the dense cap on the dense path.
RunResult run_single(const Scenario& scenario, int n);

ExperimentReport run_scenario(const Scenario& scenario);

void write_spectrum_csv(std::ostream& out, const RunResult& run);
void write_rates_csv(std::ostream& out, const ExperimentReport& report);
void write_summary(std::ostream& out, const ExperimentReport& report);

/// spectrum_n<N>.csv per run, rates.csv and summary.txt.
std::vector<std::filesystem::path> emit_tables(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir);

}  // namespace wfm
