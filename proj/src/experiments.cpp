// SPDX-License-Identifier: Apache-2.0
#include "wfm/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wfm/assembly.hpp"
#include "wfm/dof_map.hpp"
#include "wfm/error.hpp"
#include "wfm/hcurl_bc.hpp"
#include "wfm/quadrature.hpp"
#include "wfm/reference_basis.hpp"
#include "wfm/wf_refine.hpp"

namespace wfm {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto p = s.find(sep);
    out.push_back(trim(s.substr(0, p)));
    if (p == std::string_view::npos) break;
    s.remove_prefix(p + 1);
  }
  return out;
}

double parse_number(std::string_view text) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

int parse_int(std::string_view text) {
  text = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidArgument, "not an integer: '" + std::string(text) + "'");
  }
  return v;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace

std::string_view to_string(RefineMode mode) { return mode == RefineMode::WorseyFarin ? "wf" : "none"; }
std::string_view to_string(BcMode mode) { return mode == BcMode::Tangential ? "tangential" : "none"; }

RefineMode parse_refine_mode(std::string_view text) {
  text = trim(text);
  if (text == "wf") return RefineMode::WorseyFarin;
  if (text == "none") return RefineMode::None;
  throw Error(ErrorKind::InvalidArgument, "refine mode must be wf or none");
}

BcMode parse_bc_mode(std::string_view text) {
  text = trim(text);
  if (text == "tangential") return BcMode::Tangential;
  if (text == "none") return BcMode::None;
  throw Error(ErrorKind::InvalidArgument, "bc mode must be tangential or none");
}

std::string_view to_string(SolverMode mode) { return mode == SolverMode::Dense ? "dense" : "shift-invert"; }

SolverMode parse_solver_mode(std::string_view text) {
  text = trim(text);
  if (text == "dense") return SolverMode::Dense;
  if (text == "shift-invert") return SolverMode::ShiftInvert;
  throw Error(ErrorKind::InvalidArgument, "solver must be dense or shift-invert");
}

double parse_length(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  double denom = 1.0;
  if (slash != std::string_view::npos) {
    denom = parse_number(text.substr(slash + 1));
    text = trim(text.substr(0, slash));
  }
  double value = 0.0;
  if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
    auto coeff = trim(text.substr(0, text.size() - 2));
    if (!coeff.empty() && coeff.back() == '*') coeff = trim(coeff.substr(0, coeff.size() - 1));
    value = (coeff.empty() ? 1.0 : coeff == "-" ? -1.0 : parse_number(coeff)) * kPi;
  } else {
    value = parse_number(text);
  }
  if (denom == 0.0) throw Error(ErrorKind::InvalidArgument, "division by zero in length");
  return value / denom;
}

Box parse_domain(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 6) throw Error(ErrorKind::InvalidArgument, "domain needs six comma-separated bounds");
  Box box;
  for (int a = 0; a < 3; ++a) {
    box.lo[a] = parse_length(parts[static_cast<std::size_t>(2 * a)]);
    box.hi[a] = parse_length(parts[static_cast<std::size_t>(2 * a + 1)]);
  }
  return box;
}

void Scenario::validate() const {
  if (n.empty()) throw Error(ErrorKind::InvalidArgument, "scenario needs at least one n");
  if (std::any_of(n.begin(), n.end(), [](int v) { return v < 1; })) {
    throw Error(ErrorKind::InvalidArgument, "every n must be >= 1");
  }
  if (degree < 1 || degree > 4) throw Error(ErrorKind::UnsupportedDegree, "degree must lie in [1, 4]");
  if (num_eigs < 1) throw Error(ErrorKind::InvalidArgument, "num_eigs must be >= 1");
  if (!(zero_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "zero_tol must be positive");
  if (dense_cap < 1) throw Error(ErrorKind::InvalidArgument, "dense_cap must be >= 1");
  if (!(shift > 0.0)) throw Error(ErrorKind::InvalidArgument, "shift must be positive");
  if (!(window.lo < window.hi)) throw Error(ErrorKind::InvalidArgument, "window must satisfy lo < hi");
  for (int a = 0; a < 3; ++a) {
    if (!(domain.extent(a) > 0.0)) throw Error(ErrorKind::InvalidArgument, "domain must have positive extent");
  }
}

void Scenario::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "domain") {
    domain = parse_domain(value);
  } else if (key == "n") {
    n.clear();
    for (auto part : split(value, ',')) n.push_back(parse_int(part));
  } else if (key == "degree") {
    degree = parse_int(value);
  } else if (key == "refine") {
    refine = parse_refine_mode(value);
  } else if (key == "num_eigs") {
    num_eigs = parse_int(value);
  } else if (key == "zero_tol") {
    zero_tol = parse_number(value);
  } else if (key == "bc") {
    bc = parse_bc_mode(value);
  } else if (key == "dense_cap") {
    dense_cap = parse_int(value);
  } else if (key == "residual_tol") {
    residual_tol = parse_number(value);
  } else if (key == "solver") {
    solver = parse_solver_mode(value);
  } else if (key == "shift") {
    shift = parse_number(value);
  } else if (key == "window") {
    const auto parts = split(value, ',');
    if (parts.size() != 2) throw Error(ErrorKind::InvalidArgument, "window needs lo,hi");
    window = {parse_number(parts[0]), parse_number(parts[1])};
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown scenario key '" + std::string(key) + "'");
  }
}

Scenario parse_scenario(std::istream& in, Scenario base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    view = trim(view.substr(0, view.find('#')));
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(lineno) + ": expected key = value");
    }
    base.set(view.substr(0, eq), view.substr(eq + 1));
  }
  return base;
}

Scenario load_scenario(const std::filesystem::path& path, Scenario base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  return parse_scenario(in, std::move(base));
}

RunResult run_single(const Scenario& scenario, int n) {
  scenario.validate();
  RunResult run;
  run.n = n;
  run.h = scenario.domain.max_extent() / n;

  const Mesh macro = build_box_mesh(scenario.domain, n);
  const Mesh* mesh = &macro;
  std::optional<WorseyFarinMesh> wf;
  if (scenario.refine == RefineMode::WorseyFarin) {
    wf = worsey_farin_refine(macro);
    const auto report = validate_wf(*wf);
    if (!report.ok()) {
      std::ostringstream msg;
      write_report(msg, report);
      throw Error(ErrorKind::ValidationFailed, "wf-validation at n=" + std::to_string(n) + "\n" + msg.str());
    }
    mesh = &wf->fine;
  }
  const auto quality = mesh_quality(*mesh);
  run.max_tet_diameter = quality.max_diameter;
  run.max_shape_ratio = quality.max_ratio;
  run.num_tets = mesh->num_tets();

  const DofMap dofs = build_dof_map(*mesh, scenario.degree);
  run.scalar_nodes = dofs.num_scalar;
  const auto constraints = scenario.bc == BcMode::Tangential ? build_tangential_constraints(*mesh, dofs)
                                                             : build_free_constraints(dofs);
  run.reduced_dim = constraints.reduced_dim();
  if (scenario.solver == SolverMode::Dense && run.reduced_dim > scenario.dense_cap) {
    throw Error(ErrorKind::ProblemTooLarge, "n=" + std::to_string(n) + ": reduced dimension " +
                                                std::to_string(run.reduced_dim) + " exceeds dense cap " +
                                                std::to_string(scenario.dense_cap));
  }

  const ReferenceBasis basis(scenario.degree);
  const auto stiffness = assemble_curl_curl(*mesh, dofs, basis, quadrature(2 * scenario.degree));
  const auto mass = assemble_mass(*mesh, dofs, basis, quadrature(2 * scenario.degree));
  const auto [k_red, m_red] = apply_constraints(stiffness, mass, constraints);

  Spectrum spectrum;
  if (scenario.solver == SolverMode::Dense) {
    SolveOptions opts;
    opts.zero_tol = scenario.zero_tol;
    opts.dense_cap = scenario.dense_cap;
    opts.vectors = EigenvectorSelection::Physical;
    opts.num_physical = scenario.num_eigs;
    spectrum = solve_generalized(k_red, m_red, opts);
  } else {
    ShiftInvertOptions opts;
    opts.shift = scenario.shift;
    opts.num_eigs = scenario.num_eigs;
    spectrum = solve_shift_invert(k_red, m_red, opts);
  }

  for (int i = 0; i < static_cast<int>(spectrum.vector_indices.size()); ++i) {
    const double lambda = spectrum.eigenvalues[static_cast<std::size_t>(spectrum.vector_indices[static_cast<std::size_t>(i)])];
    const double r = rayleigh_residual(k_red, m_red, lambda, spectrum.eigenvectors.col(i));
    run.max_residual = std::max(run.max_residual, r);
    if (!(r <= scenario.residual_tol)) {
      throw Error(ErrorKind::ValidationFailed, "rayleigh-residual at n=" + std::to_string(n) + ": eigenpair " +
                                                   std::to_string(i + 1) + " has residual " + fmt("%.3e", r));
    }
  }
  spectrum.eigenvectors.resize(0, 0);
  spectrum.vector_indices.clear();

  auto exact = exact_box_spectrum(scenario.num_eigs, scenario.domain);
  const auto available = spectrum.nonzero().size();
  if (available < exact.values.size()) {
    run.truncated = true;
    exact.values.resize(available);
  }
  run.comparison = compare_spectra(spectrum, exact, scenario.window);
  run.second_window_count = count_in_window(spectrum, 2.5, 4.0);
  if (spectrum.partial) {
    const auto nz = spectrum.nonzero();
    run.window_covered = !nz.empty() && nz.back() > std::max(scenario.window.hi, 4.0);
  }
  run.zero_count = spectrum.zero_count;
  run.spectrum = std::move(spectrum);
  return run;
}

ExperimentReport run_scenario(const Scenario& scenario) {
  scenario.validate();
  ExperimentReport report;
  report.scenario = scenario;
  auto ns = scenario.n;
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  for (int n : ns) {
    report.runs.push_back(run_single(scenario, n));
    const auto& run = report.runs.back();
    if (!run.comparison.abs_error.empty()) {
      report.h.push_back(run.h);
      report.lambda1_errors.push_back(run.comparison.abs_error.front());
    }
  }
  const bool rates_defined = report.h.size() >= 2 &&
                             std::all_of(report.lambda1_errors.begin(), report.lambda1_errors.end(),
                                         [](double e) { return e > 0.0; });
  if (rates_defined) report.rates = convergence_rates(report.h, report.lambda1_errors);
  return report;
}

void write_spectrum_csv(std::ostream& out, const RunResult& run) {
  out << "index,lambda_h,lambda_exact,abs_error\n";
  const auto& c = run.comparison;
  for (std::size_t i = 0; i < c.computed.size(); ++i) {
    out << (i + 1) << ',' << fmt("%.16e", c.computed[i]) << ',' << fmt("%.16e", c.exact[i]) << ','
        << fmt("%.16e", c.abs_error[i]) << '\n';
  }
  out << "zero_count," << run.zero_count << '\n';
}

void write_rates_csv(std::ostream& out, const ExperimentReport& report) {
  out << "h,abs_error_lambda1,rate\n";
  for (std::size_t i = 0; i < report.h.size(); ++i) {
    out << fmt("%.16e", report.h[i]) << ',' << fmt("%.16e", report.lambda1_errors[i]) << ',';
    if (i > 0 && i - 1 < report.rates.size()) out << fmt("%.6f", report.rates[i - 1]);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const ExperimentReport& report) {
  const auto& s = report.scenario;
  out << "degree: " << s.degree << '\n'
      << "refine: " << to_string(s.refine) << '\n'
      << "bc: " << to_string(s.bc) << '\n'
      << "solver: " << to_string(s.solver) << '\n';
  if (s.solver == SolverMode::ShiftInvert) out << "shift: " << fmt("%g", s.shift) << '\n';
  out << "num_eigs: " << s.num_eigs << '\n'
      << "zero_tol: " << fmt("%.3e", s.zero_tol) << '\n'
      << "window: " << fmt("%g", s.window.lo) << ',' << fmt("%g", s.window.hi) << '\n';
  for (const auto& r : report.runs) {
    out << "[n=" << r.n << "]\n"
        << "  h_subcube: " << fmt("%.16e", r.h) << '\n'
        << "  h_max_tet: " << fmt("%.16e", r.max_tet_diameter) << '\n'
        << "  max_shape_ratio: " << fmt("%.6e", r.max_shape_ratio) << '\n'
        << "  tets: " << r.num_tets << '\n'
        << "  scalar_nodes: " << r.scalar_nodes << '\n'
        << "  reduced_dim: " << r.reduced_dim << '\n'
        << "  zero_count: " << r.zero_count << '\n'
        << "  window_count: " << r.comparison.window_count << '\n'
        << "  expected_window_count: " << r.comparison.expected_window_count << '\n'
        << "  second_window_count: " << r.second_window_count << '\n'
        << "  window_covered: " << (r.window_covered ? "yes" : "no") << '\n'
        << "  spurious: " << (r.comparison.spurious ? "yes" : "no") << '\n'
        << "  truncated: " << (r.truncated ? "yes" : "no") << '\n'
        << "  max_residual: " << fmt("%.3e", r.max_residual) << '\n';
  }
}

std::vector<std::filesystem::path> emit_tables(const ExperimentReport& report,
                                               const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& path, auto&& body) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    body(out);
    if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
    written.push_back(path);
  };
  for (const auto& run : report.runs) {
    write(out_dir / ("spectrum_n" + std::to_string(run.n) + ".csv"),
          [&](std::ostream& o) { write_spectrum_csv(o, run); });
  }
  write(out_dir / "rates.csv", [&](std::ostream& o) { write_rates_csv(o, report); });
  write(out_dir / "summary.txt", [&](std::ostream& o) { write_summary(o, report); });
  return written;
}

}  // namespace wfm
