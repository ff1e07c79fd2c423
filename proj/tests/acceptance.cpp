// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, with the measured
// values. Exit status is nonzero when any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <lapacke.h>

#include "wfm/assembly.hpp"
#include "wfm/dof_map.hpp"
#include "wfm/eigensolve.hpp"
#include "wfm/experiments.hpp"
#include "wfm/hcurl_bc.hpp"
#include "wfm/quadrature.hpp"
#include "wfm/wf_refine.hpp"

using namespace wfm;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.note(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.require(secs <= budget_s, "time budget " + fmt("%.0f", budget_s) + " s");
  if (!out.pass) ++failures;
  std::printf("[%s] criterion %d: %s (%.2f s) | %s\n", out.pass ? "PASS" : "FAIL", id, title, secs,
              out.detail.c_str());
  std::fflush(stdout);
}

double factorial(int n) { return std::tgamma(n + 1.0); }

double plane_distance(const Point3& a, const Point3& b, const Point3& c, const Point3& p) {
  return std::abs((b - a).cross(c - a).normalized().dot(p - a));
}

Mesh box_mesh(int n, bool refine, const Box& box = Box::cube(0, kPi)) {
  auto mesh = build_box_mesh(box, n);
  return refine ? worsey_farin_refine(mesh).fine : mesh;
}

int pivoted_rank(Eigen::MatrixXd a) {
  const auto n = static_cast<lapack_int>(a.rows());
  if (n == 0) return 0;
  std::vector<lapack_int> piv(static_cast<std::size_t>(n));
  lapack_int rank = 0;
  const double tol = 1e-10 * a.diagonal().maxCoeff();
  if (LAPACKE_dpstrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n, piv.data(), &rank, tol) < 0) return -1;
  return static_cast<int>(rank);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void geometry_oracles(Outcome& out) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_equidistance = 0.0;
  for (int tested = 0; tested < 100;) {
    std::array<Point3, 4> p;
    for (auto& x : p) x = Point3(u(rng), u(rng), u(rng));
    if (std::abs(signed_volume(p[0], p[1], p[2], p[3])) < 1e-3 || tet_quality(p).ratio > 20.0) continue;
    ++tested;
    const Point3 z = incenter(p);
    std::array<double, 4> d{};
    for (int i = 0; i < 4; ++i) {
      const auto& f = kTetFaces[static_cast<std::size_t>(i)];
      d[static_cast<std::size_t>(i)] = plane_distance(p[static_cast<std::size_t>(f[0])],
                                                      p[static_cast<std::size_t>(f[1])],
                                                      p[static_cast<std::size_t>(f[2])], z);
    }
    worst_equidistance =
        std::max(worst_equidistance, *std::max_element(d.begin(), d.end()) - *std::min_element(d.begin(), d.end()));
  }
  out.require(worst_equidistance <= 1e-12, "incenter equidistance");
  out.note("equidistance spread " + fmt("%.1e", worst_equidistance));

  const double c = 1.0 / (3.0 + std::sqrt(3.0));
  const Point3 z = incenter({Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0), Point3(0, 0, 1)});
  const double ref_err = (z - Point3(c, c, c)).norm();
  out.require(ref_err <= 1e-12, "reference incenter");
  out.note("reference incenter err " + fmt("%.1e", ref_err));

  double worst_volume = 0.0;
  bool twelve = true;
  for (int n : {1, 2}) {
    const auto macro = build_box_mesh(Box::cube(0, kPi), n);
    const auto wf = worsey_farin_refine(macro);
    for (int t = 0; t < macro.num_tets(); ++t) {
      const auto& children = wf.children_of[static_cast<std::size_t>(t)];
      twelve = twelve && children.size() == 12;
      double sum = 0.0;
      for (int ch : children) sum += wf.fine.tet_volume(ch);
      worst_volume = std::max(worst_volume, std::abs(sum - macro.tet_volume(t)) / macro.tet_volume(t));
    }
    twelve = twelve && wf.fine.num_tets() == 12 * macro.num_tets();
  }
  out.require(worst_volume <= 1e-12, "volume conservation");
  out.require(twelve, "12 children per tet");
  out.note("volume residual " + fmt("%.1e", worst_volume));

  const std::array<Point3, 3> face{Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 1, 0)};
  const std::vector<Point3> pair{Point3(c, c, c), Point3(c, c, -c)};
  const double mirror_err = (face_split_point(face, pair) - Point3(c, c, 0)).norm();
  out.require(mirror_err <= 1e-12, "mirror-pair face point");
  out.note("mirror face point err " + fmt("%.1e", mirror_err));
}

void kernel_structure(Outcome& out) {
  using Field = std::function<Eigen::Vector3d(const Point3&)>;
  const std::vector<std::pair<const char*, Field>> grads{
      {"x", [](const Point3&) { return Eigen::Vector3d(1, 0, 0); }},
      {"y", [](const Point3&) { return Eigen::Vector3d(0, 1, 0); }},
      {"z", [](const Point3&) { return Eigen::Vector3d(0, 0, 1); }},
      {"x^2", [](const Point3& p) { return Eigen::Vector3d(2 * p[0], 0, 0); }},
      {"xy", [](const Point3& p) { return Eigen::Vector3d(p[1], p[0], 0); }},
      {"xyz", [](const Point3& p) { return Eigen::Vector3d(p[1] * p[2], p[0] * p[2], p[0] * p[1]); }}};
  double worst_kernel = 0.0;
  std::string counts;
  for (int n : {1, 2}) {
    for (int k : {1, 2}) {
      for (bool refine : {false, true}) {
        const auto mesh = box_mesh(n, refine);
        const auto dofs = build_dof_map(mesh, k);
        const ReferenceBasis basis(k);
        const auto quad = quadrature(2 * k);
        const auto stiffness = assemble_curl_curl(mesh, dofs, basis, quad);
        const auto mass = assemble_mass(mesh, dofs, basis, quad);
        const double knorm = stiffness.frobenius_norm();
        for (const auto& [name, field] : grads) {
          if (std::string(name) == "xyz" && k < 2) continue;
          worst_kernel = std::max(worst_kernel, (stiffness * interpolate(dofs, field)).norm() / knorm);
        }
        const auto [k_red, m_red] = apply_constraints(stiffness, mass, build_tangential_constraints(mesh, dofs));
        const auto spectrum = solve_generalized(k_red, m_red);
        const int deficiency = k_red.dim() - pivoted_rank(k_red.dense());
        const std::string tag = "n" + std::to_string(n) + "k" + std::to_string(k) + (refine ? "wf" : "");
        out.require(spectrum.zero_count == deficiency, "zero_count " + tag);
        counts += (counts.empty() ? "" : " ") + tag + "=" + std::to_string(spectrum.zero_count) + "/" +
                  std::to_string(deficiency);
      }
    }
  }
  out.require(worst_kernel <= 1e-12, "K grad p = 0");
  out.note("max |K grad p|/|K| " + fmt("%.1e", worst_kernel));
  out.note("zero_count/deficiency " + counts);
}

void spurious_reproduction(Outcome& out) {
  for (auto mode : {RefineMode::None, RefineMode::WorseyFarin}) {
    Scenario s;
    s.n = {2};
    s.degree = 1;
    s.refine = mode;
    const auto run = run_single(s, 2);
    const int count = run.comparison.window_count;
    out.require(count != 3, std::string("window count for k=1 ") + std::string(to_string(mode)));
    out.note("k=1 " + std::string(to_string(mode)) + ": window count " + std::to_string(count) + ", lambda_1 " +
             fmt("%.4f", run.comparison.computed.front()));
  }
}

void convergent_reproduction(Outcome& out) {
  Scenario s;
  s.degree = 2;
  s.refine = RefineMode::WorseyFarin;
  const auto r2 = run_single(s, 2);
  const double e2 = std::abs(r2.comparison.computed.front() - 2.0);
  out.note("n=2: window " + std::to_string(r2.comparison.window_count) + ", [2.5,4] " +
           std::to_string(r2.second_window_count) + ", lambda_1 " + fmt("%.6f", r2.comparison.computed.front()));
  out.require(r2.comparison.window_count == 3, "n=2 window count == 3");
  out.require(r2.second_window_count == 2, "n=2 count in [2.5,4] == 2");
  out.require(e2 <= 0.1, "n=2 |lambda_1 - 2| <= 0.1");

  const auto r3 = run_single(s, 3);
  const double e3 = std::abs(r3.comparison.computed.front() - 2.0);
  const double rate = std::log(e2 / e3) / std::log(3.0 / 2.0);
  out.note("n=3: lambda_1 " + fmt("%.6f", r3.comparison.computed.front()) + ", e2 " + fmt("%.3e", e2) + ", e3 " +
           fmt("%.3e", e3) + ", rate " + fmt("%.2f", rate));
  out.require(e3 < e2, "n=3 error smaller");
  out.require(rate >= 2.0, "observed rate >= 2");
}

void published_replays(Outcome& out) {
  std::vector<double> h;
  for (int n = 5; n <= 9; ++n) h.push_back(kPi / n);
  const std::vector<double> errors{1.95e-4, 1.21e-4, 7.40e-5, 4.64e-5, 3.03e-5};
  const std::vector<double> published{2.62, 3.19, 3.48, 3.62};
  const auto rates = convergence_rates(h, errors);
  std::string got;
  for (std::size_t i = 0; i < published.size(); ++i) {
    out.require(std::abs(rates[i] - published[i]) <= 0.005, "rate " + fmt("%.2f", published[i]));
    got += (got.empty() ? "" : ",") + fmt("%.4f", rates[i]);
  }
  out.note("rates " + got);
  const auto exact = exact_box_spectrum(13);
  out.require(exact.values == std::vector<double>{2, 2, 2, 3, 3, 5, 5, 5, 5, 5, 5, 6, 6}, "exact spectrum");
}

void numerics_hygiene(Outcome& out) {
  double worst_quad = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const int d = 2 * k + 2;
    const auto rule = quadrature(d);
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        for (int c = 0; a + b + c <= d; ++c) {
          double sum = 0.0;
          for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto& x = rule.points[q];
            sum += rule.weights[q] * std::pow(x[0], a) * std::pow(x[1], b) * std::pow(x[2], c);
          }
          const double exact = factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 3);
          worst_quad = std::max(worst_quad, std::abs(sum - exact) / exact);
        }
      }
    }
  }
  out.require(worst_quad <= 1e-14, "quadrature exactness");
  out.note("quadrature rel err " + fmt("%.1e", worst_quad));

  double worst_mass = 0.0;
  const Box box = Box::cube(0, 1);
  for (int k = 1; k <= 2; ++k) {
    for (bool refine : {false, true}) {
      const auto mesh = box_mesh(2, refine, box);
      const auto dofs = build_dof_map(mesh, k);
      const auto mass = assemble_mass(mesh, dofs, ReferenceBasis(k), quadrature(2 * k));
      const auto check = [&](const std::function<Eigen::Vector3d(const Point3&)>& f, double exact) {
        worst_mass = std::max(worst_mass, std::abs(mass.quadratic_form(interpolate(dofs, f)) - exact) / exact);
      };
      check([](const Point3&) { return Eigen::Vector3d(1, 0, 0); }, 1.0);
      check([](const Point3&) { return Eigen::Vector3d(1, 1, 1); }, 3.0);
      check([](const Point3& p) { return Eigen::Vector3d(p[0], 0, 0); }, 1.0 / 3.0);
      // |(x, y, z)|^2 integrates to 1 on the unit cube.
      check([](const Point3& p) { return Eigen::Vector3d(p[0], p[1], p[2]); }, 1.0);
    }
  }
  out.require(worst_mass <= 1e-12, "mass quadratic forms");
  out.note("mass rel err " + fmt("%.1e", worst_mass));

  const auto mesh = box_mesh(2, true);
  const auto dofs = build_dof_map(mesh, 1);
  const ReferenceBasis basis(1);
  const auto [k_red, m_red] =
      apply_constraints(assemble_curl_curl(mesh, dofs, basis, quadrature(2)),
                        assemble_mass(mesh, dofs, basis, quadrature(2)), build_tangential_constraints(mesh, dofs));
  SolveOptions opts;
  opts.vectors = EigenvectorSelection::All;
  const auto spectrum = solve_generalized(k_red, m_red, opts);
  const Eigen::MatrixXd gram = spectrum.eigenvectors.transpose() * m_red.full() * spectrum.eigenvectors;
  const double ortho = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  out.require(ortho <= 1e-8, "M-orthonormality");
  out.note("M-orthonormality " + fmt("%.1e", ortho));

  Scenario s;
  s.n = {1, 2};
  s.degree = 2;
  const auto base = fs::temp_directory_path() / ("wfm_acceptance_" + std::to_string(::getpid()));
  emit_tables(run_scenario(s), base / "a");
  emit_tables(run_scenario(s), base / "b");
  bool identical = true;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    identical = identical && slurp(entry.path()) == slurp(base / "b" / entry.path().filename());
  }
  fs::remove_all(base);
  out.require(identical, "byte-identical reports");
  out.note(identical ? "reports byte-identical" : "reports differ");
}

}  // namespace

int main() {
  criterion(1, "geometry oracles", 1.0, geometry_oracles);
  criterion(2, "complex and kernel structure", 30.0, kernel_structure);
  criterion(3, "spurious spectra for linear elements", 120.0, spurious_reproduction);
  criterion(4, "convergent spectrum for quadratic split elements", 600.0, convergent_reproduction);
  criterion(5, "published-number replays", 1.0, published_replays);
  criterion(6, "numerics hygiene", 60.0, numerics_hygiene);
  std::printf("%d of 6 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
