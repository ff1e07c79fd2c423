// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include <lapacke.h>

#include "wfm/assembly.hpp"
#include "wfm/dof_map.hpp"
#include "wfm/eigensolve.hpp"
#include "wfm/error.hpp"
#include "wfm/hcurl_bc.hpp"
#include "wfm/quadrature.hpp"
#include "wfm/wf_refine.hpp"

using namespace wfm;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Reduced {
  SymmetricSparseMatrix k, m;
};

Reduced reduced_pencil(const Box& box, int n, int degree, bool refine) {
  auto mesh = build_box_mesh(box, n);
  if (refine) mesh = worsey_farin_refine(mesh).fine;
  const auto dofs = build_dof_map(mesh, degree);
  const ReferenceBasis basis(degree);
  const auto quad = quadrature(2 * degree);
  const auto [k, m] = apply_constraints(assemble_curl_curl(mesh, dofs, basis, quad),
                                        assemble_mass(mesh, dofs, basis, quad),
                                        build_tangential_constraints(mesh, dofs));
  return {k, m};
}

// Numerical rank of a symmetric positive semidefinite matrix by Cholesky with
// complete pivoting.
int pivoted_rank(Eigen::MatrixXd a) {
  const auto n = static_cast<lapack_int>(a.rows());
  std::vector<lapack_int> piv(static_cast<std::size_t>(n));
  lapack_int rank = 0;
  const double tol = 1e-10 * a.diagonal().maxCoeff();
  const lapack_int info = LAPACKE_dpstrf(LAPACK_COL_MAJOR, 'L', n, a.data(), n, piv.data(), &rank, tol);
  REQUIRE(info >= 0);
  return static_cast<int>(rank);
}

Eigen::MatrixXd diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  int i = 0;
  for (double x : d) v[i++] = x;
  return v.asDiagonal();
}

}  // namespace

TEST_CASE("small dense examples") {
  auto s = solve_generalized(Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Identity(1, 1));
  CHECK(s.eigenvalues == std::vector<double>{0.0});
  CHECK(s.zero_count == 1);

  s = solve_generalized(diag({0.0, 2.0}), Eigen::MatrixXd::Identity(2, 2));
  REQUIRE(s.dim() == 2);
  CHECK(std::abs(s.eigenvalues[0]) <= 1e-15);
  CHECK(s.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.zero_count == 1);

  s = solve_generalized(Eigen::MatrixXd(0, 0), Eigen::MatrixXd(0, 0));
  CHECK(s.dim() == 0);
  CHECK(s.zero_count == 0);
}

TEST_CASE("solver errors") {
  try {
    solve_generalized(diag({1.0, 1.0}), diag({1.0, -1.0}));
    FAIL("indefinite mass accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
  }
  SolveOptions capped;
  capped.dense_cap = 1;
  try {
    solve_generalized(diag({1.0, 1.0}), diag({1.0, 1.0}), capped);
    FAIL("cap ignored");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProblemTooLarge);
  }
  CHECK_THROWS_AS(solve_generalized(diag({1.0}), diag({1.0, 1.0})), Error);
}

TEST_CASE("eigenvectors are M-orthonormal with small residuals") {
  const auto p = reduced_pencil(Box::cube(0, kPi), 2, 1, true);
  for (auto sel : {EigenvectorSelection::All, EigenvectorSelection::Physical}) {
    SolveOptions opts;
    opts.vectors = sel;
    const auto s = solve_generalized(p.k, p.m, opts);
    REQUIRE(s.eigenvectors.cols() == static_cast<Eigen::Index>(s.vector_indices.size()));
    if (sel == EigenvectorSelection::Physical) {
      CHECK(s.eigenvectors.cols() == std::min(13, s.dim() - s.zero_count));
      CHECK(s.vector_indices.front() == s.zero_count);
    } else {
      CHECK(s.eigenvectors.cols() == s.dim());
    }
    const Eigen::MatrixXd x = s.eigenvectors;
    const Eigen::MatrixXd gram = x.transpose() * p.m.full() * x;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-8);
    for (int i = 0; i < x.cols(); ++i) {
      const double lambda = s.eigenvalues[static_cast<std::size_t>(s.vector_indices[static_cast<std::size_t>(i)])];
      if (lambda < s.zero_threshold) continue;
      CHECK(rayleigh_residual(p.k, p.m, lambda, x.col(i)) <= 1e-8);
    }
  }
}

TEST_CASE("zero count equals the rank deficiency of the reduced stiffness") {
  for (int n : {1, 2}) {
    for (int k : {1, 2}) {
      for (bool refine : {false, true}) {
        const auto p = reduced_pencil(Box::cube(0, kPi), n, k, refine);
        if (p.k.dim() == 0) continue;
        const auto s = solve_generalized(p.k, p.m);
        CAPTURE(n);
        CAPTURE(k);
        CAPTURE(refine);
        CHECK(s.zero_count == p.k.dim() - pivoted_rank(p.k.dense()));
      }
    }
  }
}

TEST_CASE("quadratic kernel on the refined n=2 mesh has the C1 spline dimension") {
  // Gradients of C1 piecewise cubics on the split, vanishing with their
  // tangential derivatives on the boundary. Free data: 4 per interior vertex,
  // 1 (normal derivative) per face-interior vertex, 2 per interior edge and 1
  // per boundary edge not on a cube edge.
  const auto macro = build_box_mesh(Box::cube(0, kPi), 2);
  const auto classes = classify_boundary_vertices(macro);
  const auto& c = macro.connectivity();
  int interior_edges = 0, face_edges = 0;
  for (std::size_t e = 0; e < c.edges.size(); ++e) {
    if (!c.boundary_edge[e]) {
      ++interior_edges;
      continue;
    }
    const Point3 mid = 0.5 * (macro.vertex(c.edges[e][0]) + macro.vertex(c.edges[e][1]));
    if (classify_point(macro.domain(), mid).kind == VertexClass::BoundaryFaceInterior) ++face_edges;
  }
  const int expect = 4 * static_cast<int>(classes.count(VertexClass::Interior)) +
                     static_cast<int>(classes.count(VertexClass::BoundaryFaceInterior)) + 2 * interior_edges +
                     face_edges;
  CHECK(expect == 110);
  const auto p = reduced_pencil(Box::cube(0, kPi), 2, 2, true);
  CHECK(solve_generalized(p.k, p.m).zero_count == expect);
}

TEST_CASE("spectrum is invariant under symmetric permutation") {
  const auto p = reduced_pencil(Box::cube(0, kPi), 2, 1, true);
  const int n = p.k.dim();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937 rng(3);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::PermutationMatrix<Eigen::Dynamic> pm(n);
  for (int i = 0; i < n; ++i) pm.indices()[i] = perm[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd kp = pm * p.k.dense() * pm.transpose();
  const Eigen::MatrixXd mp = pm * p.m.dense() * pm.transpose();
  const auto a = solve_generalized(p.k, p.m);
  const auto b = solve_generalized(kp, mp);
  REQUIRE(a.zero_count == b.zero_count);
  const double scale = a.eigenvalues.back();
  for (int i = a.zero_count; i < a.dim(); ++i) {
    CHECK(std::abs(a.eigenvalues[static_cast<std::size_t>(i)] - b.eigenvalues[static_cast<std::size_t>(i)]) <=
          1e-10 * scale);
  }
}

TEST_CASE("scaling the mass or the mesh scales the spectrum") {
  const auto p = reduced_pencil(Box::cube(0, 1), 2, 1, true);
  const auto base = solve_generalized(p.k, p.m);
  const double s = 3.0;
  const auto heavy = solve_generalized(p.k.dense(), s * p.m.dense());
  REQUIRE(heavy.zero_count == base.zero_count);
  for (int i = base.zero_count; i < base.dim(); ++i) {
    CHECK(heavy.eigenvalues[static_cast<std::size_t>(i)] ==
          doctest::Approx(base.eigenvalues[static_cast<std::size_t>(i)] / s).epsilon(1e-10));
  }
  const auto big = reduced_pencil(Box::cube(0, s), 2, 1, true);
  const auto scaled = solve_generalized(big.k, big.m);
  REQUIRE(scaled.zero_count == base.zero_count);
  for (int i = base.zero_count; i < base.dim(); ++i) {
    CHECK(scaled.eigenvalues[static_cast<std::size_t>(i)] ==
          doctest::Approx(base.eigenvalues[static_cast<std::size_t>(i)] / (s * s)).epsilon(1e-10));
  }
}

TEST_CASE("exact cube spectrum") {
  const auto exact = exact_box_spectrum(13);
  CHECK(exact.values == std::vector<double>{2, 2, 2, 3, 3, 5, 5, 5, 5, 5, 5, 6, 6});
  REQUIRE(exact.entries.size() >= 4);
  CHECK(exact.entries[0].lambda == 2.0);
  CHECK(exact.entries[0].multiplicity == 3);
  const std::vector<std::array<int, 3>> twos{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  CHECK(exact.entries[0].triples == twos);
  CHECK(exact.entries[1].lambda == 3.0);
  CHECK(exact.entries[1].multiplicity == 2);
  CHECK(exact.entries[1].triples == std::vector<std::array<int, 3>>{{1, 1, 1}});
  CHECK(exact.count_in(1.5, 2.5) == 3);
  CHECK(exact.count_in(2.5, 4.0) == 2);
  CHECK_THROWS_AS(exact_box_spectrum(0), Error);
}

TEST_CASE("exact spectrum agrees with brute-force enumeration") {
  for (const Box& box : {Box::cube(0, kPi), Box{{0, 0, 0}, {kPi, 2 * kPi, 0.5 * kPi}}}) {
    const int m = 60;
    std::vector<double> brute;
    const int cutoff = 30;
    for (int i = 0; i <= cutoff; ++i) {
      for (int j = 0; j <= cutoff; ++j) {
        for (int l = 0; l <= cutoff; ++l) {
          const int zeros = (i == 0) + (j == 0) + (l == 0);
          if (zeros > 1) continue;
          const double lambda = std::pow(i * kPi / box.extent(0), 2) + std::pow(j * kPi / box.extent(1), 2) +
                                std::pow(l * kPi / box.extent(2), 2);
          brute.insert(brute.end(), zeros == 0 ? 2 : 1, lambda);
        }
      }
    }
    std::sort(brute.begin(), brute.end());
    const auto exact = exact_box_spectrum(m, box);
    REQUIRE(exact.values.size() == static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      CHECK(exact.values[static_cast<std::size_t>(i)] ==
            doctest::Approx(brute[static_cast<std::size_t>(i)]).epsilon(1e-14));
    }
  }
}

TEST_CASE("comparisons against published data") {
  const auto exact = exact_box_spectrum(13);
  // Published quadratic split run at h = pi/6.
  Spectrum table3;
  table3.eigenvalues = {0.0, 2.000121, 2.000243, 2.000243, 3.000741, 3.000741, 5.001307, 5.001307,
                        5.001862, 5.002382, 5.002913, 5.002913, 6.001822, 6.002854};
  table3.zero_count = 1;
  const auto good = compare_spectra(table3, exact);
  CHECK(good.abs_error[0] == doctest::Approx(1.21e-4).epsilon(1e-3));
  CHECK(good.window_count == 3);
  CHECK_FALSE(good.spurious);

  // Published first 13 values of the linear, unsplit run at h = pi/8.
  Spectrum table1;
  table1.eigenvalues = {2.0610, 2.0610, 2.0774, 2.0900, 2.0900, 2.1506, 2.1506,
                        2.2698, 2.2698, 2.2910, 2.3304, 2.3514, 2.3514};
  const auto bad = compare_spectra(table1, exact);
  CHECK(bad.window_count == 13);
  CHECK(bad.spurious);

  Spectrum same;
  same.eigenvalues = exact.values;
  const auto ident = compare_spectra(same, exact);
  CHECK(std::all_of(ident.abs_error.begin(), ident.abs_error.end(), [](double e) { return e == 0.0; }));
  CHECK_FALSE(ident.spurious);

  Spectrum few;
  few.eigenvalues = {2.0, 2.0};
  try {
    compare_spectra(few, exact);
    FAIL("short spectrum accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientSpectrum);
  }
}

TEST_CASE("rayleigh residual") {
  const SymmetricSparseMatrix k(Eigen::MatrixXd{{2.0, 1.0}, {1.0, 2.0}}.sparseView());
  const SymmetricSparseMatrix m(Eigen::MatrixXd::Identity(2, 2).sparseView());
  const Eigen::Vector2d u(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  CHECK(rayleigh_residual(k, m, 3.0, u) <= 1e-14);
  double prev = 0.0;
  for (double d : {1e-6, 1e-4, 1e-2, 1e-1}) {
    const double r = rayleigh_residual(k, m, 3.0, u + Eigen::Vector2d(d, -d));
    CHECK(r > prev);
    prev = r;
  }
  CHECK_THROWS_AS(rayleigh_residual(k, m, 3.0, Eigen::Vector2d::Zero()), Error);
  CHECK_THROWS_AS(rayleigh_residual(k, m, -1.0, u), Error);
  CHECK_THROWS_AS(rayleigh_residual(k, m, 3.0, Eigen::Vector3d::Ones()), Error);
}

TEST_CASE("convergence rates") {
  const std::vector<double> h{kPi / 5, kPi / 6};
  const std::vector<double> e{1.95e-4, 1.21e-4};
  CHECK(convergence_rates(h, e)[0] == doctest::Approx(2.62).epsilon(0.005 / 2.62));
  CHECK(convergence_rates(std::vector<double>{0.2, 0.1}, std::vector<double>{1e-2, 5e-3})[0] ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(convergence_rates(std::vector<double>{kPi / 8, kPi / 9}, std::vector<double>{4.64e-5, 3.03e-5})[0] ==
        doctest::Approx(3.62).epsilon(0.005 / 3.62));
  CHECK(convergence_rates(std::vector<double>{1.0}, std::vector<double>{1.0}).empty());
  CHECK_THROWS_AS(convergence_rates(std::vector<double>{0.1, 0.2}, std::vector<double>{1.0, 0.5}), Error);
  CHECK_THROWS_AS(convergence_rates(std::vector<double>{0.2, 0.1}, std::vector<double>{1.0, 0.0}), Error);
  CHECK_THROWS_AS(convergence_rates(std::vector<double>{0.2, 0.1}, std::vector<double>{1.0}), Error);
}

TEST_CASE("shift-invert agrees with the dense solver") {
  const auto p = reduced_pencil(Box::cube(0, kPi), 2, 2, true);
  const auto dense = solve_generalized(p.k, p.m);
  ShiftInvertOptions opts;
  opts.shift = 0.5;
  opts.num_eigs = 13;
  const auto it = solve_shift_invert(p.k, p.m, opts);
  CHECK(it.partial);
  CHECK(it.zero_count == -1);
  REQUIRE(it.dim() == 13);
  const auto nz = dense.nonzero();
  for (int i = 0; i < 13; ++i) {
    CHECK(it.eigenvalues[static_cast<std::size_t>(i)] ==
          doctest::Approx(nz[static_cast<std::size_t>(i)]).epsilon(1e-9));
  }
  const Eigen::MatrixXd gram = it.eigenvectors.transpose() * p.m.full() * it.eigenvectors;
  CHECK((gram - Eigen::MatrixXd::Identity(13, 13)).cwiseAbs().maxCoeff() <= 1e-8);
  for (int i = 0; i < 13; ++i) {
    CHECK(rayleigh_residual(p.k, p.m, it.eigenvalues[static_cast<std::size_t>(i)], it.eigenvectors.col(i)) <= 1e-8);
  }
  // A shift above some eigenvalues still reports them when they converge.
  opts.shift = 1.3;
  const auto mid = solve_shift_invert(p.k, p.m, opts);
  CHECK(mid.eigenvalues.front() == doctest::Approx(nz[0]).epsilon(1e-9));
  CHECK_THROWS_AS(solve_shift_invert(p.k, p.m, ShiftInvertOptions{-1.0}), Error);
}
