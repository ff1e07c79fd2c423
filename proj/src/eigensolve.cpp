// SPDX-License-Identifier: Apache-2.0
#include "wfm/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include "wfm/error.hpp"

namespace wfm {

namespace {

void check_lapack(lapack_int info, const char* routine) {
  if (info != 0) {
    throw Error(ErrorKind::ValidationFailed,
                std::string(routine) + " failed with info " + std::to_string(info));
  }
}

void assign_zero_modes(Spectrum& s, double zero_tol) {
  const double lmax = s.eigenvalues.empty() ? 0.0 : s.eigenvalues.back();
  s.zero_threshold = lmax > 0.0 ? zero_tol * lmax : std::numeric_limits<double>::min();
  s.zero_count = static_cast<int>(
      std::lower_bound(s.eigenvalues.begin(), s.eigenvalues.end(), s.zero_threshold) - s.eigenvalues.begin());
}

}  // namespace

Spectrum solve_generalized(const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
                           const SolveOptions& options) {
  if (stiffness.dim() != mass.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "stiffness and mass dimensions differ");
  }
  if (stiffness.dim() > options.dense_cap) {
    throw Error(ErrorKind::ProblemTooLarge, "dimension " + std::to_string(stiffness.dim()) +
                                                " exceeds dense cap " + std::to_string(options.dense_cap));
  }
  return solve_generalized(stiffness.dense(), mass.dense(), options);
}

Spectrum solve_generalized(Eigen::MatrixXd stiffness, Eigen::MatrixXd mass, const SolveOptions& options) {
  const auto n = static_cast<lapack_int>(stiffness.rows());
  if (stiffness.rows() != stiffness.cols() || mass.rows() != mass.cols() || mass.rows() != stiffness.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "pencil matrices must be square and of equal size");
  }
  if (n > options.dense_cap) {
    throw Error(ErrorKind::ProblemTooLarge, "dimension " + std::to_string(n) + " exceeds dense cap " +
                                                std::to_string(options.dense_cap));
  }
  Spectrum s;
  if (n == 0) return s;

  // M = L L^T, then C = L^{-1} K L^{-T} in the lower triangle of `stiffness`.
  if (LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, mass.data(), n) != 0) {
    throw Error(ErrorKind::NotPositiveDefinite, "Cholesky factorization of the mass matrix failed");
  }
  check_lapack(LAPACKE_dsygst(LAPACK_COL_MAJOR, 1, 'L', n, stiffness.data(), n, mass.data(), n), "dsygst");

  Eigen::MatrixXd z;
  if (options.vectors == EigenvectorSelection::All) {
    s.eigenvalues.resize(static_cast<std::size_t>(n));
    check_lapack(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, stiffness.data(), n, s.eigenvalues.data()),
                 "dsyevd");
    assign_zero_modes(s, options.zero_tol);
    z = std::move(stiffness);
    s.vector_indices.resize(static_cast<std::size_t>(n));
    for (lapack_int i = 0; i < n; ++i) s.vector_indices[static_cast<std::size_t>(i)] = i;
  } else {
    std::vector<double> d(static_cast<std::size_t>(n)), e(static_cast<std::size_t>(std::max<lapack_int>(n - 1, 1))),
        tau(static_cast<std::size_t>(std::max<lapack_int>(n - 1, 1)));
    check_lapack(LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, stiffness.data(), n, d.data(), e.data(), tau.data()),
                 "dsytrd");
    s.eigenvalues = d;
    std::vector<double> e_work = e;
    check_lapack(LAPACKE_dsterf(n, s.eigenvalues.data(), e_work.data()), "dsterf");
    assign_zero_modes(s, options.zero_tol);

    if (options.vectors == EigenvectorSelection::Physical && options.num_physical > 0 && s.zero_count < n) {
      const lapack_int il = s.zero_count + 1;
      const lapack_int iu = std::min<lapack_int>(s.zero_count + options.num_physical, n);
      lapack_int found = 0, nsplit = 0;
      std::vector<double> w(static_cast<std::size_t>(n));
      std::vector<lapack_int> iblock(static_cast<std::size_t>(n)), isplit(static_cast<std::size_t>(n));
      const double abstol = 2.0 * LAPACKE_dlamch('S');
      check_lapack(LAPACKE_dstebz('I', 'B', n, 0.0, 0.0, il, iu, abstol, d.data(), e.data(), &found, &nsplit,
                                  w.data(), iblock.data(), isplit.data()),
                   "dstebz");
      z.resize(n, found);
      std::vector<lapack_int> ifail(static_cast<std::size_t>(found));
      check_lapack(LAPACKE_dstein(LAPACK_COL_MAJOR, n, d.data(), e.data(), found, w.data(), iblock.data(),
                                  isplit.data(), z.data(), n, ifail.data()),
                   "dstein");
      check_lapack(LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', n, found, stiffness.data(), n, tau.data(),
                                  z.data(), n),
                   "dormtr");
      // dstebz orders by split block; restore ascending order.
      std::vector<int> order(static_cast<std::size_t>(found));
      for (int i = 0; i < found; ++i) order[static_cast<std::size_t>(i)] = i;
      std::stable_sort(order.begin(), order.end(), [&w](int a, int b) {
        return w[static_cast<std::size_t>(a)] < w[static_cast<std::size_t>(b)];
      });
      Eigen::MatrixXd sorted(n, found);
      for (int i = 0; i < found; ++i) sorted.col(i) = z.col(order[static_cast<std::size_t>(i)]);
      z = std::move(sorted);
      for (int i = 0; i < found; ++i) s.vector_indices.push_back(s.zero_count + i);
    }
  }

  if (z.cols() > 0) {
    // x = L^{-T} y
    s.eigenvectors = mass.triangularView<Eigen::Lower>().transpose().solve(z);
  }
  return s;
}

Spectrum solve_shift_invert(const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
                            const ShiftInvertOptions& options) {
  if (stiffness.dim() != mass.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "stiffness and mass dimensions differ");
  }
  if (options.num_eigs < 1 || options.max_basis < options.num_eigs + 2 || !(options.shift > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "shift-invert needs num_eigs >= 1, a positive shift and room in the basis");
  }
  const int n = stiffness.dim();
  Spectrum s;
  s.partial = true;
  s.zero_count = -1;
  if (n == 0) return s;

  const double sigma = options.shift;
  const Eigen::SparseMatrix<double> shifted = stiffness.upper() - sigma * mass.upper();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Upper> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) {
    throw Error(ErrorKind::ValidationFailed, "factorization of K - shift M failed");
  }

  const int max_basis = std::min(options.max_basis, n);
  Eigen::MatrixXd v(n, max_basis + 1);
  std::vector<double> alpha, beta;

  std::mt19937 rng(options.seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) r[i] = uniform(rng);
  // Push the start vector through the operator once to damp high modes.
  r = ldlt.solve(mass * r);
  v.col(0) = r / std::sqrt(r.dot(mass * r));

  // Kernel Ritz values sit at -1/sigma; keep everything else.
  const double kernel_theta = -1.0 / sigma;
  auto is_kernel = [&](double theta) { return std::abs(theta - kernel_theta) <= 1e-6 * std::abs(kernel_theta); };

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  int m = 0;
  double last_beta = 0.0;
  bool converged = false;
  while (m < max_basis) {
    Eigen::VectorXd w = ldlt.solve(mass * v.col(m));
    alpha.push_back(v.col(m).dot(mass * w));
    // Full reorthogonalization in the M inner product, applied twice.
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeff = v.leftCols(m + 1).transpose() * (mass * w);
      w -= v.leftCols(m + 1) * coeff;
    }
    const double b = std::sqrt(std::max(w.dot(mass * w), 0.0));
    last_beta = b;
    ++m;

    const bool check = m == max_basis || m % 10 == 0 || b == 0.0;
    if (check && m >= options.num_eigs) {
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        t(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      tri.compute(t);
      // Wanted: the num_eigs largest positive theta (smallest lambda above sigma).
      int wanted = 0, done = 0;
      for (int i = m - 1; i >= 0 && wanted < options.num_eigs; --i) {
        const double theta = tri.eigenvalues()[i];
        if (theta <= 0.0) break;
        ++wanted;
        if (std::abs(b * tri.eigenvectors()(m - 1, i)) <= options.tol * std::abs(theta)) ++done;
      }
      if (wanted == options.num_eigs && done == wanted) {
        converged = true;
        break;
      }
    }
    if (b == 0.0) break;
    beta.push_back(b);
    v.col(m) = w / b;
  }
  if (!converged) {
    throw Error(ErrorKind::InsufficientSpectrum,
                "shift-invert Lanczos did not converge within " + std::to_string(m) + " vectors");
  }

  // Positive theta: the wanted eigenvalues above sigma. Negative theta below the
  // kernel value: converged eigenvalues in (0, sigma).
  std::vector<std::pair<double, int>> keep;
  int positive = 0;
  for (int i = m - 1; i >= 0; --i) {
    const double theta = tri.eigenvalues()[i];
    const double resid = std::abs(last_beta * tri.eigenvectors()(m - 1, i));
    if (theta > 0.0) {
      if (positive < options.num_eigs) keep.emplace_back(sigma + 1.0 / theta, i);
      ++positive;
    } else if (theta < kernel_theta && !is_kernel(theta) && resid <= options.tol * std::abs(theta)) {
      keep.emplace_back(sigma + 1.0 / theta, i);
    }
  }
  std::sort(keep.begin(), keep.end());
  s.eigenvectors.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    s.eigenvalues.push_back(keep[j].first);
    s.eigenvectors.col(static_cast<Eigen::Index>(j)) = v.leftCols(m) * tri.eigenvectors().col(keep[j].second);
    s.vector_indices.push_back(static_cast<int>(j));
  }
  return s;
}

int ExactSpectrum::count_in(double lo, double hi) const {
  int count = 0;
  for (const auto& e : entries) {
    if (e.lambda >= lo && e.lambda <= hi) count += e.multiplicity;
  }
  return count;
}

ExactSpectrum exact_box_spectrum(int m, const Box& box) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "number of eigenvalues must be >= 1");
  std::array<double, 3> wave{};
  for (int a = 0; a < 3; ++a) {
    if (!(box.extent(a) > 0.0)) throw Error(ErrorKind::InvalidArgument, "box must have positive extent");
    wave[static_cast<std::size_t>(a)] = std::acos(-1.0) / box.extent(a);
  }
  for (int cutoff = 2;; cutoff *= 2) {
    struct Mode {
      double lambda;
      std::array<int, 3> k;
      int multiplicity;
    };
    std::vector<Mode> modes;
    for (int i = 0; i <= cutoff; ++i) {
      for (int j = 0; j <= cutoff; ++j) {
        for (int l = 0; l <= cutoff; ++l) {
          const int zeros = (i == 0) + (j == 0) + (l == 0);
          if (zeros > 1) continue;
          const double lambda = std::pow(i * wave[0], 2) + std::pow(j * wave[1], 2) + std::pow(l * wave[2], 2);
          modes.push_back({lambda, {i, j, l}, zeros == 0 ? 2 : 1});
        }
      }
    }
    std::sort(modes.begin(), modes.end(),
              [](const Mode& a, const Mode& b) { return std::tie(a.lambda, a.k) < std::tie(b.lambda, b.k); });

    ExactSpectrum out;
    for (const auto& mode : modes) {
      if (!out.entries.empty() &&
          std::abs(mode.lambda - out.entries.back().lambda) <= 1e-12 * mode.lambda) {
        out.entries.back().multiplicity += mode.multiplicity;
        out.entries.back().triples.push_back(mode.k);
      } else {
        if (static_cast<int>(out.values.size()) >= m) break;
        out.entries.push_back({mode.lambda, mode.multiplicity, {mode.k}});
      }
      for (int r = 0; r < mode.multiplicity && static_cast<int>(out.values.size()) < m; ++r) {
        out.values.push_back(out.entries.back().lambda);
      }
    }
    // Any triple outside the enumerated cube has some index > cutoff.
    const double unseen = std::pow((cutoff + 1) * *std::min_element(wave.begin(), wave.end()), 2);
    if (static_cast<int>(out.values.size()) == m && out.entries.back().lambda < unseen) {
      return out;
    }
  }
}

int count_in_window(const Spectrum& spectrum, double lo, double hi) {
  const auto nz = spectrum.nonzero();
  return static_cast<int>(std::count_if(nz.begin(), nz.end(), [=](double v) { return v >= lo && v <= hi; }));
}

SpectrumComparison compare_spectra(const Spectrum& spectrum, const ExactSpectrum& exact, Window window) {
  const auto nz = spectrum.nonzero();
  if (nz.size() < exact.values.size()) {
    throw Error(ErrorKind::InsufficientSpectrum, std::to_string(nz.size()) + " nonzero eigenvalues, " +
                                                     std::to_string(exact.values.size()) + " requested");
  }
  SpectrumComparison c;
  c.window = window;
  for (std::size_t i = 0; i < exact.values.size(); ++i) {
    c.computed.push_back(nz[i]);
    c.exact.push_back(exact.values[i]);
    c.abs_error.push_back(std::abs(nz[i] - exact.values[i]));
  }
  c.window_count = count_in_window(spectrum, window.lo, window.hi);
  c.expected_window_count = exact.count_in(window.lo, window.hi);
  c.spurious = c.window_count != c.expected_window_count;
  return c;
}

double rayleigh_residual(const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
                         double lambda, const Eigen::VectorXd& u) {
  if (u.size() != stiffness.dim() || u.size() != mass.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "eigenvector length differs from the pencil");
  }
  if (u.norm() == 0.0) throw Error(ErrorKind::InvalidArgument, "zero eigenvector");
  if (lambda < 0.0) throw Error(ErrorKind::InvalidArgument, "negative eigenvalue");
  const Eigen::VectorXd ku = stiffness * u;
  const Eigen::VectorXd mu = mass * u;
  const double denom = ku.norm() + lambda * mu.norm();
  return denom == 0.0 ? 0.0 : (ku - lambda * mu).norm() / denom;
}

std::vector<double> convergence_rates(std::span<const double> h, std::span<const double> errors) {
  if (h.size() != errors.size()) throw Error(ErrorKind::InvalidArgument, "h and error lists differ in length");
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(errors[i] > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "h and errors must be positive");
    }
    if (i > 0 && !(h[i] < h[i - 1])) throw Error(ErrorKind::InvalidArgument, "h must be strictly decreasing");
  }
  std::vector<double> rates;
  for (std::size_t i = 1; i < h.size(); ++i) {
    rates.push_back(std::log(errors[i - 1] / errors[i]) / std::log(h[i - 1] / h[i]));
  }
  return rates;
}

}  // namespace wfm
