// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "wfm/mesh.hpp"
#include "wfm/sparse.hpp"

namespace wfm {

enum class EigenvectorSelection {
  None,
  All,
  /// The first `num_physical` eigenpairs above the zero-mode cluster.
  Physical,
};

struct SolveOptions {
  /// Zero modes: lambda < zero_tol * max(lambda).
  double zero_tol = 1e-8;
  /// Largest dimension accepted by the dense path.
  int dense_cap = 12000;
  EigenvectorSelection vectors = EigenvectorSelection::None;
  int num_physical = 13;
};

struct Spectrum {
  std::vector<double> eigenvalues;  // ascending
  int zero_count = 0;
  double zero_threshold = 0.0;
  /// M-orthonormal columns; column i belongs to eigenvalues[vector_indices[i]].
  Eigen::MatrixXd eigenvectors;
  std::vector<int> vector_indices;

  /// Only part of the spectrum was computed (iterative path); zero_count is
  /// then unknown and reported as -1.
  bool partial = false;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  std::span<const double> nonzero() const {
    return std::span<const double>(eigenvalues).subspan(static_cast<std::size_t>(std::max(zero_count, 0)));
  }
};

/// Full spectrum of K u = lambda M u via a Cholesky reduction of M to a
/// standard dense symmetric problem.
///
/// Throws NotPositiveDefinite when M cannot be factored and ProblemTooLarge
/// above the dense cap.
Spectrum solve_generalized(const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
                           const SolveOptions& options = {});
Spectrum solve_generalized(Eigen::MatrixXd stiffness, Eigen::MatrixXd mass, const SolveOptions& options = {});

struct ShiftInvertOptions {
  /// Target shift; must not be an eigenvalue. Kernel modes map to -1/shift.
  double shift = 1.0;
  int num_eigs = 13;
  /// Lanczos basis size limit.
  int max_basis = 400;
  /// Ritz residual bound relative to the Ritz value.
  double tol = 1e-10;
  unsigned seed = 1;
};

/// Shift-invert Lanczos with full M-reorthogonalization on (K - shift M)^{-1} M
/// using a sparse LDL^T factorization. Returns the `num_eigs` smallest
/// eigenvalues above the shift, plus any non-kernel eigenvalues below it that
/// converged, together with M-orthonormal eigenvectors. Kernel modes are
/// discarded, so the result is marked partial.
Spectrum solve_shift_invert(const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
                            const ShiftInvertOptions& options = {});

struct ExactSpectrumEntry {
  double lambda = 0.0;
  int multiplicity = 0;
  std::vector<std::array<int, 3>> triples;
};

struct ExactSpectrum {
  /// Distinct eigenvalues covering at least the first m values.
  std::vector<ExactSpectrumEntry> entries;
  /// The first m eigenvalues repeated by multiplicity.
  std::vector<double> values;

  /// Sum of multiplicities of the entries with lambda in [lo, hi].
  int count_in(double lo, double hi) const;
};

/// Maxwell eigenvalues of a box with perfectly conducting walls:
/// lambda = sum_i (k_i pi / L_i)^2 over triples with at most one zero index;
/// a triple contributes 2 modes when all indices are positive and 1 otherwise.
ExactSpectrum exact_box_spectrum(int m, const Box& box = Box::cube(0.0, 3.14159265358979323846));

struct Window {
  double lo = 1.5;
  double hi = 2.5;
};

struct SpectrumComparison {
  std::vector<double> computed;
  std::vector<double> exact;
  std::vector<double> abs_error;
  Window window;
  /// Nonzero computed eigenvalues in the window.
  int window_count = 0;
  /// Exact multiplicity inside the window.
  int expected_window_count = 0;
  bool spurious = false;
};

/// Pairs the nonzero computed eigenvalues positionally with exact.values.
/// Throws InsufficientSpectrum when fewer nonzero values are available.
SpectrumComparison compare_spectra(const Spectrum& spectrum, const ExactSpectrum& exact,
                                   Window window = {});

/// Number of eigenvalues (zero modes excluded) in [lo, hi].
int count_in_window(const Spectrum& spectrum, double lo, double hi);

/// ||K u - lambda M u|| / (||K u|| + lambda ||M u||).
double rayleigh_residual(const SymmetricSparseMatrix& stiffness, const SymmetricSparseMatrix& mass,
                         double lambda, const Eigen::VectorXd& u);

/// r_i = ln(e_{i-1} / e_i) / ln(h_{i-1} / h_i).
std::vector<double> convergence_rates(std::span<const double> h, std::span<const double> errors);

}  // namespace wfm
