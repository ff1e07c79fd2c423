// SPDX-License-Identifier: Apache-2.0
#include "wfm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <tuple>

#include "wfm/error.hpp"

namespace wfm {

SymmetricSparseMatrix::SymmetricSparseMatrix(const Storage& any) {
  if (any.rows() != any.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  upper_ = any.triangularView<Eigen::Upper>();
  upper_.makeCompressed();
}

SymmetricSparseMatrix SymmetricSparseMatrix::from_triplets(int dim, const std::vector<Triplet>& triplets) {
  std::vector<Triplet> upper;
  upper.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (t.row() < 0 || t.col() < 0 || t.row() >= dim || t.col() >= dim) {
      throw Error(ErrorKind::DimensionMismatch, "triplet index out of range");
    }
    if (t.row() <= t.col()) upper.push_back(t);
  }
  SymmetricSparseMatrix m;
  m.upper_.resize(dim, dim);
  m.upper_.setFromTriplets(upper.begin(), upper.end());
  m.upper_.makeCompressed();
  return m;
}

SymmetricSparseMatrix::Storage SymmetricSparseMatrix::full() const {
  Storage f = upper_.selfadjointView<Eigen::Upper>();
  f.makeCompressed();
  return f;
}

Eigen::MatrixXd SymmetricSparseMatrix::dense() const { return Eigen::MatrixXd(full()); }

Eigen::VectorXd SymmetricSparseMatrix::operator*(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "vector length differs from matrix");
  Eigen::VectorXd y = upper_.selfadjointView<Eigen::Upper>() * x;
  return y;
}

double SymmetricSparseMatrix::quadratic_form(const Eigen::VectorXd& x) const { return x.dot(*this * x); }

double SymmetricSparseMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (int c = 0; c < upper_.outerSize(); ++c) {
    for (Storage::InnerIterator it(upper_, c); it; ++it) {
      sum += (it.row() == it.col() ? 1.0 : 2.0) * it.value() * it.value();
    }
  }
  return std::sqrt(sum);
}

void SymmetricSparseMatrix::write_coordinates(std::ostream& out) const {
  std::vector<std::tuple<int, int, double>> entries;
  entries.reserve(static_cast<std::size_t>(upper_.nonZeros()));
  for (int c = 0; c < upper_.outerSize(); ++c) {
    for (Storage::InnerIterator it(upper_, c); it; ++it) entries.emplace_back(it.row(), it.col(), it.value());
  }
  std::sort(entries.begin(), entries.end());
  char buf[96];
  for (const auto& [i, j, v] : entries) {
    std::snprintf(buf, sizeof buf, "%d %d %.16e\n", i, j, v);
    out << buf;
  }
}

}  // namespace wfm
