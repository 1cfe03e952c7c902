#pragma once

#include <vector>

namespace sqn {

/// Dense parameter vector: iterates, gradients, search directions.
using DenseVector = std::vector<double>;

/// Sparse feature vector with strictly increasing 0-based indices.
struct SparseVector {
  std::vector<int> indices;
  std::vector<double> values;

  int nnz() const { return static_cast<int>(indices.size()); }

  /// Throws std::invalid_argument unless indices are strictly increasing
  /// and every index lies in [0, dim).
  void validate(int dim) const;
};

double dot(const DenseVector& a, const DenseVector& b);
double sparse_dot(const SparseVector& x, const DenseVector& w);

// y += alpha * x
void axpy(double alpha, const DenseVector& x, DenseVector& y);
void axpy(double alpha, const SparseVector& x, DenseVector& y);

void scale(double alpha, DenseVector& y);
double norm2(const DenseVector& a);

DenseVector subtract(const DenseVector& a, const DenseVector& b);
DenseVector densify(const SparseVector& x, int dim);

}  // namespace sqn
