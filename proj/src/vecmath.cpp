#include "sqn/vecmath.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sqn {

void SparseVector::validate(int dim) const {
  if (indices.size() != values.size()) {
    throw std::invalid_argument("sparse vector: index/value length mismatch");
  }
  int prev = -1;
  for (int idx : indices) {
    if (idx <= prev) {
      throw std::invalid_argument("sparse vector: indices must be strictly increasing");
    }
    if (idx < 0 || idx >= dim) {
      throw std::invalid_argument("sparse vector: index " + std::to_string(idx) +
                                  " out of range for dimension " + std::to_string(dim));
    }
    prev = idx;
  }
}

double dot(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("dot: dimension mismatch");
  }
  // Accumulate in the widest native floating type; no compensated summation.
  long double acc = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<long double>(a[i]) * b[i];
  return static_cast<double>(acc);
}

double sparse_dot(const SparseVector& x, const DenseVector& w) {
  long double acc = 0.0L;
  const int n = static_cast<int>(w.size());
  for (std::size_t j = 0; j < x.indices.size(); ++j) {
    const int idx = x.indices[j];
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument("sparse_dot: index out of range");
    }
    acc += static_cast<long double>(x.values[j]) * w[idx];
  }
  return static_cast<double>(acc);
}

void axpy(double alpha, const DenseVector& x, DenseVector& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("axpy: dimension mismatch");
  }
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void axpy(double alpha, const SparseVector& x, DenseVector& y) {
  const int n = static_cast<int>(y.size());
  for (std::size_t j = 0; j < x.indices.size(); ++j) {
    const int idx = x.indices[j];
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument("axpy: sparse index out of range");
    }
    y[idx] += alpha * x.values[j];
  }
}

void scale(double alpha, DenseVector& y) {
  for (double& v : y) v *= alpha;
}

double norm2(const DenseVector& a) { return std::sqrt(dot(a, a)); }

DenseVector subtract(const DenseVector& a, const DenseVector& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("subtract: dimension mismatch");
  }
  DenseVector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

DenseVector densify(const SparseVector& x, int dim) {
  x.validate(dim);
  DenseVector out(static_cast<std::size_t>(dim), 0.0);
  for (std::size_t j = 0; j < x.indices.size(); ++j) out[x.indices[j]] = x.values[j];
  return out;
}

}  // namespace sqn
