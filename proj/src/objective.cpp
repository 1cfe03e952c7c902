#include "sqn/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sqn {
namespace {

void check_sample(std::span<const int> sample, int num_examples, const char* where) {
  if (sample.empty()) throw std::invalid_argument(std::string(where) + ": empty sample");
  for (int i : sample) {
    if (i < 0 || i >= num_examples) {
      throw std::invalid_argument(std::string(where) + ": example index out of range");
    }
  }
}

void check_dim(const DenseVector& w, int dim, const char* where) {
  if (static_cast<int>(w.size()) != dim) {
    throw std::invalid_argument(std::string(where) + ": parameter dimension mismatch");
  }
}

double clamped_log(double p) {
  return std::log(std::clamp(p, kProbabilityFloor, 1.0 - kProbabilityFloor));
}

}  // namespace

std::vector<int> all_indices(int count) {
  std::vector<int> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

double sigmoid(double activation) {
  if (activation >= 0.0) return 1.0 / (1.0 + std::exp(-activation));
  const double e = std::exp(activation);
  return e / (1.0 + e);
}

double sigmoid(const DenseVector& w, const SparseVector& x) {
  return sigmoid(sparse_dot(x, w));
}

// ---------------------------------------------------------------------------
// BinaryLogistic

BinaryLogistic::BinaryLogistic(const Dataset& data) : data_(data) {
  if (data.num_classes() != 2) {
    throw std::invalid_argument("binary logistic: dataset is not binary");
  }
}

double BinaryLogistic::value_on(std::span<const int> sample, const DenseVector& w) const {
  check_sample(sample, data_.size(), "binary value");
  check_dim(w, dim(), "binary value");
  double acc = 0.0;
  for (int i : sample) {
    const SparseExample& ex = data_.example(i);
    const double c = sigmoid(w, ex.features);
    acc -= ex.label == 1 ? clamped_log(c) : clamped_log(1.0 - c);
  }
  return acc / static_cast<double>(sample.size());
}

DenseVector BinaryLogistic::gradient_on(std::span<const int> sample, const DenseVector& w) const {
  check_sample(sample, data_.size(), "binary gradient");
  check_dim(w, dim(), "binary gradient");
  DenseVector g(w.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(sample.size());
  for (int i : sample) {
    const SparseExample& ex = data_.example(i);
    const double c = sigmoid(w, ex.features);
    axpy((c - ex.label) * inv_b, ex.features, g);
  }
  return g;
}

DenseVector BinaryLogistic::hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                              const DenseVector& direction) const {
  check_sample(sample, data_.size(), "binary hessian-vector");
  check_dim(w, dim(), "binary hessian-vector");
  check_dim(direction, dim(), "binary hessian-vector");
  DenseVector hv(w.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(sample.size());
  for (int i : sample) {
    const SparseExample& ex = data_.example(i);
    const double c = sigmoid(w, ex.features);
    const double xs = sparse_dot(ex.features, direction);
    axpy(c * (1.0 - c) * xs * inv_b, ex.features, hv);
  }
  return hv;
}

std::optional<int> BinaryLogistic::predict(int example_index, const DenseVector& w) const {
  check_dim(w, dim(), "binary predict");
  const double c = sigmoid(w, data_.example(example_index).features);
  return c >= 0.5 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// MulticlassLogistic

MulticlassLogistic::MulticlassLogistic(const Dataset& data) : data_(data) {
  if (data.num_classes() < 2) {
    throw std::invalid_argument("multiclass logistic: need at least two classes");
  }
}

void MulticlassLogistic::class_probabilities(const SparseExample& ex, const DenseVector& w,
                                             std::vector<double>& probs) const {
  const int nc = num_classes();
  const int nf = num_features();
  probs.resize(nc);
  for (int c = 0; c < nc; ++c) {
    double a = 0.0;
    for (int j = 0; j < ex.features.nnz(); ++j) {
      a += w[c * nf + ex.features.indices[j]] * ex.features.values[j];
    }
    probs[c] = a;
  }
  const double top = *std::max_element(probs.begin(), probs.end());
  double z = 0.0;
  for (int c = 0; c < nc; ++c) {
    probs[c] = std::exp(probs[c] - top);
    z += probs[c];
  }
  for (int c = 0; c < nc; ++c) probs[c] /= z;
}

double MulticlassLogistic::value_on(std::span<const int> sample, const DenseVector& w) const {
  check_sample(sample, data_.size(), "multiclass value");
  check_dim(w, dim(), "multiclass value");
  std::vector<double> probs;
  double acc = 0.0;
  for (int i : sample) {
    const SparseExample& ex = data_.example(i);
    class_probabilities(ex, w, probs);
    acc -= clamped_log(probs[ex.label]);
  }
  return acc / static_cast<double>(sample.size());
}

DenseVector MulticlassLogistic::gradient_on(std::span<const int> sample,
                                            const DenseVector& w) const {
  check_sample(sample, data_.size(), "multiclass gradient");
  check_dim(w, dim(), "multiclass gradient");
  const int nc = num_classes();
  const int nf = num_features();
  DenseVector g(w.size(), 0.0);
  std::vector<double> probs;
  const double inv_b = 1.0 / static_cast<double>(sample.size());
  for (int i : sample) {
    const SparseExample& ex = data_.example(i);
    class_probabilities(ex, w, probs);
    for (int c = 0; c < nc; ++c) {
      const double coeff = (probs[c] - (c == ex.label ? 1.0 : 0.0)) * inv_b;
      for (int j = 0; j < ex.features.nnz(); ++j) {
        g[c * nf + ex.features.indices[j]] += coeff * ex.features.values[j];
      }
    }
  }
  return g;
}

DenseVector MulticlassLogistic::hessian_vector_on(std::span<const int> sample,
                                                  const DenseVector& w,
                                                  const DenseVector& direction) const {
  check_sample(sample, data_.size(), "multiclass hessian-vector");
  check_dim(w, dim(), "multiclass hessian-vector");
  check_dim(direction, dim(), "multiclass hessian-vector");
  const int nc = num_classes();
  const int nf = num_features();
  DenseVector hv(w.size(), 0.0);
  std::vector<double> probs;
  std::vector<double> q(nc);
  const double inv_b = 1.0 / static_cast<double>(sample.size());
  for (int i : sample) {
    const SparseExample& ex = data_.example(i);
    class_probabilities(ex, w, probs);
    // q = (direction as a matrix) * x; the Gauss-Newton row mix is
    // r = p .* q - p * (p.q), and the contribution is r x^T.
    double pq = 0.0;
    for (int c = 0; c < nc; ++c) {
      double a = 0.0;
      for (int j = 0; j < ex.features.nnz(); ++j) {
        a += direction[c * nf + ex.features.indices[j]] * ex.features.values[j];
      }
      q[c] = a;
      pq += probs[c] * a;
    }
    for (int c = 0; c < nc; ++c) {
      const double coeff = probs[c] * (q[c] - pq) * inv_b;
      for (int j = 0; j < ex.features.nnz(); ++j) {
        hv[c * nf + ex.features.indices[j]] += coeff * ex.features.values[j];
      }
    }
  }
  return hv;
}

std::optional<int> MulticlassLogistic::predict(int example_index, const DenseVector& w) const {
  check_dim(w, dim(), "multiclass predict");
  const SparseExample& ex = data_.example(example_index);
  const int nc = num_classes();
  const int nf = num_features();
  int best = 0;
  double best_score = 0.0;
  for (int c = 0; c < nc; ++c) {
    double a = 0.0;
    for (int j = 0; j < ex.features.nnz(); ++j) {
      a += w[c * nf + ex.features.indices[j]] * ex.features.values[j];
    }
    if (c == 0 || a > best_score) {
      best = c;
      best_score = a;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// RidgeWrapped

RidgeWrapped::RidgeWrapped(const ObjectiveOracle& inner, double sigma)
    : inner_(inner), sigma_(sigma) {
  if (sigma < 0.0) throw std::invalid_argument("ridge: sigma must be nonnegative");
}

double RidgeWrapped::value_on(std::span<const int> sample, const DenseVector& w) const {
  const double wn = dot(w, w);
  return inner_.value_on(sample, w) + 0.5 * sigma_ * wn;
}

DenseVector RidgeWrapped::gradient_on(std::span<const int> sample, const DenseVector& w) const {
  DenseVector g = inner_.gradient_on(sample, w);
  axpy(sigma_, w, g);
  return g;
}

DenseVector RidgeWrapped::hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                            const DenseVector& direction) const {
  DenseVector hv = inner_.hessian_vector_on(sample, w, direction);
  axpy(sigma_, direction, hv);
  return hv;
}

// ---------------------------------------------------------------------------
// NoisyQuadratic

NoisyQuadratic::NoisyQuadratic(DenseVector curvature, double noise_sigma, std::uint64_t seed,
                               int nominal_examples)
    : curvature_(std::move(curvature)),
      noise_sigma_(noise_sigma),
      rng_(seed),
      nominal_examples_(nominal_examples) {
  if (curvature_.empty()) throw std::invalid_argument("quadratic: empty curvature");
  for (double d : curvature_) {
    if (!(d > 0.0)) throw std::invalid_argument("quadratic: curvature must be positive");
  }
  if (noise_sigma_ < 0.0) throw std::invalid_argument("quadratic: noise sigma must be nonnegative");
  if (nominal_examples_ < 1) throw std::invalid_argument("quadratic: need a positive example count");
}

double NoisyQuadratic::exact_value(const DenseVector& w) const {
  check_dim(w, dim(), "quadratic value");
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += curvature_[i] * w[i] * w[i];
  return 0.5 * acc;
}

DenseVector NoisyQuadratic::exact_gradient(const DenseVector& w) const {
  check_dim(w, dim(), "quadratic gradient");
  DenseVector g(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) g[i] = curvature_[i] * w[i];
  return g;
}

double NoisyQuadratic::value_on(std::span<const int> sample, const DenseVector& w) const {
  check_sample(sample, nominal_examples_, "quadratic value");
  return exact_value(w);
}

DenseVector NoisyQuadratic::gradient_on(std::span<const int> sample, const DenseVector& w) const {
  check_sample(sample, nominal_examples_, "quadratic gradient");
  DenseVector g = exact_gradient(w);
  const bool full_batch = static_cast<int>(sample.size()) >= nominal_examples_;
  if (noise_sigma_ > 0.0 && !full_batch) {
    for (double& gi : g) gi += noise_sigma_ * standard_normal(rng_);
  }
  return g;
}

DenseVector NoisyQuadratic::hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                              const DenseVector& direction) const {
  check_sample(sample, nominal_examples_, "quadratic hessian-vector");
  check_dim(w, dim(), "quadratic hessian-vector");
  check_dim(direction, dim(), "quadratic hessian-vector");
  DenseVector hv(direction.size());
  for (std::size_t i = 0; i < direction.size(); ++i) hv[i] = curvature_[i] * direction[i];
  return hv;
}

}  // namespace sqn
