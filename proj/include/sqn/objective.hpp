#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sqn/dataset.hpp"
#include "sqn/rng.hpp"
#include "sqn/vecmath.hpp"

namespace sqn {

/// {0, 1, ..., count-1}, the full-batch sample.
std::vector<int> all_indices(int count);

/// Overflow-safe logistic function.
double sigmoid(double activation);
double sigmoid(const DenseVector& w, const SparseVector& x);

/// Probabilities are clamped into [kProbabilityFloor, 1 - kProbabilityFloor]
/// before every logarithm; gradients and Hessian-vector products use the
/// unclamped value.
inline constexpr double kProbabilityFloor = 1e-12;

/// Mini-batch objective oracle: sample-averaged value, gradient, and
/// Hessian-vector product.  Passing the full index set yields the empirical
/// quantities over the whole dataset.
class ObjectiveOracle {
 public:
  virtual ~ObjectiveOracle() = default;

  virtual int dim() const = 0;
  virtual int num_examples() const = 0;

  virtual double value_on(std::span<const int> sample, const DenseVector& w) const = 0;
  virtual DenseVector gradient_on(std::span<const int> sample, const DenseVector& w) const = 0;
  virtual DenseVector hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                        const DenseVector& direction) const = 0;

  // Abstract op counts behind the benchmark work column: 2bn per batch
  // gradient, 3bn per batch Hessian-vector product.
  virtual double gradient_work(int batch_size) const { return 2.0 * batch_size * dim(); }
  virtual double hessian_vector_work(int batch_size) const { return 3.0 * batch_size * dim(); }

  /// Predicted class for one training example; nullopt when the oracle has
  /// no decision rule (e.g. synthetic quadratics).
  virtual std::optional<int> predict(int /*example_index*/, const DenseVector& /*w*/) const {
    return std::nullopt;
  }
  virtual const Dataset* data() const { return nullptr; }
};

/// Binary logistic regression: mean negative log-likelihood over the sample.
class BinaryLogistic : public ObjectiveOracle {
 public:
  explicit BinaryLogistic(const Dataset& data);

  int dim() const override { return data_.dim(); }
  int num_examples() const override { return data_.size(); }
  double value_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector gradient_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                const DenseVector& direction) const override;
  std::optional<int> predict(int example_index, const DenseVector& w) const override;
  const Dataset* data() const override { return &data_; }

 private:
  const Dataset& data_;
};

/// Multi-class logistic regression.  Parameters form a num_classes x
/// num_features matrix flattened row-major by class, so dim() is their
/// product.
class MulticlassLogistic : public ObjectiveOracle {
 public:
  explicit MulticlassLogistic(const Dataset& data);

  int num_classes() const { return data_.num_classes(); }
  int num_features() const { return data_.dim(); }
  int dim() const override { return num_classes() * num_features(); }
  int num_examples() const override { return data_.size(); }
  double value_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector gradient_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                const DenseVector& direction) const override;
  std::optional<int> predict(int example_index, const DenseVector& w) const override;
  const Dataset* data() const override { return &data_; }

 private:
  // Class probabilities for one example, numerically stable softmax.
  void class_probabilities(const SparseExample& ex, const DenseVector& w,
                           std::vector<double>& scores) const;

  const Dataset& data_;
};

/// l2 regularization wrapper: adds 0.5*sigma*|w|^2 to the value, sigma*w to
/// the gradient, and exactly sigma*s to every Hessian-vector product.
class RidgeWrapped : public ObjectiveOracle {
 public:
  RidgeWrapped(const ObjectiveOracle& inner, double sigma);

  double sigma() const { return sigma_; }
  int dim() const override { return inner_.dim(); }
  int num_examples() const override { return inner_.num_examples(); }
  double value_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector gradient_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                const DenseVector& direction) const override;
  double gradient_work(int batch_size) const override { return inner_.gradient_work(batch_size); }
  double hessian_vector_work(int batch_size) const override {
    return inner_.hessian_vector_work(batch_size);
  }
  std::optional<int> predict(int example_index, const DenseVector& w) const override {
    return inner_.predict(example_index, w);
  }
  const Dataset* data() const override { return inner_.data(); }

 private:
  const ObjectiveOracle& inner_;
  double sigma_;
};

/// Separable quadratic 0.5 * sum_i d_i w_i^2 with an exact Hessian and a
/// stochastic gradient that adds i.i.d. zero-mean Gaussian noise per
/// coordinate.  The full index set returns the exact (noise-free) gradient,
/// matching the contract that full-batch calls yield empirical quantities.
/// The RNG stream is single-owner: do not share one instance across threads.
class NoisyQuadratic : public ObjectiveOracle {
 public:
  NoisyQuadratic(DenseVector curvature, double noise_sigma, std::uint64_t seed,
                 int nominal_examples = 1000);

  int dim() const override { return static_cast<int>(curvature_.size()); }
  int num_examples() const override { return nominal_examples_; }
  double value_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector gradient_on(std::span<const int> sample, const DenseVector& w) const override;
  DenseVector hessian_vector_on(std::span<const int> sample, const DenseVector& w,
                                const DenseVector& direction) const override;

  double exact_value(const DenseVector& w) const;
  DenseVector exact_gradient(const DenseVector& w) const;
  const DenseVector& curvature() const { return curvature_; }

 private:
  DenseVector curvature_;
  double noise_sigma_;
  mutable Rng rng_;
  int nominal_examples_;
};

}  // namespace sqn
