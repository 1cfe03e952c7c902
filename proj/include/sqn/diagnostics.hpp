#pragma once

#include <optional>
#include <span>

#include "sqn/objective.hpp"
#include "sqn/vecmath.hpp"

namespace sqn {

/// One benchmark checkpoint row.  adp counts accessed data points; work is
/// the abstract op-count model.  Optional fields stay empty when the run was
/// not configured to produce them.
struct RunRecord {
  int k = 0;
  long long adp = 0;
  double work = 0.0;
  double train_fx = 0.0;
  std::optional<double> test_fx;
  std::optional<double> test_accuracy;
  std::optional<double> grad_error;
  std::optional<double> hv_error;
  std::optional<double> grad_norm;
};

/// Convergence-theory constants for a strongly convex problem: curvature
/// bounds lambda_lo/lambda_hi on every sub-sampled Hessian, spectral bounds
/// mu1/mu2 on the inverse-Hessian approximations, and the stochastic
/// gradient-norm bound gamma.
struct TheoryParams {
  double lambda_lo = 0.0;
  double lambda_hi = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double gamma = 0.0;

  double beta_threshold() const { return 1.0 / (2.0 * mu1 * lambda_lo); }
};

/// Constant in the O(1/k) expected-gap bound:
///   max{ lambda_hi * mu2^2 * beta^2 * gamma^2 / (2 (2 mu1 lambda_lo beta - 1)),
///        f_gap_initial }.
/// Throws unless beta > beta_threshold().
double q_beta(const TheoryParams& tp, double beta, double f_gap_initial);

/// Conservative spectral bounds for the limited-memory inverse-Hessian model
/// when every pair's curvature ratios lie in [lambda_lo, lambda_hi]:
/// trace_bound caps the direct model's largest eigenvalue, and
/// [mu1, mu2] brackets the inverse model's spectrum.
struct LbfgsSpectralBounds {
  double trace_bound = 0.0;  // (dim + memory) * lambda_hi
  double mu1 = 0.0;          // 1 / trace_bound
  double mu2 = 0.0;          // trace_bound^(dim-1) / det lower bound
};

LbfgsSpectralBounds lbfgs_spectral_bounds(double lambda_lo, double lambda_hi, int dim, int memory);

/// Relative l2 error of the mini-batch gradient against the full-dataset
/// gradient at w.  Throws when the full gradient vanishes.
double grad_error(const ObjectiveOracle& oracle, const DenseVector& w,
                  std::span<const int> sample);

/// Relative l2 error of the sub-sampled Hessian-vector product against the
/// full-dataset product along wbar_curr - wbar_prev.
double hv_error(const ObjectiveOracle& oracle, const DenseVector& wbar_curr,
                const DenseVector& wbar_prev, std::span<const int> hessian_sample);

struct TestMetrics {
  double test_fx = 0.0;
  std::optional<double> test_accuracy;
};

/// Full objective on the oracle's dataset plus classification accuracy when
/// the oracle provides a decision rule.
TestMetrics test_metrics(const ObjectiveOracle& test_oracle, const DenseVector& w);

}  // namespace sqn
