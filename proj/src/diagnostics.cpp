#include "sqn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqn {

double q_beta(const TheoryParams& tp, double beta, double f_gap_initial) {
  if (!(tp.lambda_lo > 0.0) || tp.lambda_hi < tp.lambda_lo) {
    throw std::invalid_argument("q_beta: need 0 < lambda_lo <= lambda_hi");
  }
  if (!(tp.mu1 > 0.0) || tp.mu2 < tp.mu1) {
    throw std::invalid_argument("q_beta: need 0 < mu1 <= mu2");
  }
  if (!(beta > tp.beta_threshold())) {
    throw std::invalid_argument("q_beta: beta must exceed 1/(2*mu1*lambda_lo)");
  }
  const double noise_term = tp.lambda_hi * tp.mu2 * tp.mu2 * beta * beta * tp.gamma * tp.gamma /
                            (2.0 * (2.0 * tp.mu1 * tp.lambda_lo * beta - 1.0));
  return std::max(noise_term, f_gap_initial);
}

LbfgsSpectralBounds lbfgs_spectral_bounds(double lambda_lo, double lambda_hi, int dim,
                                          int memory) {
  if (!(lambda_lo > 0.0) || lambda_hi < lambda_lo) {
    throw std::invalid_argument("spectral bounds: need 0 < lambda_lo <= lambda_hi");
  }
  if (dim < 1 || memory < 0) {
    throw std::invalid_argument("spectral bounds: bad dimensions");
  }
  LbfgsSpectralBounds b;
  // Trace grows by at most lambda_hi per update, from a start of at most
  // dim * lambda_hi, so the direct model's eigenvalues never exceed this.
  b.trace_bound = (dim + memory) * lambda_hi;
  b.mu1 = 1.0 / b.trace_bound;
  // Determinant lower bound: lambda_lo^dim * (lambda_lo / trace_bound)^memory.
  // The smallest eigenvalue of the direct model is then at least
  // det / trace_bound^(dim-1); invert for the upper bound.  Computed in log
  // space because the constants are astronomically conservative.
  const double log_det_lo =
      dim * std::log(lambda_lo) + memory * (std::log(lambda_lo) - std::log(b.trace_bound));
  b.mu2 = std::exp((dim - 1) * std::log(b.trace_bound) - log_det_lo);
  return b;
}

double grad_error(const ObjectiveOracle& oracle, const DenseVector& w,
                  std::span<const int> sample) {
  const std::vector<int> full = all_indices(oracle.num_examples());
  const DenseVector g_full = oracle.gradient_on(full, w);
  const double denom = norm2(g_full);
  if (denom == 0.0) throw std::invalid_argument("grad_error: full gradient is zero");
  const DenseVector g_batch = oracle.gradient_on(sample, w);
  return norm2(subtract(g_full, g_batch)) / denom;
}

double hv_error(const ObjectiveOracle& oracle, const DenseVector& wbar_curr,
                const DenseVector& wbar_prev, std::span<const int> hessian_sample) {
  const DenseVector s = subtract(wbar_curr, wbar_prev);
  const std::vector<int> full = all_indices(oracle.num_examples());
  const DenseVector hv_full = oracle.hessian_vector_on(full, wbar_curr, s);
  const double denom = norm2(hv_full);
  if (denom == 0.0) throw std::invalid_argument("hv_error: full Hessian-vector product is zero");
  const DenseVector hv_batch = oracle.hessian_vector_on(hessian_sample, wbar_curr, s);
  return norm2(subtract(hv_full, hv_batch)) / denom;
}

TestMetrics test_metrics(const ObjectiveOracle& test_oracle, const DenseVector& w) {
  const int n = test_oracle.num_examples();
  if (n < 1) throw std::invalid_argument("test_metrics: empty test set");
  TestMetrics m;
  m.test_fx = test_oracle.value_on(all_indices(n), w);
  const Dataset* data = test_oracle.data();
  if (data != nullptr) {
    int correct = 0;
    bool have_rule = true;
    for (int i = 0; i < n; ++i) {
      const std::optional<int> pred = test_oracle.predict(i, w);
      if (!pred) {
        have_rule = false;
        break;
      }
      if (*pred == data->example(i).label) ++correct;
    }
    if (have_rule) m.test_accuracy = static_cast<double>(correct) / n;
  }
  return m;
}

}  // namespace sqn
