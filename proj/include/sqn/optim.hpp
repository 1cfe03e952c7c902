#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sqn/diagnostics.hpp"
#include "sqn/lbfgs.hpp"
#include "sqn/objective.hpp"
#include "sqn/sampling.hpp"
#include "sqn/vecmath.hpp"

namespace sqn {

/// Diminishing step length beta / k, k >= 1.
struct StepSchedule {
  double beta = 1.0;
  double at(int k) const;
};

/// Cumulative accounting for one optimization run.  adp counts accessed data
/// points; work follows the abstract op model (2bn per gradient, 4Mn per
/// two-loop product, 3bn per Hessian-vector product).
struct RunCounters {
  long long iterations = 0;
  long long adp = 0;
  double work = 0.0;
  long long gradient_evals = 0;
  long long hessian_vector_products = 0;
  long long two_loop_applications = 0;
  long long pairs_stored = 0;
  long long pairs_rejected = 0;           // failed the curvature threshold
  long long pairs_zero_displacement = 0;  // skipped before any Hessian work
};

/// w -= alpha * direction.  Every optimizer funnels its update through this
/// helper, which keeps warmup iterations of different methods bit-identical.
void apply_step(DenseVector& w, double alpha, const DenseVector& direction);

/// Averaged iterates and sample behind the most recent correction-pair
/// computation; retained so monitors can re-derive its quality.
struct PairContext {
  DenseVector wbar_curr;
  DenseVector wbar_prev;
  std::vector<int> hessian_sample;
};

// ---------------------------------------------------------------------------

struct SgdOptions {
  int batch_size = 50;
  double beta = 1.0;
};

class SgdOptimizer {
 public:
  SgdOptimizer(DenseVector w0, SgdOptions opt);

  void step(const ObjectiveOracle& oracle, EpochSampler& grad_sampler, RunCounters& counters);

  const DenseVector& iterate() const { return w_; }
  int iteration() const { return k_; }
  const SgdOptions& options() const { return opt_; }

  const DenseVector& last_eval_point() const { return last_point_; }
  const std::vector<int>& last_sample() const { return last_sample_; }
  const DenseVector& last_gradient() const { return last_gradient_; }

 private:
  SgdOptions opt_;
  DenseVector w_;
  int k_ = 0;
  DenseVector last_point_;
  std::vector<int> last_sample_;
  DenseVector last_gradient_;
};

// ---------------------------------------------------------------------------

struct SqnOptions {
  int batch_size = 50;            // b
  int hessian_batch_size = 1000;  // b_H
  int update_spacing = 20;        // L, iterations between correction pairs
  int memory_size = 5;            // M
  double beta = 1.0;
  double epsilon_curv = kDefaultCurvatureThreshold;
};

/// Stochastic quasi-Newton method: plain stochastic gradient iterations while
/// the model warms up (the first 2L iterations), then two-loop quasi-Newton
/// steps.  Every L iterations the average of the last L iterates is formed;
/// from the second average onward, the difference of consecutive averages and
/// a sub-sampled Hessian-vector product along it yield a correction pair.
class SqnOptimizer {
 public:
  SqnOptimizer(DenseVector w0, SqnOptions opt);

  void step(const ObjectiveOracle& oracle, EpochSampler& grad_sampler, Rng& hessian_rng,
            RunCounters& counters);

  const DenseVector& iterate() const { return w_; }
  int iteration() const { return k_; }
  /// Number of completed averaging windows minus one (starts at -1; the
  /// first window only seeds the anchor).
  int pair_count() const { return t_; }
  const LbfgsMemory& memory() const { return mem_; }
  const SqnOptions& options() const { return opt_; }

  const DenseVector& last_eval_point() const { return last_point_; }
  const std::vector<int>& last_sample() const { return last_sample_; }
  const DenseVector& last_gradient() const { return last_gradient_; }
  bool has_pair_context() const { return has_pair_ctx_; }
  const PairContext& pair_context() const { return pair_ctx_; }

 private:
  SqnOptions opt_;
  DenseVector w_;
  int k_ = 0;
  int t_ = -1;
  DenseVector wbar_accum_;
  DenseVector wbar_prev_;
  LbfgsMemory mem_;
  DenseVector last_point_;
  std::vector<int> last_sample_;
  DenseVector last_gradient_;
  PairContext pair_ctx_;
  bool has_pair_ctx_ = false;
};

// ---------------------------------------------------------------------------

struct OlbfgsOptions {
  int batch_size = 50;
  int memory_size = 5;  // M
  double beta = 1.0;
  /// Damping factor on the very first step, taken before any curvature
  /// information exists.
  double epsilon_first_step = 1e-6;
  double epsilon_curv = kDefaultCurvatureThreshold;
  /// When set, the curvature response is the Hessian-vector product along
  /// the step on the same sample instead of the gradient difference.  The
  /// two definitions coincide exactly on quadratics; this switch isolates
  /// the pair-construction mechanism for comparison studies.
  bool hessian_vector_pairs = false;
};

/// Online L-BFGS baseline: one correction pair per iteration from two
/// evaluations on the same sample, initial scaling averaged over the stored
/// pairs' s.y/y.y quotients.
class OlbfgsOptimizer {
 public:
  OlbfgsOptimizer(DenseVector w0, OlbfgsOptions opt);

  void step(const ObjectiveOracle& oracle, EpochSampler& grad_sampler, RunCounters& counters);

  const DenseVector& iterate() const { return w_; }
  int iteration() const { return k_; }
  const LbfgsMemory& memory() const { return mem_; }
  const OlbfgsOptions& options() const { return opt_; }

  const DenseVector& last_eval_point() const { return last_point_; }
  const std::vector<int>& last_sample() const { return last_sample_; }
  const DenseVector& last_gradient() const { return last_gradient_; }

  /// Mean of s.y/y.y over stored pairs; the initial two-loop scaling.  With
  /// memory 0 this is the newest accepted pair's quotient.
  double averaged_scale() const;

 private:
  OlbfgsOptions opt_;
  DenseVector w_;
  int k_ = 0;
  LbfgsMemory mem_;
  DenseVector last_point_;
  std::vector<int> last_sample_;
  DenseVector last_gradient_;
};

// ---------------------------------------------------------------------------

enum class Method { Sgd, Sqn, Olbfgs };

struct OptimizerConfig {
  Method method = Method::Sgd;
  int batch_size = 50;
  int hessian_batch_size = 1000;
  int update_spacing = 20;
  int memory_size = 5;
  double beta = 1.0;
  double epsilon_curv = kDefaultCurvatureThreshold;
  double epsilon_first_step = 1e-6;
};

/// Exactly one of the two limits must be set.  An epoch budget resolves to
/// ceil(epochs * N / b) iterations.
struct StopRule {
  std::optional<double> max_epochs;
  std::optional<long long> max_iters;
};

struct MonitorConfig {
  bool errors = false;  // per-checkpoint gradient/Hessian-vector relative errors
  const ObjectiveOracle* test_oracle = nullptr;
};

struct RunSeeds {
  std::uint64_t gradient = 2;
  std::uint64_t hessian = 3;
};

struct RunOutcome {
  std::vector<RunRecord> records;
  RunCounters counters;
  DenseVector final_iterate;
};

/// Drives the configured optimizer from w0, recording a checkpoint row every
/// checkpoint_every iterations and at the final iteration.  Deterministic
/// for fixed seeds.
RunOutcome run(const OptimizerConfig& cfg, const ObjectiveOracle& oracle, const DenseVector& w0,
               const StopRule& stop, int checkpoint_every, const MonitorConfig& monitor,
               const RunSeeds& seeds);

}  // namespace sqn
