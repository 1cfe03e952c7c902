#include "sqn/optim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace sqn {

double StepSchedule::at(int k) const {
  if (k < 1) throw std::invalid_argument("step schedule: iteration index must be >= 1");
  return beta / static_cast<double>(k);
}

void apply_step(DenseVector& w, double alpha, const DenseVector& direction) {
  axpy(-alpha, direction, w);
}

// ---------------------------------------------------------------------------
// SGD

SgdOptimizer::SgdOptimizer(DenseVector w0, SgdOptions opt) : opt_(opt), w_(std::move(w0)) {
  if (opt_.batch_size < 1) throw std::invalid_argument("sgd: batch size must be positive");
  if (!(opt_.beta > 0.0)) throw std::invalid_argument("sgd: beta must be positive");
}

void SgdOptimizer::step(const ObjectiveOracle& oracle, EpochSampler& grad_sampler,
                        RunCounters& counters) {
  const int k = ++k_;
  grad_sampler.next_batch(opt_.batch_size, last_sample_);
  last_point_ = w_;
  last_gradient_ = oracle.gradient_on(last_sample_, w_);
  ++counters.gradient_evals;
  counters.adp += opt_.batch_size;
  counters.work += oracle.gradient_work(opt_.batch_size);
  apply_step(w_, StepSchedule{opt_.beta}.at(k), last_gradient_);
  counters.iterations = k_;
}

// ---------------------------------------------------------------------------
// SQN

SqnOptimizer::SqnOptimizer(DenseVector w0, SqnOptions opt)
    : opt_(opt),
      w_(std::move(w0)),
      wbar_accum_(w_.size(), 0.0),
      mem_(opt.memory_size) {
  if (opt_.batch_size < 1) throw std::invalid_argument("sqn: batch size must be positive");
  if (opt_.hessian_batch_size < 1) {
    throw std::invalid_argument("sqn: Hessian batch size must be positive");
  }
  if (opt_.update_spacing < 1) throw std::invalid_argument("sqn: update spacing must be >= 1");
  if (opt_.memory_size < 0) throw std::invalid_argument("sqn: memory size must be nonnegative");
  if (!(opt_.beta > 0.0)) throw std::invalid_argument("sqn: beta must be positive");
}

void SqnOptimizer::step(const ObjectiveOracle& oracle, EpochSampler& grad_sampler,
                        Rng& hessian_rng, RunCounters& counters) {
  const int k = ++k_;
  const int spacing = opt_.update_spacing;

  grad_sampler.next_batch(opt_.batch_size, last_sample_);
  last_point_ = w_;
  last_gradient_ = oracle.gradient_on(last_sample_, w_);
  ++counters.gradient_evals;
  counters.adp += opt_.batch_size;
  counters.work += oracle.gradient_work(opt_.batch_size);

  axpy(1.0, w_, wbar_accum_);

  const double alpha = StepSchedule{opt_.beta}.at(k);
  if (k <= 2 * spacing || !mem_.has_scaling()) {
    // Warmup (and the only reachable fallback if every early pair was
    // skipped): plain stochastic gradient iteration.
    apply_step(w_, alpha, last_gradient_);
  } else {
    const DenseVector direction = two_loop_apply(mem_, last_gradient_);
    ++counters.two_loop_applications;
    counters.work += 4.0 * opt_.memory_size * oracle.dim();
    apply_step(w_, alpha, direction);
  }

  if (k % spacing == 0) {
    ++t_;
    DenseVector wbar_curr = wbar_accum_;
    scale(1.0 / spacing, wbar_curr);
    if (t_ > 0) {
      std::vector<int> hess_sample =
          sample_without_replacement(hessian_rng, oracle.num_examples(), opt_.hessian_batch_size);
      std::optional<CorrectionPair> cand =
          make_correction_pair(wbar_curr, wbar_prev_, oracle, hess_sample);
      if (cand) {
        ++counters.hessian_vector_products;
        counters.adp += opt_.hessian_batch_size;
        counters.work += oracle.hessian_vector_work(opt_.hessian_batch_size);
        pair_ctx_ = PairContext{wbar_curr, wbar_prev_, std::move(hess_sample)};
        has_pair_ctx_ = true;
        if (accept_pair(*cand, opt_.epsilon_curv)) {
          mem_.insert(std::move(*cand));
          ++counters.pairs_stored;
        } else {
          ++counters.pairs_rejected;
        }
      } else {
        ++counters.pairs_zero_displacement;
      }
    }
    // The new average replaces the anchor whether or not a pair was kept, so
    // consecutive averaging windows stay disjoint.
    wbar_prev_ = std::move(wbar_curr);
    std::fill(wbar_accum_.begin(), wbar_accum_.end(), 0.0);
  }
  counters.iterations = k_;
}

// ---------------------------------------------------------------------------
// oLBFGS

OlbfgsOptimizer::OlbfgsOptimizer(DenseVector w0, OlbfgsOptions opt)
    : opt_(opt), w_(std::move(w0)), mem_(opt.memory_size) {
  if (opt_.batch_size < 1) throw std::invalid_argument("olbfgs: batch size must be positive");
  if (opt_.memory_size < 0) throw std::invalid_argument("olbfgs: memory size must be nonnegative");
  if (!(opt_.beta > 0.0)) throw std::invalid_argument("olbfgs: beta must be positive");
  if (!(opt_.epsilon_first_step > 0.0)) {
    throw std::invalid_argument("olbfgs: first-step scale must be positive");
  }
}

double OlbfgsOptimizer::averaged_scale() const {
  if (mem_.count() < 1) return mem_.initial_scale();  // memory 0: scalar model
  double acc = 0.0;
  for (int i = 0; i < mem_.count(); ++i) {
    acc += mem_.pair(i).sy / mem_.pair(i).yy;
  }
  return acc / mem_.count();
}

void OlbfgsOptimizer::step(const ObjectiveOracle& oracle, EpochSampler& grad_sampler,
                           RunCounters& counters) {
  const int k = ++k_;
  const int b = opt_.batch_size;

  grad_sampler.next_batch(b, last_sample_);
  last_point_ = w_;
  last_gradient_ = oracle.gradient_on(last_sample_, w_);
  ++counters.gradient_evals;
  counters.adp += b;

  const double alpha = StepSchedule{opt_.beta}.at(k);
  DenseVector w_next = w_;
  if (!mem_.has_scaling()) {
    apply_step(w_next, opt_.epsilon_first_step * alpha, last_gradient_);
  } else {
    const DenseVector direction = two_loop_apply(mem_, last_gradient_, averaged_scale());
    ++counters.two_loop_applications;
    apply_step(w_next, alpha, direction);
  }

  // Curvature pair from the same sample as the step's gradient.
  DenseVector s = subtract(w_next, w_);
  DenseVector y;
  if (opt_.hessian_vector_pairs) {
    y = oracle.hessian_vector_on(last_sample_, w_next, s);
    ++counters.hessian_vector_products;
    counters.adp += b;
    counters.work += oracle.gradient_work(b) + oracle.hessian_vector_work(b) +
                     4.0 * opt_.memory_size * oracle.dim();
  } else {
    DenseVector g_next = oracle.gradient_on(last_sample_, w_next);
    ++counters.gradient_evals;
    counters.adp += b;
    counters.work += 2.0 * oracle.gradient_work(b) + 4.0 * opt_.memory_size * oracle.dim();
    y = subtract(g_next, last_gradient_);
  }
  CorrectionPair cand = make_pair(std::move(s), std::move(y));
  if (accept_pair(cand, opt_.epsilon_curv)) {
    mem_.insert(std::move(cand));
    ++counters.pairs_stored;
  } else {
    ++counters.pairs_rejected;
  }

  w_ = std::move(w_next);
  counters.iterations = k_;
}

// ---------------------------------------------------------------------------
// Run driver

namespace {

long long resolve_iterations(const StopRule& stop, int num_examples, int batch_size) {
  if (stop.max_epochs.has_value() == stop.max_iters.has_value()) {
    throw std::invalid_argument("run: set exactly one of max_epochs / max_iters");
  }
  if (stop.max_iters) {
    if (*stop.max_iters < 1) throw std::invalid_argument("run: max_iters must be positive");
    return *stop.max_iters;
  }
  if (!(*stop.max_epochs > 0.0)) throw std::invalid_argument("run: max_epochs must be positive");
  const double iters = std::ceil(*stop.max_epochs * num_examples / batch_size);
  return static_cast<long long>(iters);
}

}  // namespace

RunOutcome run(const OptimizerConfig& cfg, const ObjectiveOracle& oracle, const DenseVector& w0,
               const StopRule& stop, int checkpoint_every, const MonitorConfig& monitor,
               const RunSeeds& seeds) {
  if (checkpoint_every < 1) throw std::invalid_argument("run: checkpoint_every must be >= 1");
  if (static_cast<int>(w0.size()) != oracle.dim()) {
    throw std::invalid_argument("run: starting point dimension mismatch");
  }
  const int n_examples = oracle.num_examples();
  if (cfg.batch_size > n_examples) {
    throw std::invalid_argument("run: batch size exceeds the dataset size");
  }
  if (cfg.method == Method::Sqn && cfg.hessian_batch_size > n_examples) {
    throw std::invalid_argument("run: Hessian batch size exceeds the dataset size");
  }
  const long long total_iters = resolve_iterations(stop, n_examples, cfg.batch_size);

  EpochSampler grad_sampler(n_examples, seeds.gradient);
  Rng hessian_rng(seeds.hessian);

  std::optional<SgdOptimizer> sgd;
  std::optional<SqnOptimizer> sqn;
  std::optional<OlbfgsOptimizer> olbfgs;
  switch (cfg.method) {
    case Method::Sgd:
      sgd.emplace(w0, SgdOptions{cfg.batch_size, cfg.beta});
      break;
    case Method::Sqn:
      sqn.emplace(w0, SqnOptions{cfg.batch_size, cfg.hessian_batch_size, cfg.update_spacing,
                                 cfg.memory_size, cfg.beta, cfg.epsilon_curv});
      break;
    case Method::Olbfgs:
      olbfgs.emplace(w0, OlbfgsOptions{cfg.batch_size, cfg.memory_size, cfg.beta,
                                       cfg.epsilon_first_step, cfg.epsilon_curv});
      break;
  }

  RunOutcome out;
  RunCounters& counters = out.counters;
  const std::vector<int> full = all_indices(n_examples);

  for (long long k = 1; k <= total_iters; ++k) {
    const DenseVector* w = nullptr;
    const DenseVector* last_point = nullptr;
    const std::vector<int>* last_sample = nullptr;
    const DenseVector* last_gradient = nullptr;
    if (sgd) {
      sgd->step(oracle, grad_sampler, counters);
      w = &sgd->iterate();
      last_point = &sgd->last_eval_point();
      last_sample = &sgd->last_sample();
      last_gradient = &sgd->last_gradient();
    } else if (sqn) {
      sqn->step(oracle, grad_sampler, hessian_rng, counters);
      w = &sqn->iterate();
      last_point = &sqn->last_eval_point();
      last_sample = &sqn->last_sample();
      last_gradient = &sqn->last_gradient();
    } else {
      olbfgs->step(oracle, grad_sampler, counters);
      w = &olbfgs->iterate();
      last_point = &olbfgs->last_eval_point();
      last_sample = &olbfgs->last_sample();
      last_gradient = &olbfgs->last_gradient();
    }

    if (k % checkpoint_every == 0 || k == total_iters) {
      RunRecord rec;
      rec.k = static_cast<int>(k);
      rec.adp = counters.adp;
      rec.work = counters.work;
      rec.train_fx = oracle.value_on(full, *w);
      if (monitor.test_oracle != nullptr) {
        const TestMetrics tm = test_metrics(*monitor.test_oracle, *w);
        rec.test_fx = tm.test_fx;
        rec.test_accuracy = tm.test_accuracy;
      }
      if (monitor.errors) {
        rec.grad_norm = norm2(*last_gradient);
        rec.grad_error = grad_error(oracle, *last_point, *last_sample);
        if (sqn && sqn->has_pair_context()) {
          const PairContext& ctx = sqn->pair_context();
          rec.hv_error = hv_error(oracle, ctx.wbar_curr, ctx.wbar_prev, ctx.hessian_sample);
        }
      }
      out.records.push_back(std::move(rec));
    }
  }

  if (sgd) out.final_iterate = sgd->iterate();
  if (sqn) out.final_iterate = sqn->iterate();
  if (olbfgs) out.final_iterate = olbfgs->iterate();
  return out;
}

}  // namespace sqn
