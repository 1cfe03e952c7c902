#include "sqn/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace sqn {

CorrectionPair make_pair(DenseVector s, DenseVector y) {
  CorrectionPair p;
  p.sy = dot(s, y);
  p.yy = dot(y, y);
  p.rho = p.sy > 0.0 ? 1.0 / p.sy : 0.0;
  p.s = std::move(s);
  p.y = std::move(y);
  return p;
}

std::optional<CorrectionPair> make_correction_pair(const DenseVector& wbar_curr,
                                                   const DenseVector& wbar_prev,
                                                   const ObjectiveOracle& oracle,
                                                   std::span<const int> hessian_sample) {
  DenseVector s = subtract(wbar_curr, wbar_prev);
  if (norm2(s) == 0.0) return std::nullopt;
  DenseVector y = oracle.hessian_vector_on(hessian_sample, wbar_curr, s);
  return make_pair(std::move(s), std::move(y));
}

bool accept_pair(const CorrectionPair& candidate, double epsilon_curv) {
  if (!std::isfinite(candidate.sy) || !std::isfinite(candidate.yy)) return false;
  for (double v : candidate.y) {
    if (!std::isfinite(v)) return false;
  }
  const double ss = dot(candidate.s, candidate.s);
  return candidate.sy >= epsilon_curv * ss && candidate.sy > 0.0;
}

LbfgsMemory::LbfgsMemory(int capacity) : capacity_(capacity) {
  if (capacity < 0) throw std::invalid_argument("lbfgs memory: capacity must be nonnegative");
}

double LbfgsMemory::initial_scale() const {
  if (!seen_pair_) throw std::logic_error("lbfgs memory: no pair accepted yet");
  return newest_sy_ / newest_yy_;
}

void LbfgsMemory::insert(CorrectionPair pair) {
  if (!(pair.sy > 0.0)) {
    throw std::invalid_argument("lbfgs memory: curvature condition s.y > 0 violated");
  }
  if (!(pair.yy > 0.0)) {
    throw std::invalid_argument("lbfgs memory: zero curvature response");
  }
  newest_sy_ = pair.sy;
  newest_yy_ = pair.yy;
  seen_pair_ = true;
  if (capacity_ == 0) return;  // scaling-only model
  pairs_.push_back(std::move(pair));
  if (count() > capacity_) pairs_.pop_front();
}

DenseVector two_loop_apply(const LbfgsMemory& mem, const DenseVector& g) {
  return two_loop_apply(mem, g, mem.initial_scale());
}

DenseVector two_loop_apply(const LbfgsMemory& mem, const DenseVector& g, double initial_scale) {
  if (!mem.has_scaling()) throw std::logic_error("two_loop_apply: empty memory");
  const int m = mem.count();
  DenseVector q = g;
  std::vector<double> alpha(m);
  for (int i = m - 1; i >= 0; --i) {
    const CorrectionPair& p = mem.pair(i);
    alpha[i] = p.rho * dot(p.s, q);
    axpy(-alpha[i], p.y, q);
  }
  scale(initial_scale, q);
  for (int i = 0; i < m; ++i) {
    const CorrectionPair& p = mem.pair(i);
    const double beta = p.rho * dot(p.y, q);
    axpy(alpha[i] - beta, p.s, q);
  }
  return q;
}

EigenBoundReport eigen_bound_report(const LbfgsMemory& mem) {
  if (mem.count() < 1) throw std::logic_error("eigen_bound_report: empty memory");
  EigenBoundReport r;
  for (int i = 0; i < mem.count(); ++i) {
    const CorrectionPair& p = mem.pair(i);
    const double ss = dot(p.s, p.s);
    const double sy_over_ss = p.sy / ss;
    const double yy_over_sy = p.yy / p.sy;
    if (i == 0) {
      r.min_sy_over_ss = r.max_sy_over_ss = sy_over_ss;
      r.min_yy_over_sy = r.max_yy_over_sy = yy_over_sy;
    } else {
      r.min_sy_over_ss = std::min(r.min_sy_over_ss, sy_over_ss);
      r.max_sy_over_ss = std::max(r.max_sy_over_ss, sy_over_ss);
      r.min_yy_over_sy = std::min(r.min_yy_over_sy, yy_over_sy);
      r.max_yy_over_sy = std::max(r.max_yy_over_sy, yy_over_sy);
    }
  }
  return r;
}

}  // namespace sqn
