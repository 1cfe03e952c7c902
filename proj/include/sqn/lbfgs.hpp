#pragma once

#include <deque>
#include <optional>
#include <span>

#include "sqn/objective.hpp"
#include "sqn/vecmath.hpp"

namespace sqn {

/// Displacement threshold: a candidate (s, y) is kept only when
/// s.y >= epsilon * s.s, so pairs with degenerate curvature never enter the
/// inverse-Hessian model.
inline constexpr double kDefaultCurvatureThreshold = 1e-8;

/// One quasi-Newton correction: displacement s, curvature response y, and
/// the cached scalars used by the two-loop recursion.
struct CorrectionPair {
  DenseVector s;
  DenseVector y;
  double rho = 0.0;  // 1 / (y.s) when y.s > 0
  double sy = 0.0;
  double yy = 0.0;
};

/// Builds a pair from cached vectors, filling in the scalar products.
CorrectionPair make_pair(DenseVector s, DenseVector y);

/// Candidate correction pair from two averaged iterates: s is their
/// difference, y the sub-sampled Hessian-vector product along s evaluated at
/// the newer average.  Returns nullopt (nothing computed) when s is exactly
/// zero.
std::optional<CorrectionPair> make_correction_pair(const DenseVector& wbar_curr,
                                                   const DenseVector& wbar_prev,
                                                   const ObjectiveOracle& oracle,
                                                   std::span<const int> hessian_sample);

bool accept_pair(const CorrectionPair& candidate,
                 double epsilon_curv = kDefaultCurvatureThreshold);

/// Ring buffer of at most `capacity` correction pairs, newest last.  The
/// scaling scalars of the newest accepted pair are retained even with
/// capacity 0, which degenerates the model to (s.y / y.y) * I.
class LbfgsMemory {
 public:
  explicit LbfgsMemory(int capacity);

  int capacity() const { return capacity_; }
  int count() const { return static_cast<int>(pairs_.size()); }
  bool has_scaling() const { return seen_pair_; }

  /// s.y / y.y of the newest accepted pair.
  double initial_scale() const;

  /// Inserts an accepted pair, evicting the oldest beyond capacity.  Throws
  /// unless the curvature condition s.y > 0 holds.
  void insert(CorrectionPair pair);

  /// i = 0 is the oldest stored pair.
  const CorrectionPair& pair(int i) const { return pairs_[i]; }

 private:
  int capacity_;
  std::deque<CorrectionPair> pairs_;
  double newest_sy_ = 0.0;
  double newest_yy_ = 0.0;
  bool seen_pair_ = false;
};

/// Applies the limited-memory inverse-Hessian model to g via the two-loop
/// recursion, about 4Mn operations.  The default initial matrix is
/// (s.y / y.y) * I from the newest pair; the second overload lets callers
/// substitute their own scaling.  Throws when no pair was ever accepted.
DenseVector two_loop_apply(const LbfgsMemory& mem, const DenseVector& g);
DenseVector two_loop_apply(const LbfgsMemory& mem, const DenseVector& g, double initial_scale);

/// Extremes over stored pairs of the two curvature ratios y.s/s.s and
/// y.y/y.s, used by diagnostics and the spectral-bound tests.
struct EigenBoundReport {
  double min_sy_over_ss = 0.0;
  double max_sy_over_ss = 0.0;
  double min_yy_over_sy = 0.0;
  double max_yy_over_sy = 0.0;
};

EigenBoundReport eigen_bound_report(const LbfgsMemory& mem);

}  // namespace sqn
