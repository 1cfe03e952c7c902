#pragma once

#include <cstdint>
#include <vector>

#include "sqn/rng.hpp"

namespace sqn {

/// Without-replacement mini-batch stream: a seeded permutation of the index
/// range, reshuffled every time it is exhausted.  A batch may span the epoch
/// boundary, so every call returns exactly batch_size indices.
class EpochSampler {
 public:
  EpochSampler(int population, std::uint64_t seed);

  void next_batch(int batch_size, std::vector<int>& out);
  std::vector<int> next_batch(int batch_size);

  int population() const { return static_cast<int>(permutation_.size()); }

 private:
  void reshuffle();

  std::vector<int> permutation_;
  std::size_t cursor_ = 0;
  Rng rng_;
};

/// count distinct indices drawn uniformly without replacement from
/// [0, population).  Callers keep this stream separate from the gradient
/// sampler's so the two batch sources stay independent.
std::vector<int> sample_without_replacement(Rng& rng, int population, int count);

}  // namespace sqn
