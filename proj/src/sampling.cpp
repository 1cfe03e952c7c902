#include "sqn/sampling.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace sqn {

EpochSampler::EpochSampler(int population, std::uint64_t seed) : rng_(seed) {
  if (population < 1) throw std::invalid_argument("sampler: population must be positive");
  permutation_.resize(population);
  std::iota(permutation_.begin(), permutation_.end(), 0);
  reshuffle();
}

void EpochSampler::reshuffle() {
  for (std::size_t i = permutation_.size() - 1; i > 0; --i) {
    const std::size_t j = uniform_index(rng_, i + 1);
    std::swap(permutation_[i], permutation_[j]);
  }
  cursor_ = 0;
}

void EpochSampler::next_batch(int batch_size, std::vector<int>& out) {
  if (batch_size < 1 || batch_size > population()) {
    throw std::invalid_argument("sampler: batch size must be in [1, N]");
  }
  out.resize(batch_size);
  for (int i = 0; i < batch_size; ++i) {
    if (cursor_ == permutation_.size()) reshuffle();
    out[i] = permutation_[cursor_++];
  }
}

std::vector<int> EpochSampler::next_batch(int batch_size) {
  std::vector<int> out;
  next_batch(batch_size, out);
  return out;
}

std::vector<int> sample_without_replacement(Rng& rng, int population, int count) {
  if (population < 1) throw std::invalid_argument("sample: population must be positive");
  if (count < 1 || count > population) {
    throw std::invalid_argument("sample: count must be in [1, N]");
  }
  std::vector<int> pool(population);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(population - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace sqn
