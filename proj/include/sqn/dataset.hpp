#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqn/rng.hpp"
#include "sqn/vecmath.hpp"

namespace sqn {

/// One training pair (x_i, z_i).
struct SparseExample {
  SparseVector features;
  int label = 0;
};

/// Immutable collection of examples plus dimension metadata.  Binary labels
/// are stored as {0, 1}; multiclass labels as class ids in [0, num_classes).
class Dataset {
 public:
  Dataset(std::vector<SparseExample> examples, int dim, int num_classes);

  int size() const { return static_cast<int>(examples_.size()); }
  int dim() const { return dim_; }
  int num_classes() const { return num_classes_; }
  const SparseExample& example(int i) const { return examples_[i]; }
  const std::vector<SparseExample>& examples() const { return examples_; }

 private:
  std::vector<SparseExample> examples_;
  int dim_;
  int num_classes_;
};

/// Parses svmlight/libsvm text: "label idx:val idx:val ...", indices 1-based
/// and strictly increasing.  Strict mode: '#' comments and malformed tokens
/// are rejected with the offending line number.  Labels -1/+1 map to 0/1;
/// nonnegative integer labels are kept as class ids.
Dataset parse_libsvm(std::istream& in, std::optional<int> expected_dim = {});
Dataset parse_libsvm_file(const std::string& path, std::optional<int> expected_dim = {});

void write_libsvm(const Dataset& d, std::ostream& out);
void write_libsvm_file(const Dataset& d, const std::string& path);

/// Bernoulli-labeled logistic data for a fixed parameter vector: features are
/// standard normal draws rescaled to unit 2-norm, labels drawn with success
/// probability 1/(1+exp(-x.w)).
Dataset synthesize_binary_labels(const DenseVector& w_true, int count, Rng& rng);

struct SyntheticBinary {
  Dataset data;
  DenseVector w_true;
};

/// Full synthetic problem: w_true uniform on [-1,1]^dim, then examples as in
/// synthesize_binary_labels.  Deterministic for a fixed seed.
SyntheticBinary generate_synthetic_binary(int dim, int count, std::uint64_t seed);

/// Disjoint partition by a seeded shuffle; sizes ceil(f*N) and N - ceil(f*N).
std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double train_fraction,
                                             std::uint64_t seed);

}  // namespace sqn
