#include "sqn/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sqn {
namespace {

double logistic(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

[[noreturn]] void parse_fail(int line_no, const std::string& what) {
  throw std::runtime_error("libsvm parse error at line " + std::to_string(line_no) + ": " + what);
}

bool parse_int(const std::string& tok, long& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stol(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

bool parse_double(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  std::size_t pos = 0;
  try {
    out = std::stod(tok, &pos);
  } catch (const std::exception&) {
    return false;
  }
  return pos == tok.size();
}

}  // namespace

Dataset::Dataset(std::vector<SparseExample> examples, int dim, int num_classes)
    : examples_(std::move(examples)), dim_(dim), num_classes_(num_classes) {
  if (examples_.empty()) throw std::invalid_argument("dataset: must hold at least one example");
  if (dim_ < 1) throw std::invalid_argument("dataset: dimension must be positive");
  if (num_classes_ < 2) throw std::invalid_argument("dataset: need at least two classes");
  for (const SparseExample& ex : examples_) {
    ex.features.validate(dim_);
    if (ex.label < 0 || ex.label >= num_classes_) {
      throw std::invalid_argument("dataset: label " + std::to_string(ex.label) + " out of range");
    }
  }
}

Dataset parse_libsvm(std::istream& in, std::optional<int> expected_dim) {
  std::vector<SparseExample> examples;
  std::vector<long> raw_labels;
  int max_index = 0;  // 1-based
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find('#') != std::string::npos) parse_fail(line_no, "comments are not allowed");
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line

    long label;
    if (!parse_int(tok, label)) parse_fail(line_no, "bad label '" + tok + "'");

    SparseExample ex;
    int prev_index = 0;
    while (ls >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos) parse_fail(line_no, "expected idx:val, got '" + tok + "'");
      long idx;
      double val;
      if (!parse_int(tok.substr(0, colon), idx)) parse_fail(line_no, "bad index in '" + tok + "'");
      if (!parse_double(tok.substr(colon + 1), val)) parse_fail(line_no, "bad value in '" + tok + "'");
      if (idx == 0) parse_fail(line_no, "indices are 1-based; index 0 is invalid");
      if (idx < 0) parse_fail(line_no, "negative feature index");
      if (idx <= prev_index) parse_fail(line_no, "indices must be strictly increasing");
      prev_index = static_cast<int>(idx);
      max_index = std::max(max_index, prev_index);
      ex.features.indices.push_back(prev_index - 1);
      ex.features.values.push_back(val);
    }
    raw_labels.push_back(label);
    examples.push_back(std::move(ex));
  }
  if (examples.empty()) throw std::runtime_error("libsvm parse error: no examples");

  const bool has_negative = std::any_of(raw_labels.begin(), raw_labels.end(),
                                        [](long z) { return z < 0; });
  long max_label = 0;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    long z = raw_labels[i];
    if (has_negative) {
      if (z != -1 && z != 1) {
        throw std::runtime_error("libsvm parse error: negative labels require a -1/+1 binary file");
      }
      z = (z == 1) ? 1 : 0;
    }
    if (z > std::numeric_limits<int>::max()) {
      throw std::runtime_error("libsvm parse error: label out of range");
    }
    examples[i].label = static_cast<int>(z);
    max_label = std::max(max_label, z);
  }

  int dim = max_index;
  if (expected_dim) dim = std::max(dim, *expected_dim);
  const int num_classes = std::max(static_cast<int>(max_label) + 1, 2);
  return Dataset(std::move(examples), dim, num_classes);
}

Dataset parse_libsvm_file(const std::string& path, std::optional<int> expected_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  return parse_libsvm(in, expected_dim);
}

void write_libsvm(const Dataset& d, std::ostream& out) {
  char buf[64];
  for (const SparseExample& ex : d.examples()) {
    out << ex.label;
    for (int j = 0; j < ex.features.nnz(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ex.features.values[j]);
      out << ' ' << (ex.features.indices[j] + 1) << ':' << buf;
    }
    out << '\n';
  }
}

void write_libsvm_file(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_libsvm(d, out);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset synthesize_binary_labels(const DenseVector& w_true, int count, Rng& rng) {
  if (count < 1) throw std::invalid_argument("synthetic dataset: count must be positive");
  const int dim = static_cast<int>(w_true.size());
  if (dim < 1) throw std::invalid_argument("synthetic dataset: dimension must be positive");
  std::vector<SparseExample> examples;
  examples.reserve(count);
  DenseVector x(dim);
  for (int i = 0; i < count; ++i) {
    double nrm = 0.0;
    do {
      for (int j = 0; j < dim; ++j) x[j] = standard_normal(rng);
      nrm = norm2(x);
    } while (nrm == 0.0);
    SparseExample ex;
    ex.features.indices.resize(dim);
    ex.features.values.resize(dim);
    std::iota(ex.features.indices.begin(), ex.features.indices.end(), 0);
    for (int j = 0; j < dim; ++j) ex.features.values[j] = x[j] / nrm;
    const double p = logistic(sparse_dot(ex.features, w_true));
    ex.label = uniform_unit(rng) < p ? 1 : 0;
    examples.push_back(std::move(ex));
  }
  return Dataset(std::move(examples), dim, 2);
}

SyntheticBinary generate_synthetic_binary(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 1) {
    throw std::invalid_argument("synthetic dataset: dim and count must be positive");
  }
  Rng rng(seed);
  DenseVector w_true(dim);
  for (int j = 0; j < dim; ++j) w_true[j] = uniform_real(rng, -1.0, 1.0);
  Dataset data = synthesize_binary_labels(w_true, count, rng);
  return SyntheticBinary{std::move(data), std::move(w_true)};
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& d, double train_fraction,
                                             std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("train_test_split: fraction must be in (0, 1)");
  }
  const int n = d.size();
  const int n_train = static_cast<int>(std::ceil(train_fraction * n));
  if (n_train == 0 || n_train == n) {
    throw std::invalid_argument("train_test_split: both sides must be nonempty");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(order[i], order[j]);
  }
  std::vector<SparseExample> train, test;
  train.reserve(n_train);
  test.reserve(n - n_train);
  for (int i = 0; i < n; ++i) {
    (i < n_train ? train : test).push_back(d.example(order[i]));
  }
  return {Dataset(std::move(train), d.dim(), d.num_classes()),
          Dataset(std::move(test), d.dim(), d.num_classes())};
}

}  // namespace sqn
