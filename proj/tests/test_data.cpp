#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "sqn/dataset.hpp"
#include "sqn/sampling.hpp"

using namespace sqn;

TEST_CASE("libsvm parsing") {
  SUBCASE("plain binary file") {
    std::istringstream in("1 1:0.5 3:1.0\n0 2:2.0\n");
    const Dataset d = parse_libsvm(in);
    CHECK(d.size() == 2);
    CHECK(d.dim() == 3);
    CHECK(d.num_classes() == 2);
    CHECK(d.example(0).label == 1);
    CHECK(d.example(1).label == 0);
    CHECK(d.example(0).features.indices == std::vector<int>{0, 2});
    CHECK(d.example(1).features.values == std::vector<double>{2.0});
  }
  SUBCASE("signed labels map to 0/1") {
    std::istringstream in("+1 1:1\n-1 1:2\n");
    const Dataset d = parse_libsvm(in);
    CHECK(d.example(0).label == 1);
    CHECK(d.example(1).label == 0);
  }
  SUBCASE("multiclass labels kept as ids") {
    std::istringstream in("0 1:1\n2 1:1\n1 2:1\n");
    const Dataset d = parse_libsvm(in);
    CHECK(d.num_classes() == 3);
    CHECK(d.example(1).label == 2);
  }
  SUBCASE("expected_dim can widen the feature space") {
    std::istringstream in("1 1:1\n0 1:1\n");
    const Dataset d = parse_libsvm(in, 10);
    CHECK(d.dim() == 10);
  }
  SUBCASE("non-increasing indices rejected") {
    std::istringstream in("1 3:1 2:1\n");
    CHECK_THROWS_AS(parse_libsvm(in), std::runtime_error);
  }
  SUBCASE("index zero rejected") {
    std::istringstream in("1 0:1\n");
    CHECK_THROWS_AS(parse_libsvm(in), std::runtime_error);
  }
  SUBCASE("comments rejected") {
    std::istringstream in("1 1:1 # trailing\n");
    CHECK_THROWS_AS(parse_libsvm(in), std::runtime_error);
  }
  SUBCASE("malformed token reports the line") {
    std::istringstream in("1 1:1\n0 2:xyz\n");
    try {
      parse_libsvm(in);
      FAIL("expected a parse error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("empty input rejected") {
    std::istringstream in("\n \n");
    CHECK_THROWS_AS(parse_libsvm(in), std::runtime_error);
  }
}

TEST_CASE("libsvm round trip preserves rows") {
  const SyntheticBinary gen = generate_synthetic_binary(6, 40, 99);
  std::ostringstream out;
  write_libsvm(gen.data, out);
  std::istringstream back(out.str());
  const Dataset reparsed = parse_libsvm(back);
  REQUIRE(reparsed.size() == gen.data.size());
  REQUIRE(reparsed.dim() == gen.data.dim());
  for (int i = 0; i < gen.data.size(); ++i) {
    CHECK(reparsed.example(i).label == gen.data.example(i).label);
    CHECK(reparsed.example(i).features.indices == gen.data.example(i).features.indices);
    CHECK(reparsed.example(i).features.values == gen.data.example(i).features.values);
  }
}

TEST_CASE("synthetic generator") {
  SUBCASE("shape and determinism") {
    const SyntheticBinary a = generate_synthetic_binary(50, 700, 7);
    CHECK(a.data.size() == 700);
    CHECK(a.data.dim() == 50);
    CHECK(a.w_true.size() == 50);
    const SyntheticBinary b = generate_synthetic_binary(50, 700, 7);
    for (int i = 0; i < a.data.size(); ++i) {
      CHECK(a.data.example(i).label == b.data.example(i).label);
      CHECK(a.data.example(i).features.values == b.data.example(i).features.values);
    }
    const SyntheticBinary c = generate_synthetic_binary(50, 700, 8);
    bool any_diff = false;
    for (int i = 0; i < a.data.size() && !any_diff; ++i) {
      any_diff = a.data.example(i).label != c.data.example(i).label ||
                 a.data.example(i).features.values != c.data.example(i).features.values;
    }
    CHECK(any_diff);
  }
  SUBCASE("features have unit norm") {
    const SyntheticBinary g = generate_synthetic_binary(20, 50, 3);
    for (const SparseExample& ex : g.data.examples()) {
      double nrm = 0.0;
      for (double v : ex.features.values) nrm += v * v;
      CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("labels are fair coin flips at w_true = 0") {
    // With a zero parameter vector every label probability is exactly 1/2,
    // so the law of large numbers pins the label mean near 0.5.
    Rng rng(42);
    const DenseVector w_zero(10, 0.0);
    const Dataset d = synthesize_binary_labels(w_zero, 100000, rng);
    double mean = 0.0;
    for (const SparseExample& ex : d.examples()) mean += ex.label;
    mean /= d.size();
    CHECK(std::abs(mean - 0.5) <= 0.01);
  }
}

TEST_CASE("train/test split") {
  const SyntheticBinary g = generate_synthetic_binary(8, 100, 5);
  SUBCASE("sizes at fraction 0.75") {
    const auto [train, test] = train_test_split(g.data, 0.75, 17);
    CHECK(train.size() == 75);
    CHECK(test.size() == 25);
  }
  SUBCASE("even split partitions the set") {
    const SyntheticBinary small = generate_synthetic_binary(4, 4, 2);
    const auto [train, test] = train_test_split(small.data, 0.5, 17);
    CHECK(train.size() == 2);
    CHECK(test.size() == 2);
    // Union must reproduce the original example multiset; features are
    // unique with probability one, so compare value fingerprints.
    std::multiset<double> original, reunited;
    for (const SparseExample& ex : small.data.examples()) original.insert(ex.features.values[0]);
    for (const SparseExample& ex : train.examples()) reunited.insert(ex.features.values[0]);
    for (const SparseExample& ex : test.examples()) reunited.insert(ex.features.values[0]);
    CHECK(original == reunited);
  }
  SUBCASE("deterministic in the seed") {
    const auto [a_train, a_test] = train_test_split(g.data, 0.6, 23);
    const auto [b_train, b_test] = train_test_split(g.data, 0.6, 23);
    REQUIRE(a_train.size() == b_train.size());
    for (int i = 0; i < a_train.size(); ++i) {
      CHECK(a_train.example(i).features.values == b_train.example(i).features.values);
    }
  }
  SUBCASE("degenerate fractions rejected") {
    CHECK_THROWS_AS(train_test_split(g.data, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(train_test_split(g.data, 1.0, 1), std::invalid_argument);
    const SyntheticBinary tiny = generate_synthetic_binary(2, 2, 2);
    CHECK_THROWS_AS(train_test_split(tiny.data, 0.99, 1), std::invalid_argument);
  }
}

TEST_CASE("epoch sampler") {
  SUBCASE("one epoch emits every index exactly once") {
    EpochSampler s(7, 100);
    std::map<int, int> seen;
    for (int i = 0; i < 7; ++i) seen[s.next_batch(1)[0]]++;
    CHECK(seen.size() == 7);
    for (const auto& [idx, count] : seen) {
      CHECK(idx >= 0);
      CHECK(idx < 7);
      CHECK(count == 1);
    }
  }
  SUBCASE("batches within an epoch are disjoint") {
    EpochSampler s(20, 101);
    std::set<int> seen;
    for (int call = 0; call < 4; ++call) {
      for (int idx : s.next_batch(5)) CHECK(seen.insert(idx).second);
    }
  }
  SUBCASE("N=4, b=2: two calls cover everything") {
    EpochSampler s(4, 102);
    std::set<int> seen;
    for (int idx : s.next_batch(2)) seen.insert(idx);
    for (int idx : s.next_batch(2)) seen.insert(idx);
    CHECK(seen == std::set<int>{0, 1, 2, 3});
  }
  SUBCASE("boundary-spanning appearance counts") {
    // ceil(N/b) calls draw ceil(N/b)*b >= N indices: everything from the
    // first epoch shows up, and nothing can repeat more than once.
    const int n = 10, b = 3;
    const int calls = (n + b - 1) / b;
    EpochSampler s(n, 103);
    std::map<int, int> seen;
    for (int call = 0; call < calls; ++call) {
      for (int idx : s.next_batch(b)) seen[idx]++;
    }
    CHECK(seen.size() == static_cast<std::size_t>(n));
    for (const auto& [idx, count] : seen) {
      CHECK(count >= 1);
      CHECK(count <= 2);
    }
  }
  SUBCASE("bad batch sizes rejected") {
    EpochSampler s(4, 1);
    CHECK_THROWS_AS(s.next_batch(0), std::invalid_argument);
    CHECK_THROWS_AS(s.next_batch(5), std::invalid_argument);
  }
}

TEST_CASE("hessian batch sampling") {
  SUBCASE("full population comes back whole") {
    Rng rng(7);
    std::vector<int> got = sample_without_replacement(rng, 5, 5);
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<int>{0, 1, 2, 3, 4});
  }
  SUBCASE("distinct indices in range") {
    Rng rng(8);
    const std::vector<int> got = sample_without_replacement(rng, 10, 3);
    std::set<int> unique(got.begin(), got.end());
    CHECK(unique.size() == 3);
    for (int idx : got) {
      CHECK(idx >= 0);
      CHECK(idx < 10);
    }
  }
  SUBCASE("inclusion frequency matches count/N") {
    // Without replacement each index is included with probability exactly
    // b/N; 10^4 draws put the empirical frequency within 0.02 of 0.3.
    Rng rng(9);
    const int draws = 10000;
    std::vector<int> hits(10, 0);
    for (int d = 0; d < draws; ++d) {
      for (int idx : sample_without_replacement(rng, 10, 3)) hits[idx]++;
    }
    for (int h : hits) {
      CHECK(std::abs(static_cast<double>(h) / draws - 0.3) <= 0.02);
    }
  }
  SUBCASE("oversized request rejected") {
    Rng rng(10);
    CHECK_THROWS_AS(sample_without_replacement(rng, 5, 6), std::invalid_argument);
  }
  SUBCASE("gradient and hessian streams differ") {
    EpochSampler grad(50, 1000);
    Rng hess(1001);
    const std::vector<int> a = grad.next_batch(10);
    const std::vector<int> b = sample_without_replacement(hess, 50, 10);
    CHECK(a != b);
  }
}
