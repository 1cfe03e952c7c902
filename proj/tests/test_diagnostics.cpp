#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "sqn/diagnostics.hpp"
#include "sqn/sampling.hpp"
#include "support/generators.hpp"

using namespace sqn;
using sqn::testing::random_vector;

TEST_CASE("q_beta") {
  TheoryParams tp;
  tp.lambda_lo = tp.lambda_hi = tp.mu1 = tp.mu2 = tp.gamma = 1.0;
  SUBCASE("hand value with unit constants") {
    // noise term = 1 / (2 (2 - 1)) = 1/2, initial gap 0.
    CHECK(q_beta(tp, 1.0, 0.0) == doctest::Approx(0.5));
  }
  SUBCASE("large initial gap dominates the max") {
    CHECK(q_beta(tp, 1.0, 100.0) == doctest::Approx(100.0));
  }
  SUBCASE("step constants at or below the threshold rejected") {
    CHECK(tp.beta_threshold() == doctest::Approx(0.5));
    CHECK_THROWS_AS(q_beta(tp, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(q_beta(tp, 0.4, 0.0), std::invalid_argument);
  }
  SUBCASE("noise term blows up toward the threshold") {
    double prev = q_beta(tp, 0.9, 0.0);
    for (double beta : {0.7, 0.6, 0.55, 0.51, 0.501, 0.5001}) {
      const double cur = q_beta(tp, beta, 0.0);
      CHECK(cur > prev);
      prev = cur;
    }
    CHECK(prev > 1e2);
  }
  SUBCASE("inconsistent parameters rejected") {
    TheoryParams bad = tp;
    bad.mu2 = 0.5;  // mu2 < mu1
    CHECK_THROWS_AS(q_beta(bad, 1.0, 0.0), std::invalid_argument);
    bad = tp;
    bad.lambda_lo = 0.0;
    CHECK_THROWS_AS(q_beta(bad, 1.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("constructive spectral bounds") {
  const LbfgsSpectralBounds b = lbfgs_spectral_bounds(0.5, 2.0, 4, 3);
  CHECK(b.trace_bound == doctest::Approx((4 + 3) * 2.0));
  CHECK(b.mu1 == doctest::Approx(1.0 / 14.0));
  // det lower bound = 0.5^4 * (0.5/14)^3; mu2 = 14^3 / that.
  const double det_lo = std::pow(0.5, 4) * std::pow(0.5 / 14.0, 3);
  CHECK(b.mu2 == doctest::Approx(std::pow(14.0, 3) / det_lo).epsilon(1e-10));
  CHECK_THROWS_AS(lbfgs_spectral_bounds(0.0, 1.0, 4, 3), std::invalid_argument);
}

TEST_CASE("gradient error monitor") {
  SUBCASE("full batch has zero error") {
    const SyntheticBinary g = generate_synthetic_binary(5, 40, 61);
    const BinaryLogistic obj(g.data);
    Rng rng(62);
    const DenseVector w = random_vector(rng, 5);
    CHECK(grad_error(obj, w, all_indices(40)) <= 1e-12);
  }
  SUBCASE("a sign-flipping half batch reaches error 2") {
    // Two examples sharing a direction: at w = 0 the per-example gradients
    // are 0.5*x (label 0) and -1.5*x (label 1, three times longer), so the
    // full mean is -0.5*x while the first example alone gives +0.5*x.
    std::vector<SparseExample> rows;
    rows.push_back({SparseVector{{0}, {1.0}}, 0});
    rows.push_back({SparseVector{{0}, {3.0}}, 1});
    const Dataset d(std::move(rows), 1, 2);
    const BinaryLogistic obj(d);
    const std::vector<int> half{0};
    CHECK(grad_error(obj, DenseVector{0.0}, half) == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("random batches give finite positive error") {
    const SyntheticBinary g = generate_synthetic_binary(6, 300, 63);
    const BinaryLogistic obj(g.data);
    Rng rng(64);
    const DenseVector w = random_vector(rng, 6);
    EpochSampler sampler(300, 65);
    const double err = grad_error(obj, w, sampler.next_batch(10));
    CHECK(err > 0.0);
    CHECK(std::isfinite(err));
  }
  SUBCASE("vanishing full gradient rejected") {
    // Mirror-image pair: gradients cancel exactly at w = 0.
    std::vector<SparseExample> rows;
    rows.push_back({SparseVector{{0}, {1.0}}, 0});
    rows.push_back({SparseVector{{0}, {1.0}}, 1});
    const Dataset d(std::move(rows), 1, 2);
    const BinaryLogistic obj(d);
    CHECK_THROWS_AS(grad_error(obj, DenseVector{0.0}, std::vector<int>{0}),
                    std::invalid_argument);
  }
}

TEST_CASE("hessian-vector error monitor") {
  SUBCASE("full batch has zero error") {
    const SyntheticBinary g = generate_synthetic_binary(5, 40, 71);
    const BinaryLogistic obj(g.data);
    Rng rng(72);
    const DenseVector prev = random_vector(rng, 5);
    DenseVector curr = prev;
    axpy(0.5, random_vector(rng, 5), curr);
    CHECK(hv_error(obj, curr, prev, all_indices(40)) <= 1e-12);
  }
  SUBCASE("identical examples remove all sampling variance") {
    SparseVector x{{0, 1}, {0.7, -0.4}};
    std::vector<SparseExample> rows(6, SparseExample{x, 1});
    const Dataset d(std::move(rows), 2, 2);
    const BinaryLogistic obj(d);
    CHECK(hv_error(obj, DenseVector{1.0, 0.5}, DenseVector{0.0, 0.0}, std::vector<int>{2}) <=
          1e-12);
  }
  SUBCASE("constant-hessian quadratic sees zero error for any batch") {
    const NoisyQuadratic q(DenseVector{1.0, 2.0, 3.0}, 1.0, 5, 50);
    CHECK(hv_error(q, DenseVector{1.0, 1.0, 1.0}, DenseVector{0.0, 0.5, 0.0},
                   std::vector<int>{4, 9}) <= 1e-12);
  }
  SUBCASE("mean error shrinks as the batch grows") {
    const SyntheticBinary g = generate_synthetic_binary(10, 2000, 73);
    const BinaryLogistic obj(g.data);
    Rng rng(74);
    const DenseVector prev = random_vector(rng, 10);
    DenseVector curr = prev;
    axpy(0.2, random_vector(rng, 10), curr);
    Rng sample_rng(75);
    double prev_mean = 2.0;
    for (int bh : {10, 100, 1000}) {
      double mean = 0.0;
      for (int rep = 0; rep < 50; ++rep) {
        mean += hv_error(obj, curr, prev, sample_without_replacement(sample_rng, 2000, bh));
      }
      mean /= 50.0;
      CHECK(mean < prev_mean);
      prev_mean = mean;
    }
  }
}

TEST_CASE("test metrics") {
  SUBCASE("near-separable data is classified almost perfectly") {
    Rng rng(81);
    DenseVector w_sharp(8);
    for (double& v : w_sharp) v = uniform_real(rng, -1.0, 1.0) * 50.0;
    const Dataset d = synthesize_binary_labels(w_sharp, 400, rng);
    const BinaryLogistic obj(d);
    const TestMetrics m = test_metrics(obj, w_sharp);
    REQUIRE(m.test_accuracy.has_value());
    CHECK(*m.test_accuracy >= 0.95);
    // Brute-force recount as an independent check.
    int correct = 0;
    for (int i = 0; i < d.size(); ++i) {
      const int pred = sigmoid(w_sharp, d.example(i).features) >= 0.5 ? 1 : 0;
      if (pred == d.example(i).label) ++correct;
    }
    CHECK(*m.test_accuracy == doctest::Approx(static_cast<double>(correct) / d.size()));
  }
  SUBCASE("labels independent of features make every rule a coin flip") {
    Rng rng(82);
    const Dataset d = synthesize_binary_labels(DenseVector(6, 0.0), 10000, rng);
    const BinaryLogistic obj(d);
    const TestMetrics m = test_metrics(obj, random_vector(rng, 6));
    REQUIRE(m.test_accuracy.has_value());
    CHECK(std::abs(*m.test_accuracy - 0.5) <= 0.02);
  }
  SUBCASE("w = 0 predicts class 1 everywhere") {
    Rng rng(83);
    const Dataset d = synthesize_binary_labels(random_vector(rng, 4), 200, rng);
    const BinaryLogistic obj(d);
    const TestMetrics m = test_metrics(obj, DenseVector(4, 0.0));
    double ones = 0.0;
    for (const SparseExample& ex : d.examples()) ones += ex.label;
    REQUIRE(m.test_accuracy.has_value());
    CHECK(*m.test_accuracy == doctest::Approx(ones / d.size()));
  }
  SUBCASE("evaluating the training set as the test set reproduces train_fx") {
    const SyntheticBinary g = generate_synthetic_binary(5, 60, 84);
    const BinaryLogistic obj(g.data);
    Rng rng(85);
    const DenseVector w = random_vector(rng, 5);
    const TestMetrics m = test_metrics(obj, w);
    CHECK(std::abs(m.test_fx - obj.value_on(all_indices(60), w)) <= 1e-12);
  }
  SUBCASE("oracles without a decision rule omit accuracy") {
    const NoisyQuadratic q(DenseVector{1.0, 2.0}, 0.0, 5, 10);
    const TestMetrics m = test_metrics(q, DenseVector{1.0, 1.0});
    CHECK_FALSE(m.test_accuracy.has_value());
    CHECK(m.test_fx == doctest::Approx(1.5));
  }
}
