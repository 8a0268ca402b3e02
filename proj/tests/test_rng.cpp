#include <doctest.h>

#include <cmath>

#include "dtn/rng.hpp"

using namespace dtn;

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(42), d(43);
  CHECK(c.uniform() != d.uniform());
}

TEST_CASE("fork does not consume state and is tag-dependent") {
  Rng a(7);
  Rng f1 = a.fork(1);
  Rng f2 = a.fork(2);
  Rng f1b = a.fork(1);
  CHECK(f1.uniform() == f1b.uniform());
  CHECK(f1.fork(9).uniform() != f2.fork(9).uniform());
  Rng b(7);
  CHECK(a.uniform() == b.uniform());  // forking left the stream untouched
}

TEST_CASE("uniform_int covers [0,n) uniformly") {
  Rng rng(1);
  const int n = 7;
  std::vector<int> counts(n, 0);
  const int trials = 70000;
  for (int i = 0; i < trials; ++i) {
    int x = rng.uniform_int(n);
    REQUIRE(x >= 0);
    REQUIRE(x < n);
    ++counts[x];
  }
  const double expect = trials / static_cast<double>(n);
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / n));
  for (int x = 0; x < n; ++x) CHECK(std::abs(counts[x] - expect) < 4 * sigma);
}

TEST_CASE("poisson mean matches over many draws") {
  Rng rng(3);
  const double lambda = 0.01;
  const long trials = 1000000;
  long total = 0;
  for (long i = 0; i < trials; ++i) total += rng.poisson(lambda);
  const double mean = static_cast<double>(total) / trials;
  const double sigma = std::sqrt(lambda / trials);
  CHECK(std::abs(mean - lambda) < 3 * sigma);
}

TEST_CASE("exponential mean") {
  Rng rng(5);
  const double mean = 5000.0;
  const long trials = 200000;
  double total = 0;
  for (long i = 0; i < trials; ++i) total += rng.exponential(mean);
  CHECK(std::abs(total / trials - mean) < 3 * mean / std::sqrt(trials));
}
