#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bcnet/rng.hpp"
#include "bcnet/stats.hpp"
#include "doctest.h"

using namespace bcnet;
using namespace bcnet::stats;

TEST_CASE("mean_stderr on hand samples") {
  const MeanStderr c = mean_stderr({3.0, 3.0, 3.0, 3.0});
  CHECK(c.mean == 3.0);
  CHECK(c.stderr_ == 0.0);
  const MeanStderr h = mean_stderr({0.0, 1.0});
  CHECK(h.mean == 0.5);
  CHECK(h.stderr_ == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(mean_stderr({}), std::invalid_argument);
}

TEST_CASE("mean_stderr estimates sigma over root n") {
  RngStream rng(11);
  const double sigma = 2.5;
  std::vector<double> xs(20000);
  for (double& x : xs) x = sigma * rng.gaussian();
  const MeanStderr ms = mean_stderr(xs);
  const double expected = sigma / std::sqrt(static_cast<double>(xs.size()));
  CHECK(std::fabs(ms.stderr_ - expected) / expected < 0.10);
  CHECK(std::fabs(ms.mean) < 5.0 * expected);
}

TEST_CASE("wilson_interval endpoints and errors") {
  const Interval zero = wilson_interval(0, 50, 0.99);
  CHECK(zero.lo == 0.0);
  CHECK(zero.hi > 0.0);
  const Interval full = wilson_interval(50, 50, 0.99);
  CHECK(full.hi == 1.0);
  CHECK(full.lo < 1.0);
  const Interval mid = wilson_interval(30, 100, 0.95);
  CHECK(mid.contains(0.3));
  CHECK(!mid.contains(0.9));
  CHECK_THROWS_AS(wilson_interval(1, 0, 0.95), std::invalid_argument);
  CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), std::invalid_argument);
}

TEST_CASE("wilson_interval coverage near nominal") {
  RngStream rng(12);
  const double p = 0.3;
  const int n = 200, batches = 2000;
  int covered = 0;
  for (int b = 0; b < batches; ++b) {
    std::uint64_t hits = 0;
    for (int i = 0; i < n; ++i) hits += rng.uniform() < p ? 1 : 0;
    covered += wilson_interval(hits, n, 0.95).contains(p) ? 1 : 0;
  }
  const double rate = static_cast<double>(covered) / batches;
  CHECK(rate > 0.93);
  CHECK(rate < 0.98);
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::fabs(normal_quantile(0.975) - 1.9599639845400545) < 1e-8);
  for (double p = 0.01; p < 1.0; p += 0.07) {
    const double z = normal_quantile(p);
    CHECK(std::fabs(z - -normal_quantile(1.0 - p)) < 1e-9);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("ks_one_sample accepts its own null and rejects gross shifts") {
  RngStream rng(21);
  int accepted = 0;
  const int trials = 200, n = 400;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> xs(n);
    for (double& x : xs) x = rng.uniform();
    const KsResult r = ks_one_sample(xs, [](double x) {
      return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
    });
    CHECK(r.statistic >= 0.0);
    CHECK(r.statistic <= 1.0);
    accepted += r.p_value > 0.01 ? 1 : 0;
  }
  CHECK(accepted >= trials * 98 / 100);

  std::vector<double> shifted(n);
  for (double& x : shifted) x = 5.0 + rng.uniform();
  const KsResult bad = ks_one_sample(shifted, [](double x) {
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  });
  CHECK(bad.p_value < 1e-8);
  CHECK_THROWS_AS(ks_one_sample({}, [](double) { return 0.5; }),
                  std::invalid_argument);
}

TEST_CASE("ks_two_sample accepts same-law pairs and rejects disjoint ones") {
  RngStream rng(22);
  int accepted = 0;
  const int trials = 120, n = 300;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> a(n), b(n);
    for (double& x : a) x = rng.gaussian();
    for (double& x : b) x = rng.gaussian();
    const KsResult r = ks_two_sample(a, b);
    CHECK(r.statistic >= 0.0);
    CHECK(r.statistic <= 1.0);
    accepted += r.p_value > 0.01 ? 1 : 0;
  }
  CHECK(accepted >= trials * 98 / 100);

  std::vector<double> lo(n), hi(n);
  for (double& x : lo) x = rng.uniform();
  for (double& x : hi) x = 10.0 + rng.uniform();
  CHECK(ks_two_sample(lo, hi).p_value < 1e-8);
  CHECK_THROWS_AS(ks_two_sample({}, {1.0}), std::invalid_argument);
}

TEST_CASE("chi_square_independence on hand tables") {
  const std::uint64_t proportional[2][2] = {{40, 60}, {80, 120}};
  const ChiSquare2x2 p = chi_square_independence(proportional);
  CHECK(p.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.p_value > 0.99);

  const std::uint64_t correlated[2][2] = {{50, 0}, {0, 50}};
  CHECK(chi_square_independence(correlated).p_value < 1e-10);

  const std::uint64_t sparse[2][2] = {{1, 1}, {1, 1}};
  CHECK(chi_square_independence(sparse).min_expected == doctest::Approx(1.0));
}

TEST_CASE("chi_square_independence accepts independent pairs") {
  RngStream rng(23);
  int accepted = 0;
  const int trials = 200, n = 500;
  for (int trial = 0; trial < trials; ++trial) {
    std::uint64_t counts[2][2] = {{0, 0}, {0, 0}};
    for (int i = 0; i < n; ++i) {
      const int a = rng.uniform() < 0.4 ? 1 : 0;
      const int b = rng.uniform() < 0.6 ? 1 : 0;
      ++counts[a][b];
    }
    accepted += chi_square_independence(counts).p_value > 0.01 ? 1 : 0;
  }
  CHECK(accepted >= trials * 98 / 100);
}

TEST_CASE("dispersion_index identifies Poisson and scaled counts") {
  RngStream rng(24);
  const double lambda = 5.0;
  std::vector<double> counts(4000);
  for (double& c : counts) {
    // Inverse-transform Poisson sampling.
    const double u = rng.uniform();
    double cum = std::exp(-lambda), pmf = cum;
    int k = 0;
    while (cum < u && k < 200) {
      ++k;
      pmf *= lambda / k;
      cum += pmf;
    }
    c = k;
  }
  const Dispersion d = dispersion_index(counts);
  CHECK(std::fabs(d.index - 1.0) < 4.0 * d.stderr_ + 0.02);

  std::vector<double> doubled(counts);
  for (double& c : doubled) c *= 2.0;
  const Dispersion d2 = dispersion_index(doubled);
  CHECK(std::fabs(d2.index - 2.0) < 8.0 * d2.stderr_ + 0.04);

  CHECK(dispersion_index({7.0, 7.0, 7.0}).index == 0.0);
  CHECK_THROWS_AS(dispersion_index({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(dispersion_index({1.0}), std::invalid_argument);
}
