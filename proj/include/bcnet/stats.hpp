#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace bcnet::stats {

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;  // sample stderr of the mean
  std::size_t n = 0;
};

MeanStderr mean_stderr(const std::vector<double>& xs);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

// Wilson score interval for a binomial proportion. confidence in (0, 1).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence);

// Two-sided quantile of the standard normal (used by wilson_interval).
double normal_quantile(double p);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;  // asymptotic Kolmogorov distribution
};

// One-sample test against a cdf; the sample is copied and sorted internally.
KsResult ks_one_sample(std::vector<double> sample,
                       const std::function<double(double)>& cdf);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquare2x2 {
  double statistic = 0.0;
  double p_value = 1.0;  // 1 degree of freedom
  double min_expected = 0.0;
};

// Independence test on a 2x2 contingency table. counts[i][j] with i, j in
// {0, 1}. Expected cell counts below 5 make the asymptotic p unreliable;
// min_expected reports them so callers can check preconditions.
ChiSquare2x2 chi_square_independence(const std::uint64_t counts[2][2]);

struct Dispersion {
  double index = 0.0;  // variance / mean
  double stderr_ = 0.0;  // delta-method standard error
  std::size_t n = 0;
};

// Variance-to-mean ratio of counts. Requires a positive mean.
Dispersion dispersion_index(const std::vector<double>& counts);

}  // namespace bcnet::stats
