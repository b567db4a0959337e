#include "bcnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bcnet::stats {

namespace {

// Survival function of the Kolmogorov distribution, two-term-accelerated
// series. Good to ~1e-10 over the range used by the tests.
double kolmogorov_q(double lambda) {
  if (lambda < 0.18) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::min(1.0, std::max(0.0, 2.0 * sum));
}

double ks_p_value(double d, double n_eff) {
  const double rn = std::sqrt(n_eff);
  return kolmogorov_q((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

MeanStderr mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_stderr: empty sample");
  MeanStderr r;
  r.n = xs.size();
  double s = 0.0;
  for (double x : xs) s += x;
  r.mean = s / static_cast<double>(r.n);
  if (r.n == 1) return r;
  double v = 0.0;
  for (double x : xs) v += (x - r.mean) * (x - r.mean);
  v /= static_cast<double>(r.n - 1);
  r.stderr_ = std::sqrt(v / static_cast<double>(r.n));
  return r;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile");
  // Acklam's rational approximation refined by one Halley step.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5, r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * 3.14159265358979323846) *
                   std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  if (successes > trials) {
    throw std::invalid_argument("wilson_interval: successes > trials");
  }
  const double z = normal_quantile(0.5 + 0.5 * confidence);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Analytically [0, hi] at p = 0 and [lo, 1] at p = 1; rounding must not
  // let the interval exclude a boundary maximum-likelihood estimate.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

KsResult ks_one_sample(std::vector<double> sample,
                       const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_one_sample: empty");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return {d, ks_p_value(d, n)};
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return {d, ks_p_value(d, na * nb / (na + nb))};
}

ChiSquare2x2 chi_square_independence(const std::uint64_t counts[2][2]) {
  const double n00 = static_cast<double>(counts[0][0]);
  const double n01 = static_cast<double>(counts[0][1]);
  const double n10 = static_cast<double>(counts[1][0]);
  const double n11 = static_cast<double>(counts[1][1]);
  const double n = n00 + n01 + n10 + n11;
  if (n <= 0.0) throw std::invalid_argument("chi_square: empty table");
  const double r0 = n00 + n01, r1 = n10 + n11;
  const double c0 = n00 + n10, c1 = n01 + n11;
  ChiSquare2x2 out;
  out.min_expected = n;
  double chi = 0.0;
  const double obs[2][2] = {{n00, n01}, {n10, n11}};
  const double rows[2] = {r0, r1}, cols[2] = {c0, c1};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double e = rows[i] * cols[j] / n;
      out.min_expected = std::min(out.min_expected, e);
      if (e > 0.0) chi += (obs[i][j] - e) * (obs[i][j] - e) / e;
    }
  }
  out.statistic = chi;
  out.p_value = std::erfc(std::sqrt(0.5 * chi));  // chi2 survival, 1 dof
  return out;
}

Dispersion dispersion_index(const std::vector<double>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("dispersion_index: n < 2");
  const double n = static_cast<double>(counts.size());
  double m = 0.0;
  for (double c : counts) m += c;
  m /= n;
  if (!(m > 0.0)) throw std::invalid_argument("dispersion_index: mean <= 0");
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double c : counts) {
    const double d = c - m;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double s2 = m2 / (n - 1.0);
  m2 /= n;
  m3 /= n;
  m4 /= n;
  Dispersion out;
  out.n = counts.size();
  out.index = s2 / m;
  // Delta method for s2/mean with moment estimates:
  // var(x_bar) = m2/n, var(s2) ~ (m4 - m2^2)/n, cov(x_bar, s2) ~ m3/n.
  const double var_mean = m2 / n;
  const double var_s2 = std::max(0.0, m4 - m2 * m2) / n;
  const double cov = m3 / n;
  const double g1 = -s2 / (m * m);  // d(index)/d(mean)
  const double g2 = 1.0 / m;        // d(index)/d(s2)
  const double v =
      g1 * g1 * var_mean + g2 * g2 * var_s2 + 2.0 * g1 * g2 * cov;
  out.stderr_ = std::sqrt(std::max(0.0, v));
  return out;
}

}  // namespace bcnet::stats
