#include "bcnet/pathspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bcnet::pathspace {

namespace {

double theta1(double x, double t) { return std::tanh(x) / (1.0 + std::abs(t)); }

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

bool CompactPoint::is_pole() const { return std::isinf(t); }

CompactPoint CompactPoint::pole(int sign) {
  CompactPoint p;
  p.x = 0.0;
  p.t = sign >= 0 ? std::numeric_limits<double>::infinity()
                  : -std::numeric_limits<double>::infinity();
  return p;
}

std::pair<double, double> theta_map(const CompactPoint& p) {
  if (p.is_pole()) return {0.0, p.t > 0.0 ? 1.0 : -1.0};
  return {theta1(p.x, p.t), std::tanh(p.t)};
}

double point_dist(const CompactPoint& a, const CompactPoint& b) {
  const auto ia = theta_map(a);
  const auto ib = theta_map(b);
  return std::max(std::abs(ia.first - ib.first),
                  std::abs(ia.second - ib.second));
}

double SampledPath::horizon() const {
  if (values.empty()) throw std::invalid_argument("path has no samples");
  return sigma + static_cast<double>(values.size() - 1) * step;
}

double SampledPath::value_at(double t) const {
  if (values.empty()) throw std::invalid_argument("path has no samples");
  const double u = (t - sigma) / step;
  if (u <= 0.0) return values.front();
  const auto k = static_cast<std::size_t>(u);
  if (k + 1 >= values.size()) return values.back();
  const double frac = u - static_cast<double>(k);
  return values[k] + frac * (values[k + 1] - values[k]);
}

double path_dist(const SampledPath& a, const SampledPath& b) {
  if (a.values.empty() || b.values.empty())
    throw std::invalid_argument("path has no samples");
  const double tol = 1e-9 * std::max(1.0, std::max(a.step, b.step));
  if (!close(a.step, b.step, tol) ||
      !close(a.horizon(), b.horizon(), 1e-6 * std::max(1.0, a.horizon())))
    throw std::invalid_argument("incompatible grids");
  const double offset = (b.sigma - a.sigma) / a.step;
  if (!close(offset, std::round(offset), 1e-6))
    throw std::invalid_argument("incompatible grids");

  double d = std::abs(std::tanh(a.sigma) - std::tanh(b.sigma));
  const double lo = std::min(a.sigma, b.sigma);
  const double hi = std::min(a.horizon(), b.horizon());
  const auto n = static_cast<std::size_t>(
      std::llround((hi - lo) / a.step));
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = lo + static_cast<double>(k) * a.step;
    const double xa = a.value_at(std::max(t, a.sigma));
    const double xb = b.value_at(std::max(t, b.sigma));
    d = std::max(d, std::abs(theta1(xa, t) - theta1(xb, t)));
  }
  return d;
}

double hausdorff_dist(const std::vector<SampledPath>& k1,
                      const std::vector<SampledPath>& k2) {
  if (k1.empty() || k2.empty())
    throw std::invalid_argument("hausdorff_dist: empty set");
  double worst = 0.0;
  const auto one_sided = [&](const std::vector<SampledPath>& from,
                             const std::vector<SampledPath>& to) {
    for (const SampledPath& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const SampledPath& q : to) best = std::min(best, path_dist(p, q));
      worst = std::max(worst, best);
    }
  };
  one_sided(k1, k2);
  one_sided(k2, k1);
  return worst;
}

SampledPath rescale_path(const lattice::LatticePath& p, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("rescale_path: eps <= 0");
  SampledPath out;
  out.sigma = eps * eps * static_cast<double>(p.t_lo());
  out.step = eps * eps;
  out.values.reserve(static_cast<std::size_t>(p.t_hi() - p.t_lo()) + 1);
  for (std::int64_t t = p.t_lo(); t <= p.t_hi(); ++t)
    out.values.push_back(eps * static_cast<double>(p.position_at(t)));
  return out;
}

SampledPath rescale_path(const SampledPath& p, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("rescale_path: eps <= 0");
  SampledPath out;
  out.sigma = eps * eps * p.sigma;
  out.step = eps * eps * p.step;
  out.values.reserve(p.values.size());
  for (const double v : p.values) out.values.push_back(eps * v);
  return out;
}

}  // namespace bcnet::pathspace
