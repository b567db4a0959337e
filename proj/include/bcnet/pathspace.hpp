#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bcnet/lattice.hpp"

namespace bcnet::pathspace {

// Point of the compactified plane. Both poles collapse the space
// coordinate: when t is infinite the point is the pole for that sign and x
// is ignored.
struct CompactPoint {
  double x = 0.0;
  double t = 0.0;

  bool is_pole() const;
  static CompactPoint pole(int sign);
};

// Squashing map onto the bounded image box; the poles land at (0, ±1).
std::pair<double, double> theta_map(const CompactPoint& p);

// Max of the two coordinate gaps of the squashed images.
double point_dist(const CompactPoint& a, const CompactPoint& b);

// Path started at time sigma with positions on a uniform grid
// [sigma, sigma + (values.size()-1) * step], linearly interpolated.
struct SampledPath {
  double sigma = 0.0;
  double step = 1.0;
  std::vector<double> values;

  double horizon() const;
  double value_at(double t) const;  // clamps t into [sigma, horizon]
};

// Metric on paths: starting-height gap in the squashed time coordinate,
// plus the sup over the common grid of the squashed position gap with each
// path frozen at its own start before it begins.
double path_dist(const SampledPath& a, const SampledPath& b);

// Two-sided Hausdorff combination of path_dist over finite sets.
double hausdorff_dist(const std::vector<SampledPath>& k1,
                      const std::vector<SampledPath>& k2);

// Diffusive scaling: lattice (x, t) maps to (eps x, eps^2 t); lattice nodes
// become the continuum grid.
SampledPath rescale_path(const lattice::LatticePath& p, double eps);
SampledPath rescale_path(const SampledPath& p, double eps);

}  // namespace bcnet::pathspace
