#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bcnet/lattice.hpp"
#include "bcnet/pathspace.hpp"
#include "bcnet/rng.hpp"
#include "bcnet/stats.hpp"
#include "doctest.h"

using namespace bcnet;
using namespace bcnet::pathspace;

namespace {

SampledPath constant_path(double x, double sigma, double step, std::size_t n) {
  SampledPath p;
  p.sigma = sigma;
  p.step = step;
  p.values.assign(n, x);
  return p;
}

CompactPoint random_point(RngStream& rng) {
  CompactPoint p;
  p.x = 40.0 * (rng.uniform() - 0.5);
  p.t = 40.0 * (rng.uniform() - 0.5);
  return p;
}

}  // namespace

TEST_CASE("squashing map sends the landmarks where they belong") {
  const auto origin = theta_map(CompactPoint{0.0, 0.0});
  CHECK(origin.first == 0.0);
  CHECK(origin.second == 0.0);

  const auto up = theta_map(CompactPoint::pole(+1));
  CHECK(up.first == 0.0);
  CHECK(up.second == 1.0);
  const auto down = theta_map(CompactPoint::pole(-1));
  CHECK(down.first == 0.0);
  CHECK(down.second == -1.0);
  CHECK(CompactPoint::pole(+1).is_pole());
  CHECK(!CompactPoint{1e9, 0.0}.is_pole());

  // Far-right points at equal times become indistinguishable.
  CHECK(point_dist(CompactPoint{40.0, 2.0}, CompactPoint{1e6, 2.0}) == 0.0);
  CHECK(point_dist(CompactPoint{2.0, 2.0}, CompactPoint{40.0, 2.0}) > 0.0);
  // Late points of any position approach the pole at rate 1 / t.
  CHECK(point_dist(CompactPoint{123.0, 1e9}, CompactPoint::pole(+1)) < 2e-9);
  CHECK(point_dist(CompactPoint{123.0, 1e3}, CompactPoint::pole(+1)) >
        point_dist(CompactPoint{123.0, 1e6}, CompactPoint::pole(+1)));
}

TEST_CASE("point_dist is a metric on sampled triples") {
  RngStream rng(2024);
  for (int i = 0; i < 200; ++i) {
    const CompactPoint a = random_point(rng);
    const CompactPoint b = random_point(rng);
    const CompactPoint c = random_point(rng);
    CHECK(point_dist(a, a) == 0.0);
    CHECK(point_dist(a, b) == point_dist(b, a));
    CHECK(point_dist(a, c) <= point_dist(a, b) + point_dist(b, c) + 1e-15);
    CHECK(point_dist(a, b) >= 0.0);
  }
}

TEST_CASE("value_at interpolates and clamps") {
  SampledPath p;
  p.sigma = 1.0;
  p.step = 0.5;
  p.values = {0.0, 2.0, 1.0};
  CHECK(p.horizon() == doctest::Approx(2.0));
  CHECK(p.value_at(1.0) == 0.0);
  CHECK(p.value_at(1.25) == doctest::Approx(1.0));
  CHECK(p.value_at(1.75) == doctest::Approx(1.5));
  CHECK(p.value_at(0.0) == 0.0);   // clamps before the start
  CHECK(p.value_at(9.0) == 1.0);   // clamps past the horizon
  CHECK_THROWS_AS(SampledPath{}.horizon(), std::invalid_argument);
  CHECK_THROWS_AS(SampledPath{}.value_at(0.0), std::invalid_argument);
}

TEST_CASE("path_dist on constant paths has a closed value") {
  // Same start time 1, horizon 3: the squashed position gap decays in t, so
  // the sup sits at the first node and equals |tanh a - tanh b| / (1 + 1).
  const SampledPath a = constant_path(0.3, 1.0, 0.25, 9);
  const SampledPath b = constant_path(-0.4, 1.0, 0.25, 9);
  CHECK(path_dist(a, a) == 0.0);
  CHECK(path_dist(a, b) == doctest::Approx(path_dist(b, a)).epsilon(1e-15));
  const double expect = std::abs(std::tanh(0.3) - std::tanh(-0.4)) / 2.0;
  CHECK(path_dist(a, b) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("path_dist sees a shifted start through the squashed clock") {
  // Same horizon 2, same grid, different starting times 0 and 1.
  const SampledPath a = constant_path(0.0, 0.0, 0.5, 5);
  const SampledPath b = constant_path(0.0, 1.0, 0.5, 3);
  const double d = path_dist(a, b);
  CHECK(d >= std::abs(std::tanh(0.0) - std::tanh(1.0)) - 1e-15);
  CHECK(d == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
}

TEST_CASE("path_dist rejects incompatible grids") {
  const SampledPath a = constant_path(0.0, 0.0, 0.5, 5);
  SampledPath other_step = a;
  other_step.step = 0.4;
  CHECK_THROWS_AS(path_dist(a, other_step), std::invalid_argument);
  const SampledPath shorter = constant_path(0.0, 0.0, 0.5, 4);
  CHECK_THROWS_AS(path_dist(a, shorter), std::invalid_argument);
  SampledPath misaligned = constant_path(0.0, 0.2, 0.5, 5);
  CHECK_THROWS_AS(path_dist(a, misaligned), std::invalid_argument);
  CHECK_THROWS_AS(path_dist(a, SampledPath{}), std::invalid_argument);
}

TEST_CASE("hausdorff_dist on finite sets") {
  const SampledPath a = constant_path(0.0, 0.0, 0.5, 5);
  const SampledPath b = constant_path(1.0, 0.0, 0.5, 5);
  const SampledPath c = constant_path(5.0, 0.0, 0.5, 5);
  CHECK(hausdorff_dist({a, b, c}, {a, b, c}) == 0.0);
  CHECK(hausdorff_dist({a}, {b}) == doctest::Approx(path_dist(a, b)));
  // Dropping c: the one-sided gap from c to {a, b} dominates.
  const double expect = std::min(path_dist(c, a), path_dist(c, b));
  CHECK(hausdorff_dist({a, b}, {a, b, c}) == doctest::Approx(expect));
  CHECK(hausdorff_dist({a, b, c}, {a, b}) == doctest::Approx(expect));
  CHECK(hausdorff_dist({a}, {a, b}) <= path_dist(a, b) + 1e-15);
  CHECK_THROWS_AS(hausdorff_dist({}, {a}), std::invalid_argument);
  CHECK_THROWS_AS(hausdorff_dist({a}, {}), std::invalid_argument);
}

TEST_CASE("rescaling a lattice path lands nodes on the diffusive grid") {
  lattice::LatticePath p;
  p.x0 = 2;
  p.t0 = 4;
  p.forward = true;
  p.steps = {+1, +1, -1, +1};
  const double eps = 0.1;
  const SampledPath s = rescale_path(p, eps);
  CHECK(s.sigma == doctest::Approx(eps * eps * 4.0));
  CHECK(s.step == doctest::Approx(eps * eps));
  REQUIRE(s.values.size() == 5);
  CHECK(s.values[0] == doctest::Approx(eps * 2.0));
  CHECK(s.values[2] == doctest::Approx(eps * 4.0));
  CHECK(s.values[4] == doctest::Approx(eps * 4.0));
  CHECK_THROWS_AS(rescale_path(p, 0.0), std::invalid_argument);
}

TEST_CASE("rescaling composes multiplicatively") {
  SampledPath p;
  p.sigma = 3.0;
  p.step = 1.0;
  p.values = {0.0, 1.0, -2.0, 4.0};
  const SampledPath twice = rescale_path(rescale_path(p, 0.5), 0.5);
  const SampledPath once = rescale_path(p, 0.25);
  CHECK(twice.sigma == once.sigma);
  CHECK(twice.step == once.step);
  CHECK(twice.values == once.values);
  CHECK_THROWS_AS(rescale_path(p, -1.0), std::invalid_argument);
}

TEST_CASE("rescaled extremal traces have unit drift in the scaling regime") {
  const double eps = 0.01;
  const std::int64_t steps = 10000;  // continuum horizon eps^2 * steps = 1
  std::vector<double> ends;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const lattice::Window w{-10800, 10800, 0, steps + 1, 2};
    const lattice::ArrowConfig c = sample_config(w, eps, 600 + seed);
    const lattice::LatticePath r =
        trace_extremal(c, 0, 0, lattice::Side::kRight);
    const SampledPath s = rescale_path(r, eps);
    CHECK(s.step == doctest::Approx(1e-4));
    ends.push_back(s.values.back());
  }
  const auto ms = stats::mean_stderr(ends);
  // Right paths drift +beta per step; rescaled slope is +1 at time one.
  CHECK(std::fabs(ms.mean - 1.0) < 4.0 * ms.stderr_ + 0.01);
}
