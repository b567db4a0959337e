#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bcnet/closed_form.hpp"
#include "bcnet/stats.hpp"
#include "bcnet/sticky_sde.hpp"
#include "doctest.h"

using namespace bcnet;
using namespace bcnet::sticky;

namespace {

DrivingNoise zero_noise(double step, double horizon) {
  DrivingNoise n;
  n.step = step;
  n.horizon = horizon;
  n.seed = 0;
  const std::size_t k = static_cast<std::size_t>(std::llround(horizon / step));
  n.dl.assign(k, 0.0);
  n.dr.assign(k, 0.0);
  n.ds.assign(k, 0.0);
  return n;
}

double exp4_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-4.0 * s); }

}  // namespace

TEST_CASE("sample_noise is reproducible with honest moments") {
  const DrivingNoise a = sample_noise(1e-3, 2.0, 42);
  const DrivingNoise b = sample_noise(1e-3, 2.0, 42);
  CHECK(a.dl == b.dl);
  CHECK(a.dr == b.dr);
  CHECK(a.ds == b.ds);
  REQUIRE(a.dl.size() == 2000);

  std::vector<double> all;
  for (const auto* v : {&a.dl, &a.dr, &a.ds})
    all.insert(all.end(), v->begin(), v->end());
  const auto ms = stats::mean_stderr(all);
  CHECK(std::fabs(ms.mean) < 4.0 * ms.stderr_);
  double var = 0.0;
  for (const double x : all) var += x * x;
  var /= static_cast<double>(all.size());
  CHECK(std::fabs(var / 1e-3 - 1.0) <
        4.0 * std::sqrt(2.0 / static_cast<double>(all.size())));

  const DrivingNoise c = sample_noise(1e-3, 2.0, 43);
  CHECK(a.dl != c.dl);
  CHECK_THROWS_AS(sample_noise(0.0, 1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(sample_noise(1e-3, 0.0, 0), std::invalid_argument);
}

TEST_CASE("refinement halves the grid and preserves the coarse path") {
  const DrivingNoise coarse = sample_noise(2e-3, 1.0, 7);
  const DrivingNoise fine = coarse.refine(99);
  CHECK(fine.step == doctest::Approx(1e-3).epsilon(1e-12));
  REQUIRE(fine.dl.size() == 2 * coarse.dl.size());
  for (std::size_t i = 0; i < coarse.dl.size(); ++i) {
    CHECK(std::fabs(fine.dl[2 * i] + fine.dl[2 * i + 1] - coarse.dl[i]) <
          1e-12);
    CHECK(std::fabs(fine.dr[2 * i] + fine.dr[2 * i + 1] - coarse.dr[i]) <
          1e-12);
    CHECK(std::fabs(fine.ds[2 * i] + fine.ds[2 * i + 1] - coarse.ds[i]) <
          1e-12);
  }
}

TEST_CASE("zero driving noise gives the deterministic wedge") {
  const LRSolution sol = solve_lr(zero_noise(1e-3, 1.0), 0.0, 0.0);
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    CHECK(sol.T[i] == doctest::Approx(sol.t[i]).epsilon(1e-12));
    CHECK(sol.S[i] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(sol.L[i] == doctest::Approx(-sol.t[i]).epsilon(1e-12));
    CHECK(sol.R[i] == doctest::Approx(sol.t[i]).epsilon(1e-12));
  }
}

TEST_CASE("clock identity holds exactly at every node") {
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    for (const auto [l0, r0] : std::vector<std::pair<double, double>>{
             {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.7}}) {
      const LRSolution sol = solve_lr(sample_noise(1e-3, 2.0, seed), l0, r0);
      for (std::size_t i = 0; i < sol.t.size(); ++i) {
        CHECK(sol.T[i] + sol.S[i] == sol.t[i]);
        CHECK(sol.S[i] >= 0.0);
        if (i > 0) {
          CHECK(sol.T[i] >= sol.T[i - 1]);
          CHECK(sol.S[i] >= sol.S[i - 1]);
        }
      }
    }
  }
}

TEST_CASE("order holds after the first meeting") {
  for (const std::uint64_t seed : {4u, 5u, 6u, 7u}) {
    const LRSolution sol = solve_lr(sample_noise(1e-3, 2.0, seed), 0.8, 0.0);
    std::size_t met = sol.t.size();
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
      if (sol.L[i] <= sol.R[i]) {
        met = i;
        break;
      }
    }
    REQUIRE(met < sol.t.size());  // drift -1 vs +1 from 0.8 apart meets fast
    for (std::size_t i = met; i < sol.t.size(); ++i) CHECK(sol.L[i] <= sol.R[i]);
  }
}

TEST_CASE("sticky_time is zero at zero and monotone") {
  const LRSolution sol = solve_lr(sample_noise(1e-3, 2.0, 8), 0.0, 0.0);
  CHECK(sticky_time(sol, 0.0) == 0.0);
  double prev = 0.0;
  for (double t = 0.1; t <= 2.0; t += 0.1) {
    const double s = sticky_time(sol, t);
    CHECK(s >= prev);
    CHECK(s <= t + 1e-12);
    prev = s;
  }
  CHECK(sticky_time(sol, 2.0) > 0.0);  // equal start must stick a little
}

TEST_CASE("pair marginals are drifted Brownian motions") {
  const int n = 1500;
  const double t = 1.0;
  std::vector<double> l_end(n), r_end(n);
  for (int i = 0; i < n; ++i) {
    const LRSolution sol =
        solve_lr(sample_noise(1e-3, t, 3000 + static_cast<std::uint64_t>(i)),
                 0.0, 0.0);
    l_end[static_cast<std::size_t>(i)] = left_at(sol, t) + t;
    r_end[static_cast<std::size_t>(i)] = right_at(sol, t) - t;
  }
  const auto cdf = [](double x) { return closed_form::normal_cdf(x); };
  CHECK(stats::ks_one_sample(l_end, cdf).p_value > 0.01);
  CHECK(stats::ks_one_sample(r_end, cdf).p_value > 0.01);
}

TEST_CASE("total sticky time of an equal-start pair is Exponential(4)") {
  const int n = 2500;
  std::vector<double> s(n);
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const StickySample smp =
        sample_sticky_time(5e-4, 5.0, 7000 + static_cast<std::uint64_t>(i),
                           0.0, 0.0, true);
    s[static_cast<std::size_t>(i)] = smp.s_horizon;
    zeros += smp.s_horizon == 0.0 ? 1 : 0;
  }
  CHECK(zeros == 0);  // an equal start always accumulates stuck time
  const auto ms = stats::mean_stderr(s);
  CHECK(std::fabs(ms.mean - 0.25) < 4.0 * ms.stderr_ + 0.01);
  CHECK(stats::ks_one_sample(s, exp4_cdf).p_value > 0.01);
}

TEST_CASE("a separated start leaves an atom of never-sticking runs") {
  const int n = 4000;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    const StickySample smp =
        sample_sticky_time(1e-3, 5.0, 11000 + static_cast<std::uint64_t>(i),
                           0.0, 1.0, true);
    zeros += smp.ever_met ? 0 : 1;
    if (!smp.ever_met) CHECK(smp.s_horizon == 0.0);
  }
  // Gap from 1 with drift +2 and variance 2 hits zero with mass e^-2.
  const double target = 1.0 - std::exp(-2.0);
  const stats::Interval ci = stats::wilson_interval(
      static_cast<std::uint64_t>(zeros), static_cast<std::uint64_t>(n), 0.999);
  CHECK(ci.contains(target));
}

TEST_CASE("sticky set loses isolated grid points under refinement") {
  const int reps = 120;
  double coarse_frac = 0.0, fine_frac = 0.0, fine_measure = 0.0;
  for (int i = 0; i < reps; ++i) {
    const DrivingNoise noise =
        sample_noise(2e-3, 1.0, 15000 + static_cast<std::uint64_t>(i));
    const DrivingNoise fine = noise.refine(1);
    const auto isolated_fraction = [](const LRSolution& sol) {
      int stuck = 0, isolated = 0;
      for (std::size_t k = 1; k + 1 < sol.t.size(); ++k) {
        if (sol.L[k] != sol.R[k]) continue;
        ++stuck;
        if (sol.L[k - 1] != sol.R[k - 1] && sol.L[k + 1] != sol.R[k + 1])
          ++isolated;
      }
      return stuck == 0 ? 0.0
                        : static_cast<double>(isolated) /
                              static_cast<double>(stuck);
    };
    const LRSolution a = solve_lr(noise, 0.0, 0.0);
    const LRSolution b = solve_lr(fine, 0.0, 0.0);
    coarse_frac += isolated_fraction(a);
    fine_frac += isolated_fraction(b);
    fine_measure += sticky_time(b, 1.0);
  }
  coarse_frac /= reps;
  fine_frac /= reps;
  CHECK(fine_measure / reps > 0.05);  // positive Lebesgue measure of stuck time
  CHECK(fine_frac < coarse_frac);     // isolated points thin out as h drops
}

TEST_CASE("refining the noise moves the total sticky time by order sqrt h") {
  const auto mean_shift = [](double step) {
    const int reps = 80;
    double acc = 0.0;
    for (int i = 0; i < reps; ++i) {
      const DrivingNoise noise =
          sample_noise(step, 2.0, 21000 + static_cast<std::uint64_t>(i));
      const LRSolution a = solve_lr(noise, 0.0, 0.0);
      const LRSolution b = solve_lr(noise.refine(2), 0.0, 0.0);
      acc += std::fabs(sticky_time(a, 2.0) - sticky_time(b, 2.0));
    }
    return acc / reps;
  };
  const double at_4h = mean_shift(4e-3);
  const double at_h = mean_shift(1e-3);
  CHECK(at_4h < 3.0 * std::sqrt(4e-3));
  CHECK(at_h < 3.0 * std::sqrt(1e-3));
  CHECK(at_h < at_4h);  // shrinks with the grid
}

TEST_CASE("reflected representation reproduces the pair gap") {
  const DrivingNoise zero = zero_noise(1e-3, 1.0);
  const ReflectedPath flat = solve_reflected(zero, 0.0, 0.0);
  for (std::size_t i = 0; i < flat.tau.size(); ++i) {
    CHECK(flat.X[i] == doctest::Approx(2.0 * flat.tau[i]).epsilon(1e-12));
    CHECK(flat.compensator[i] == 0.0);
  }
  for (const std::uint64_t seed : {31u, 32u, 33u}) {
    const DrivingNoise noise = sample_noise(1e-3, 2.0, seed);
    const ReflectedPath rp = solve_reflected(noise, 0.0, 0.0);
    const LRSolution sol = solve_lr(noise, 0.0, 0.0);
    for (const double x : rp.X) CHECK(x >= 0.0);
    for (std::size_t i = 1; i < rp.compensator.size(); ++i) {
      CHECK(rp.compensator[i] >= rp.compensator[i - 1]);
      if (rp.compensator[i] > rp.compensator[i - 1])
        CHECK(rp.X[i] == 0.0);  // pushes only at the floor
    }
    // Gap of the pair equals the reflected motion run in the apart clock.
    double worst = 0.0;
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
      std::size_t k = static_cast<std::size_t>(
          std::llround(sol.T[i] / rp.step));
      if (k >= rp.X.size()) k = rp.X.size() - 1;
      worst = std::max(worst,
                       std::fabs((sol.R[i] - sol.L[i]) - rp.X[k]));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("three-path system stops instantly on a zero gap") {
  const LlrResult r = solve_llr(sample_noise(1e-3, 1.0, 50), 0.0);
  CHECK(!r.survived);
  CHECK(r.stop_time == 0.0);
  CHECK_THROWS_AS(solve_llr(sample_noise(1e-3, 1.0, 50), -0.5),
                  std::invalid_argument);
}

TEST_CASE("three-path system keeps its ordering and compensator discipline") {
  for (const std::uint64_t seed : {60u, 61u, 62u, 63u}) {
    const LlrResult r = solve_llr(sample_noise(2e-4, 1.0, seed), 0.5);
    REQUIRE(r.times.size() == r.L.size());
    const std::size_t nodes = r.times.size();
    for (std::size_t i = 0; i < nodes; ++i) {
      CHECK(r.L[i] <= r.Lhat[i] + 1e-12);
      CHECK(r.Lhat[i] <= r.Rhat[i] + 1e-12);
    }
    for (std::size_t i = 1; i < nodes; ++i) {
      CHECK(r.compensator[i] >= r.compensator[i - 1]);
      if (r.compensator[i] > r.compensator[i - 1])
        CHECK(r.Lhat[i] - r.L[i] <= 1e-9);  // pushes only off the floor
    }
    if (!r.survived) CHECK(r.stop_time <= 1.0);
  }
}

TEST_CASE("single motions in the coalescing system are drifted walks") {
  const double t = 1.0;
  std::vector<double> ends;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const CoalescingSystem sys = solve_coalescing_system(
        {{2.0, MotionType::kLeft}}, 1e-3, t, 70000 + seed);
    ends.push_back(sys.paths[0].back());
  }
  const auto ms = stats::mean_stderr(ends);
  CHECK(std::fabs(ms.mean - (2.0 - t)) < 4.0 * ms.stderr_);
  // Variance should be near t.
  double var = 0.0;
  for (const double e : ends) var += (e - ms.mean) * (e - ms.mean);
  var /= static_cast<double>(ends.size() - 1);
  CHECK(std::fabs(var - t) < 0.25);
}

TEST_CASE("a one-one system reproduces the sticky pair gap law") {
  const double t = 1.0, h = 1e-3;
  const int n = 800;
  std::vector<double> sys_gap(n), pair_gap(n);
  for (int i = 0; i < n; ++i) {
    const CoalescingSystem sys = solve_coalescing_system(
        {{0.0, MotionType::kLeft}, {0.0, MotionType::kRight}}, h, t,
        80000 + static_cast<std::uint64_t>(i));
    sys_gap[static_cast<std::size_t>(i)] =
        sys.paths[1].back() - sys.paths[0].back();
    pair_gap[static_cast<std::size_t>(i)] =
        sample_pair_gap(h, t, 90000 + static_cast<std::uint64_t>(i));
  }
  CHECK(stats::ks_two_sample(sys_gap, pair_gap).p_value > 0.01);
}

TEST_CASE("same-type motions started together coalesce immediately") {
  const CoalescingSystem sys = solve_coalescing_system(
      {{1.0, MotionType::kLeft}, {1.0, MotionType::kLeft}}, 1e-3, 0.5, 91);
  CHECK(sys.paths[0] == sys.paths[1]);
  CHECK(sys.coalescence_events >= 1);
  CHECK((sys.merged_into[0] == -1) != (sys.merged_into[1] == -1));
}

TEST_CASE("coalescing system respects the event budgets") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const CoalescingSystem sys = solve_coalescing_system(
        {{-1.0, MotionType::kLeft},
         {-0.3, MotionType::kLeft},
         {0.3, MotionType::kRight},
         {1.0, MotionType::kRight}},
        1e-3, 1.5, 95000 + seed);
    CHECK(sys.coalescence_events <= 4);
    CHECK(sys.crossing_events <= 4);
    for (std::size_t i = 0; i < sys.paths.size(); ++i)
      CHECK(sys.paths[i].size() == sys.times.size());
  }
}
