#pragma once

#include <cstdint>
#include <vector>

namespace bcnet::sticky {

// Pregenerated increments of three independent Brownian motions on a
// uniform grid, N(0, step) each. Streams l and r drive the pair while
// apart, stream s drives the joint motion while stuck. solve_llr reuses
// them as (l-hat, r-hat, plain) drivers.
struct DrivingNoise {
  double step = 0;
  double horizon = 0;
  std::uint64_t seed = 0;
  std::vector<double> dl, dr, ds;

  // Bridge-splits every increment into two halves of step/2; the coarse
  // path is the restriction of the fine one to the coarse grid.
  DrivingNoise refine(std::uint64_t refine_seed) const;
};

DrivingNoise sample_noise(double step, double horizon, std::uint64_t seed);

// Pathwise solution of the sticky pair on a (generally non-uniform) grid:
// node times are the images of the apart-clock grid under the inverse time
// change, so T + S = t, order, and equality-at-stick hold exactly at nodes
// with no tolerance.
struct LRSolution {
  double l0 = 0, r0 = 0;
  double tau_step = 0;   // apart-clock grid step
  double horizon = 0;    // queries valid for t in [first node, horizon]
  std::vector<double> t, T, S, L, R;
};

// The pair: L drifts -1, R drifts +1; started crossed (l0 > r0) they run
// independently to their first grid meeting, then the sticky phase takes
// over. Stickiness enters through the split of real time into an apart
// clock T and a together clock S driven by the running minimum of the
// drift-adjusted gap.
LRSolution solve_lr(const DrivingNoise& noise, double l0, double r0);

// S_t: Lebesgue time spent with L = R up to t. Exact at nodes; between
// nodes the stuck portion of a slab sits at its end, so the interpolation
// keeps T + S = t identically.
double sticky_time(const LRSolution& sol, double t);

// R - L at any time in the covered range, with the same end-of-slab
// allocation of stuck time (preserving the honest atom at zero).
double gap_at(const LRSolution& sol, double t);
double left_at(const LRSolution& sol, double t);
double right_at(const LRSolution& sol, double t);

// The gap process alone in the apart clock: a Brownian motion with
// diffusion constant 2 and drift +2, Skorohod-reflected at zero via its
// running minimum.
struct ReflectedPath {
  double step = 0;
  std::vector<double> tau, X, compensator;
};

ReflectedPath solve_reflected(const DrivingNoise& noise, double l0, double r0);

// Three-path system: L (drift -1), R-hat (drift +1), and L-hat (drift -1,
// Skorohod-reflected upward off L), run to the first time L-hat meets
// R-hat. Streams: dl drives L-hat, dr drives R-hat, ds drives L.
struct LlrResult {
  double step = 0;
  double horizon = 0;
  double eta = 0;
  bool survived = false;  // L-hat stayed below R-hat through the horizon
  double stop_time = 0;   // meeting time, or horizon if survived
  std::vector<double> times, L, Lhat, Rhat, compensator;
};

// bridge_hit: also detect within-slab meetings of L-hat and R-hat by the
// Brownian-bridge crossing probability, removing the grid's upward bias on
// survival.
LlrResult solve_llr(const DrivingNoise& noise, double eta,
                    bool bridge_hit = true);

// Scalar kernels for replica-heavy experiments (no per-path arrays).

struct StickySample {
  double s_horizon = 0;  // total stuck time accumulated by the horizon
  bool ever_met = false;
};

// Total stuck time of a pair started at (l0, r0). bridge = true samples the
// exact within-slab minimum of the driving motion (and detects within-slab
// first meetings when l0 > r0), removing the O(sqrt(step)) grid bias.
StickySample sample_sticky_time(double step, double horizon,
                                std::uint64_t seed, double l0, double r0,
                                bool bridge);

// Gap of a pair started equal, evaluated at time t on the plain grid with
// the end-of-slab stuck allocation. Plain-grid on purpose: the experiment
// comparing against rescaled lattice gaps needs the unrefined atom at 0.
double sample_pair_gap(double step, double t, std::uint64_t seed);

// Finite system of coalescing left (drift -1) and right (drift +1) motions:
// adjacent left-right pairs interact stickily, same-type meetings merge,
// opposite-type crossings trigger repartition into new pairs.
enum class MotionType : std::uint8_t { kLeft, kRight };

struct CoalescingInput {
  double x0 = 0;
  MotionType type = MotionType::kLeft;
};

struct CoalescingSystem {
  double step = 0;
  double horizon = 0;
  std::vector<double> times;               // uniform grid
  std::vector<std::vector<double>> paths;  // one row per input motion
  std::vector<int> merged_into;  // index of the motion this one merged with
                                 // (-1 while independent)
  int coalescence_events = 0;
  int crossing_events = 0;
};

CoalescingSystem solve_coalescing_system(
    const std::vector<CoalescingInput>& starts, double step, double horizon,
    std::uint64_t seed);

}  // namespace bcnet::sticky
