#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bcnet/lattice.hpp"

namespace bcnet::particles {

// Occupied sites of one time slice. Sorted, duplicate-free (merging on
// contact is instant), all coordinates on the slice's sublattice.
struct ParticleSet {
  std::int64_t time = 0;
  std::vector<std::int64_t> occupied;
};

// The arrows actually used between slice t and slice t+1, keyed by their
// endpoints. Lower endpoints recover the slice at t, upper endpoints the
// slice at t+1 (under the strict boundary policy).
struct HalfStepEdges {
  std::int64_t time = 0;  // lower slice; edges live at time + 1/2
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;  // (lower, upper)

  ParticleSet lower_slice() const;
  ParticleSet upper_slice() const;
};

// kStrict: any arrow target outside the window is an error (fail fast).
// kAbsorb: targets outside the window are dropped; callers must keep their
// measurement region out of the boundary's speed-1 influence cone.
enum class BoundaryPolicy : std::uint8_t { kStrict, kAbsorb };

// Single-step engine behind evolve; experiments drive it directly so long
// runs never hold a whole trajectory in memory.
class Evolver {
 public:
  Evolver(const lattice::ArrowConfig& config, ParticleSet initial,
          BoundaryPolicy policy);

  void step();
  const ParticleSet& current() const { return current_; }
  const HalfStepEdges& last_edges() const { return edges_; }

 private:
  const lattice::ArrowConfig* config_;
  ParticleSet current_;
  HalfStepEdges edges_;
  BoundaryPolicy policy_;
};

struct Trajectory {
  std::vector<ParticleSet> slices;      // t = initial.time .. t_end
  std::vector<HalfStepEdges> half_steps;  // one per slab
};

// Exact branching-coalescing evolution: every occupied site emits along its
// arrows, targets are unioned.
Trajectory evolve(const lattice::ArrowConfig& config, ParticleSet initial,
                  std::int64_t t_end,
                  BoundaryPolicy policy = BoundaryPolicy::kStrict);

// Site density of the stationary slice law, 4 beta / (1 + beta)^2.
double bernoulli_intensity(double beta);

// Per-site frequencies of the three edge events over a trajectory's
// half-steps: site emitted its left arrow, its right arrow, or both.
// Stationary slice laws put these at rho(1+beta)/2, rho(1+beta)/2, rho beta.
struct HalfStepStats {
  double p_left_edge = 0;
  double p_right_edge = 0;
  double p_both = 0;
  std::int64_t site_slots = 0;  // sites scanned, all slabs combined
};
HalfStepStats half_step_statistics(const lattice::ArrowConfig& config,
                                   const Trajectory& trajectory);

// All even sites of the window's bottom row, evolved burn_in steps with the
// absorbing policy: approximates the slice of the paths-from-the-infinite-
// past family. Only the interior safe of the boundary cone is meaningful.
ParticleSet backbone_slice(const lattice::ArrowConfig& config,
                           std::int64_t burn_in);

// Every even site of one row as a ParticleSet.
ParticleSet full_slice(const lattice::Window& window, std::int64_t t);

}  // namespace bcnet::particles
