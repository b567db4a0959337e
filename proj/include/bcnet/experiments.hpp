#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bcnet::experiments {

// One simulation-versus-theory comparison. The verdict is a pure function
// of the stored numeric fields, so a stored report can be re-judged:
//   bound target:     pass iff estimate <= target + k * std_error + allowance
//   two-sided target: pass iff |estimate - target| <= k * std_error + allowance
// Composite experiments fold their sub-checks into one normalized worst
// margin (estimate) against target 0 and expose the raw pieces in
// parameters.
struct ExperimentReport {
  std::string name;
  std::string parameters;  // JSON object, deterministic key order
  double estimate = 0.0;
  double std_error = 0.0;
  double target = 0.0;
  bool bound_target = false;
  double k = 3.0;
  double bias_allowance = 0.0;
  bool pass = false;
  std::int64_t replicas = 0;
  std::uint64_t seed = 0;
  double wall_time = 0.0;  // seconds; the only nondeterministic field
};

bool recompute_verdict(const ExperimentReport& r);

// Scaling conventions shared by the lattice experiments: eps = beta, one
// lattice step is eps^2 physical time, one lattice unit is eps length.

// Occupied-site count in a centered interval of physical width
// interval_len at physical time t_phys, from a full bottom slice, against
// interval_len * small_psi(t_phys). Two-sided with an O(eps) allowance.
ExperimentReport density_experiment(double beta, double t_phys,
                                    double interval_len, int replicas,
                                    std::uint64_t seed, double k = 3.0);

// Probability that a centered interval of physical length gap is empty at
// t_phys, against 1 - big_psi(gap, t_phys).
ExperimentReport avoidance_experiment(double beta, double t_phys, double gap,
                                      int replicas, std::uint64_t seed,
                                      double k = 3.0);

// Two-sample KS distance between the rescaled discrete left-right gap and
// the continuum gap law at t_phys, both pairs started together. Bound
// target: the 1% critical distance.
ExperimentReport pair_scaling_experiment(double beta, double t_phys,
                                         int replicas, std::uint64_t seed,
                                         double k = 3.0);

// Law of the accumulated stuck time at the horizon: Exponential(4) body,
// plus an atom at 0 of mass 1 - exp(-2 (r0 - l0)) when the pair starts
// ordered strictly apart. Composite margins.
ExperimentReport sticky_time_experiment(double h, double horizon,
                                        int replicas, double l0, double r0,
                                        std::uint64_t seed, double k = 3.0);

// Product-Bernoulli slice at the stationary intensity: intensity after one
// and two steps, both-arrow frequency against rho * beta, independence of
// disjoint site pairs. Composite margins.
ExperimentReport invariance_experiment(double beta, std::int64_t width,
                                       int replicas, std::uint64_t seed,
                                       double k = 3.0);

// Deep-burn-in slice from a full start: per-site intensity, rescaled
// per-unit-length intensity against 2, dispersion index of interval counts
// against 1. Composite margins.
ExperimentReport backbone_experiment(double beta, std::int64_t depth,
                                     std::int64_t width, std::uint64_t seed,
                                     double k = 3.0);

// Mean number of first-touch events between the left-most path from the
// origin and the right edge of the particles started strictly to its left,
// over physical times [s_phys, t_phys]; one-sided against the flux
// integral.
ExperimentReport left_flux_experiment(double beta, double s_phys,
                                      double t_phys, int replicas,
                                      std::uint64_t seed, double k = 3.0);

// Survival frequency of the three-path system against big_psi(eta, t)^2
// (one-sided), plus the non-increase of the product supermartingale proxy
// across checkpoints. Composite margins.
ExperimentReport hitting_bound_experiment(double eta, double t, double h,
                                          int replicas, std::uint64_t seed,
                                          double k = 3.0);

// Deterministic lattice invariants over sampled configurations, one report
// per beta: non-crossing scan, wedge entry, hopping closure, extremal
// envelope. Any violation fails.
std::vector<ExperimentReport> structural_suite(
    const std::vector<double>& beta_list, int replicas, std::uint64_t seed,
    double k = 3.0);

}  // namespace bcnet::experiments
