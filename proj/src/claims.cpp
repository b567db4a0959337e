#include "bcnet/claims.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace bcnet::claims {

namespace {

std::vector<ClaimRow> build_registry() {
  return {
      // Lattice geometry.
      {"arrow-field-sampling", "lattice::sample_config", "test_lattice",
       "verified-statistical"},
      {"arrow-field-monotone-coupling", "lattice::sample_config",
       "test_lattice", "verified-deterministic"},
      {"lattice-window-cone-guard", "lattice::Window::validate",
       "test_lattice", "verified-deterministic"},
      {"dual-arrow-construction", "lattice::dual_config", "test_lattice",
       "verified-deterministic"},
      {"dual-arrow-involution",
       "lattice::DualArrowConfig::forward_arrow_from_dual", "test_lattice",
       "verified-deterministic"},
      {"dual-law-rotation", "lattice::dual_config", "test_lattice",
       "verified-deterministic"},
      {"extremal-path-tracing", "lattice::trace_extremal", "test_lattice",
       "verified-deterministic"},
      {"extremal-pair-coupling", "lattice::trace_lr_pair", "test_lattice",
       "verified-deterministic"},
      {"dual-extremal-descent", "lattice::trace_dual_extremal",
       "test_lattice", "verified-deterministic"},
      {"path-arrow-consistency", "lattice::validate_path", "test_lattice",
       "verified-deterministic"},
      {"path-crossing-detection", "lattice::crossing_times", "test_lattice",
       "verified-deterministic"},
      {"path-hopping-closure", "lattice::hop_at_crossings", "acceptance_c9",
       "verified-deterministic"},
      {"forward-dual-noncrossing", "lattice::check_noncrossing",
       "acceptance_c9", "verified-deterministic"},
      {"wedge-entry-exclusion", "lattice::wedge_entry_violations",
       "acceptance_c9", "verified-deterministic"},

      // Particle dynamics.
      {"branching-coalescing-evolution", "particles::evolve",
       "test_particles", "verified-deterministic"},
      {"absorbing-boundary-policy", "particles::Evolver", "test_particles",
       "verified-deterministic"},
      {"stationary-site-intensity", "particles::bernoulli_intensity",
       "acceptance_c5", "verified-statistical"},
      {"half-step-edge-frequencies", "particles::half_step_statistics",
       "acceptance_c5", "verified-statistical"},
      {"backbone-slice-construction", "particles::backbone_slice",
       "acceptance_c6", "verified-statistical"},

      // Left-right pair and systems.
      {"driving-noise-bundle", "sticky::sample_noise", "test_sticky",
       "verified-statistical"},
      {"noise-bridge-refinement", "sticky::DrivingNoise::refine",
       "test_sticky", "verified-statistical"},
      {"pair-clock-identity", "sticky::solve_lr", "test_sticky",
       "verified-deterministic"},
      {"pair-order-after-meeting", "sticky::solve_lr", "test_sticky",
       "verified-deterministic"},
      {"pair-marginal-drifted-laws", "sticky::solve_lr", "test_sticky",
       "verified-statistical"},
      {"sticky-time-accumulation", "sticky::sticky_time", "test_sticky",
       "verified-deterministic"},
      {"sticky-time-exponential-law", "sticky::sample_sticky_time",
       "acceptance_c3", "verified-statistical"},
      {"sticky-atom-mass", "sticky::sample_sticky_time", "acceptance_c3",
       "verified-statistical"},
      {"sticky-set-resolution-scaling", "sticky::solve_lr", "test_sticky",
       "verified-statistical"},
      {"refinement-consistency-rate", "sticky::DrivingNoise::refine",
       "test_sticky", "verified-statistical"},
      {"reflected-gap-representation", "sticky::solve_reflected",
       "test_sticky", "verified-deterministic"},
      {"three-path-system-solver", "sticky::solve_llr", "acceptance_c8",
       "verified-statistical"},
      {"three-path-compensator-structure", "sticky::solve_llr",
       "test_sticky", "verified-deterministic"},
      {"coalescing-system-construction", "sticky::solve_coalescing_system",
       "test_sticky", "verified-statistical"},
      {"coalescing-crossing-bounds", "sticky::solve_coalescing_system",
       "test_sticky", "verified-deterministic"},

      // Closed forms.
      {"pair-survival-function", "closed_form::big_psi", "test_closed_form",
       "verified-deterministic"},
      {"limit-density-function", "closed_form::small_psi",
       "test_closed_form", "verified-deterministic"},
      {"interval-density-formula", "closed_form::expected_density",
       "acceptance_c1", "verified-statistical"},
      {"flux-integral-bound", "closed_form::left_flux_bound",
       "acceptance_c7", "verified-statistical"},
      {"survival-pde-residual", "closed_form::pde_residual",
       "acceptance_c10", "verified-deterministic"},
      {"survival-slope-density-identity",
       "closed_form::big_psi_slope_at_zero", "acceptance_c10",
       "verified-deterministic"},
      {"max-endpoint-joint-density", "closed_form::max_bm_joint_density",
       "acceptance_c10", "verified-deterministic"},
      {"supermartingale-product-form", "closed_form::supermartingale_F",
       "acceptance_c8", "verified-statistical"},
      {"supermartingale-drift-sign", "closed_form::supermartingale_drift",
       "test_closed_form", "verified-deterministic"},

      // Path-space geometry.
      {"compactified-plane-map", "pathspace::theta_map", "test_pathspace",
       "verified-deterministic"},
      {"point-metric", "pathspace::point_dist", "test_pathspace",
       "verified-deterministic"},
      {"path-metric", "pathspace::path_dist", "test_pathspace",
       "verified-deterministic"},
      {"hausdorff-set-metric", "pathspace::hausdorff_dist", "test_pathspace",
       "verified-deterministic"},
      {"diffusive-scaling-map", "pathspace::rescale_path", "test_pathspace",
       "verified-statistical"},

      // Experiments.
      {"report-verdict-rule", "experiments::recompute_verdict",
       "test_experiments", "verified-deterministic"},
      {"density-experiment", "experiments::density_experiment",
       "acceptance_c1", "verified-statistical"},
      {"avoidance-experiment", "experiments::avoidance_experiment",
       "acceptance_c2", "verified-statistical"},
      {"sticky-time-experiment", "experiments::sticky_time_experiment",
       "acceptance_c3", "verified-statistical"},
      {"pair-scaling-experiment", "experiments::pair_scaling_experiment",
       "acceptance_c4", "verified-statistical"},
      {"invariance-experiment", "experiments::invariance_experiment",
       "acceptance_c5", "verified-statistical"},
      {"backbone-experiment", "experiments::backbone_experiment",
       "acceptance_c6", "verified-statistical"},
      {"left-flux-experiment", "experiments::left_flux_experiment",
       "acceptance_c7", "verified-statistical"},
      {"hitting-bound-experiment", "experiments::hitting_bound_experiment",
       "acceptance_c8", "verified-statistical"},
      {"structural-suite", "experiments::structural_suite", "acceptance_c9",
       "verified-deterministic"},

      // Excluded at desk scale; documented, not simulated.
      {"net-topology-convergence", "-", "acceptance_c11", "out-of-scope"},
      {"net-uniqueness-characterizations", "-", "acceptance_c11",
       "out-of-scope"},
      {"sticky-set-perfectness", "-", "acceptance_c11", "out-of-scope"},
  };
}

}  // namespace

const std::vector<ClaimRow>& claim_registry() {
  static const std::vector<ClaimRow> rows = build_registry();
  return rows;
}

std::string render_mapping_tsv() {
  std::string out = "anchor\toperation\ttest\tstatus\n";
  for (const ClaimRow& r : claim_registry()) {
    out += r.anchor;
    out += '\t';
    out += r.operation;
    out += '\t';
    out += r.test;
    out += '\t';
    out += r.status;
    out += '\n';
  }
  return out;
}

MappingCheck check_mapping(const std::string& tsv_path) {
  MappingCheck result;
  std::ifstream in(tsv_path);
  if (!in) {
    result.malformed.push_back("cannot open " + tsv_path);
    return result;
  }
  std::map<std::string, ClaimRow> table;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      if (line != "anchor\toperation\ttest\tstatus")
        result.malformed.push_back("bad header: " + line);
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ss(line);
    ClaimRow row;
    if (!std::getline(ss, row.anchor, '\t') ||
        !std::getline(ss, row.operation, '\t') ||
        !std::getline(ss, row.test, '\t') ||
        !std::getline(ss, row.status)) {
      result.malformed.push_back(line);
      continue;
    }
    if (!table.emplace(row.anchor, row).second)
      result.malformed.push_back("duplicate: " + row.anchor);
  }

  for (const ClaimRow& r : claim_registry()) {
    const auto it = table.find(r.anchor);
    if (it == table.end()) {
      result.missing.push_back(r.anchor);
    } else {
      const ClaimRow& t = it->second;
      if (t.operation != r.operation || t.test != r.test ||
          t.status != r.status)
        result.mismatched.push_back(r.anchor);
      table.erase(it);
    }
  }
  for (const auto& [anchor, row] : table) result.extra.push_back(anchor);
  std::sort(result.extra.begin(), result.extra.end());

  result.ok = result.missing.empty() && result.extra.empty() &&
              result.mismatched.empty() && result.malformed.empty();
  return result;
}

}  // namespace bcnet::claims
