#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace bcnet::lattice {

// State of an even site: which upward arrows leave it.
enum class SiteState : std::uint8_t { kLeftOnly, kRightOnly, kBoth };

enum class Side : std::uint8_t { kLeft, kRight };

// Rectangle [x_min, x_max] x [t_min, t_max] of integer space-time, sites on
// the even sublattice (x + t even). margin is slack beyond the speed-1 cone:
// a path started in the interior band cannot reach the x-boundary.
struct Window {
  std::int64_t x_min = 0;
  std::int64_t x_max = 0;
  std::int64_t t_min = 0;
  std::int64_t t_max = 0;
  std::int64_t margin = 0;

  void validate() const;  // throws naming the violated constraint
  std::int64_t width() const { return x_max - x_min; }
  std::int64_t height() const { return t_max - t_min; }
  bool contains(std::int64_t x, std::int64_t t) const {
    return x >= x_min && x <= x_max && t >= t_min && t <= t_max;
  }
};

inline bool even_site(std::int64_t x, std::int64_t t) {
  return (((x + t) % 2) + 2) % 2 == 0;
}

// Arrow field on the even sites of a window. The state of a site is a pure
// function of (seed, x, t); small windows cache the values in a dense row
// array, large ones evaluate the hash on demand. Both produce identical
// states, which test_lattice checks.
class ArrowConfig {
 public:
  ArrowConfig(Window window, double beta, std::uint64_t seed);

  const Window& window() const { return window_; }
  double beta() const { return beta_; }
  std::uint64_t seed() const { return seed_; }

  // Requires an even site with t_min <= t < t_max.
  SiteState state_at(std::int64_t x, std::int64_t t) const;

  bool has_arrow(std::int64_t x, std::int64_t t, int dir) const {
    const SiteState s = state_at(x, t);
    return dir < 0 ? s != SiteState::kRightOnly : s != SiteState::kLeftOnly;
  }

  bool dense() const { return !cells_.empty(); }

 private:
  SiteState sample_state(std::int64_t x, std::int64_t t) const;

  Window window_;
  double beta_;
  std::uint64_t seed_;
  std::int64_t row_len_ = 0;
  std::vector<std::uint8_t> cells_;  // dense cache, possibly empty
};

ArrowConfig sample_config(const Window& window, double beta,
                          std::uint64_t seed);

// Downward arrow field induced on the odd sublattice: the descent from
// (x, t+1) toward x+1 exists iff (x, t) sends an arrow toward x-1, and
// mirrored. Pure view over the forward configuration.
class DualArrowConfig {
 public:
  explicit DualArrowConfig(const ArrowConfig& fwd) : fwd_(&fwd) {}

  const ArrowConfig& forward() const { return *fwd_; }

  // From odd site (x, t), t_min < t <= t_max, descending to (x + dir, t - 1).
  bool has_dual_arrow(std::int64_t x, std::int64_t t, int dir) const {
    return fwd_->has_arrow(x, t - 1, -dir);
  }

  // Descent chosen by the extremal dual path through (x, t). kLeft prefers
  // the +x descent, kRight the -x descent ("left"/"right" from the point of
  // view of the downward traveller, matching the forward naming after a
  // half-turn of the picture).
  int extremal_descent(std::int64_t x, std::int64_t t, Side side) const;

  // Reconstructs the forward arrow set from the dual arrows; the duality is
  // an involution, so this must agree with the underlying config everywhere.
  bool forward_arrow_from_dual(std::int64_t x, std::int64_t t, int dir) const {
    return has_dual_arrow(x, t + 1, -dir);
  }

 private:
  const ArrowConfig* fwd_;
};

inline DualArrowConfig dual_config(const ArrowConfig& fwd) {
  return DualArrowConfig(fwd);
}

// Nearest-neighbour path, one step per time unit. Forward paths run upward
// from (x0, t0); dual paths run downward. steps[k] is the displacement of
// the k-th traversed slab.
struct LatticePath {
  std::int64_t x0 = 0;
  std::int64_t t0 = 0;
  bool forward = true;
  std::vector<std::int8_t> steps;

  std::int64_t t_lo() const {
    return forward ? t0 : t0 - static_cast<std::int64_t>(steps.size());
  }
  std::int64_t t_hi() const {
    return forward ? t0 + static_cast<std::int64_t>(steps.size()) : t0;
  }
  // Requires t_lo() <= t <= t_hi().
  std::int64_t position_at(std::int64_t t) const;
};

// Extremal forward path: kLeft takes the left arrow wherever two leave a
// site, kRight the right one. Runs until t_max. Throws if a step would
// leave the window.
LatticePath trace_extremal(const ArrowConfig& config, std::int64_t x0,
                           std::int64_t t0, Side side);

// Left-most and right-most paths from one point through one configuration:
// identical arrows while together, independent sites once apart, ordered
// left <= right with an even gap forever.
struct LrPair {
  LatticePath left;
  LatticePath right;
};
LrPair trace_lr_pair(const ArrowConfig& config, std::int64_t x0,
                     std::int64_t t0);

// Extremal dual path from an odd site down to t_min.
LatticePath trace_dual_extremal(const DualArrowConfig& dual, std::int64_t x0,
                                std::int64_t t0, Side side);

// True iff every slab step of the path follows an arrow of the
// configuration (forward paths) or of its dual (dual paths).
bool validate_path(const ArrowConfig& config, const LatticePath& path);

// Times where two forward paths exchange strict spatial order. Paths on the
// same sublattice can only swap through an equality at an integer time; the
// reported time is the last equality time of the block where the swap
// happens. Touching and returning to the same side is not a crossing.
std::vector<std::int64_t> crossing_times(const LatticePath& a,
                                         const LatticePath& b);

// First time t > after with a(t) == b(t) that is strictly later than both
// starting times, or kNoMeetingTime if none exists in the common domain.
inline constexpr std::int64_t kNoMeetingTime =
    std::numeric_limits<std::int64_t>::min();
std::int64_t first_meeting_time(const LatticePath& a, const LatticePath& b,
                                std::int64_t after);

// Concatenates forward paths, switching from paths[k] to paths[k+1] at
// hop_times[k]. Every hop time must be a strict intersection time after
// both starting times; hops at a starting time are rejected.
LatticePath hop_at_crossings(const std::vector<LatticePath>& paths,
                             const std::vector<std::int64_t>& hop_times);

struct NoncrossingReport {
  bool ok = true;
  // Cells holding both a forward and a dual diagonal. They occur exactly at
  // branch sites and are always passed in the permitted direction.
  std::int64_t shared_cells = 0;
  // Forward edge piercing an extremal dual boundary the forbidden way:
  // rightward through a right-preferring dual path, or leftward through a
  // left-preferring one. Provably impossible; counted as a software check.
  std::int64_t forbidden_crossings = 0;
  // Shared cells whose site is not a branch site (logic error if nonzero).
  std::int64_t impossible_cells = 0;
};

// Exhaustive cell-by-cell scan of forward against dual edges.
NoncrossingReport check_noncrossing(const ArrowConfig& config);

struct WedgeCheck {
  std::int64_t wedges_formed = 0;
  std::int64_t wedges_with_bottom = 0;
  std::int64_t paths_checked = 0;
  std::int64_t violations = 0;
};

// Samples wedges (regions between a right-preferring and a left-preferring
// dual path above their first meeting) and counts forward extremal and
// hopped paths that enter one from outside. The count must be zero.
WedgeCheck wedge_entry_violations(const ArrowConfig& config, int samples);

}  // namespace bcnet::lattice
