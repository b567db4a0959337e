#include "bcnet/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "bcnet/rng.hpp"

namespace bcnet::lattice {
namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

void require_even_site(std::int64_t x, std::int64_t t, const char* who) {
  if (!even_site(x, t)) fail(std::string(who) + ": site not on even sublattice");
}

void require_odd_site(std::int64_t x, std::int64_t t, const char* who) {
  if (even_site(x, t)) fail(std::string(who) + ": site not on odd sublattice");
}

// Positions of a path at every integer time of [lo, hi].
std::vector<std::int64_t> positions(const LatticePath& p, std::int64_t lo,
                                    std::int64_t hi) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  std::int64_t x = p.position_at(lo);
  out.push_back(x);
  for (std::int64_t t = lo; t < hi; ++t) {
    const std::size_t k = static_cast<std::size_t>(
        p.forward ? t - p.t0 : p.t0 - t - 1);
    x += p.forward ? p.steps[k] : -p.steps[k];
    out.push_back(x);
  }
  return out;
}

}  // namespace

void Window::validate() const {
  if (x_min >= x_max) fail("window: x_min must be below x_max");
  if (t_min >= t_max) fail("window: t_min must be below t_max");
  if (margin < 0) fail("window: negative margin");
  if (width() < 2 * height() + 2 * margin)
    fail("window: width below speed-1 cone plus margin, need x_max - x_min >= "
         "2(t_max - t_min) + 2 margin");
}

ArrowConfig::ArrowConfig(Window window, double beta, std::uint64_t seed)
    : window_(window), beta_(beta), seed_(seed) {
  window_.validate();
  if (!(beta >= 0.0 && beta <= 1.0)) fail("config: beta outside [0, 1]");
  const std::int64_t rows = window_.height();
  row_len_ = window_.width() / 2 + 1;
  // Dense cache only when it stays comfortably in memory; the on-demand
  // hash path below is bit-identical.
  if (rows * row_len_ <= (std::int64_t{1} << 24)) {
    cells_.resize(static_cast<std::size_t>(rows * row_len_));
    for (std::int64_t t = window_.t_min; t < window_.t_max; ++t) {
      const std::int64_t x0 =
          window_.x_min + (even_site(window_.x_min, t) ? 0 : 1);
      for (std::int64_t x = x0; x <= window_.x_max; x += 2) {
        const std::size_t idx = static_cast<std::size_t>(
            (t - window_.t_min) * row_len_ + (x - x0) / 2);
        cells_[idx] = static_cast<std::uint8_t>(sample_state(x, t));
      }
    }
  }
}

SiteState ArrowConfig::sample_state(std::int64_t x, std::int64_t t) const {
  const std::uint64_t base = mix::key3(seed_, static_cast<std::uint64_t>(x),
                                       static_cast<std::uint64_t>(t));
  // Primary direction plus an independent branch event. Keeping the two
  // decisions separate couples configs across beta on a shared seed: the
  // arrow set can only grow with beta.
  const double branch = mix::to_unit(mix::splitmix64(base + 0x9e3779b97f4a7c15ULL));
  if (branch < beta_) return SiteState::kBoth;
  return mix::to_unit(base) < 0.5 ? SiteState::kLeftOnly
                                  : SiteState::kRightOnly;
}

SiteState ArrowConfig::state_at(std::int64_t x, std::int64_t t) const {
  require_even_site(x, t, "state_at");
  if (x < window_.x_min || x > window_.x_max || t < window_.t_min ||
      t >= window_.t_max)
    fail("state_at: site outside window rows [t_min, t_max)");
  if (cells_.empty()) return sample_state(x, t);
  const std::int64_t x0 = window_.x_min + (even_site(window_.x_min, t) ? 0 : 1);
  return static_cast<SiteState>(
      cells_[static_cast<std::size_t>((t - window_.t_min) * row_len_ +
                                      (x - x0) / 2)]);
}

ArrowConfig sample_config(const Window& window, double beta,
                          std::uint64_t seed) {
  return ArrowConfig(window, beta, seed);
}

int DualArrowConfig::extremal_descent(std::int64_t x, std::int64_t t,
                                      Side side) const {
  require_odd_site(x, t, "extremal_descent");
  // Every even site emits at least one arrow, so one descent always exists.
  const int preferred = side == Side::kLeft ? +1 : -1;
  return has_dual_arrow(x, t, preferred) ? preferred : -preferred;
}

std::int64_t LatticePath::position_at(std::int64_t t) const {
  if (t < t_lo() || t > t_hi()) fail("position_at: time outside path domain");
  std::int64_t x = x0;
  const std::int64_t n = forward ? t - t0 : t0 - t;
  for (std::int64_t k = 0; k < n; ++k) x += steps[static_cast<std::size_t>(k)];
  return x;
}

namespace {

LatticePath trace_until(const ArrowConfig& config, std::int64_t x0,
                        std::int64_t t0, Side side, std::int64_t t_stop) {
  const Window& w = config.window();
  require_even_site(x0, t0, "trace_extremal");
  if (!w.contains(x0, t0)) fail("trace_extremal: start outside window");
  LatticePath p;
  p.x0 = x0;
  p.t0 = t0;
  p.forward = true;
  std::int64_t x = x0;
  for (std::int64_t t = t0; t < t_stop; ++t) {
    const SiteState s = config.state_at(x, t);
    int dir;
    if (side == Side::kLeft)
      dir = s == SiteState::kRightOnly ? +1 : -1;
    else
      dir = s == SiteState::kLeftOnly ? -1 : +1;
    x += dir;
    if (x < w.x_min || x > w.x_max)
      throw std::runtime_error("trace_extremal: path touches x boundary");
    p.steps.push_back(static_cast<std::int8_t>(dir));
  }
  return p;
}

}  // namespace

LatticePath trace_extremal(const ArrowConfig& config, std::int64_t x0,
                           std::int64_t t0, Side side) {
  return trace_until(config, x0, t0, side, config.window().t_max);
}

LrPair trace_lr_pair(const ArrowConfig& config, std::int64_t x0,
                     std::int64_t t0) {
  // Tracing both extremes through one configuration shares the site states:
  // identical moves while the two sit on one site, independent afterwards.
  LrPair pair{trace_extremal(config, x0, t0, Side::kLeft),
              trace_extremal(config, x0, t0, Side::kRight)};
  return pair;
}

LatticePath trace_dual_extremal(const DualArrowConfig& dual, std::int64_t x0,
                                std::int64_t t0, Side side) {
  const Window& w = dual.forward().window();
  require_odd_site(x0, t0, "trace_dual_extremal");
  if (!w.contains(x0, t0) || t0 <= w.t_min)
    fail("trace_dual_extremal: start outside window");
  LatticePath p;
  p.x0 = x0;
  p.t0 = t0;
  p.forward = false;
  std::int64_t x = x0;
  for (std::int64_t t = t0; t > w.t_min; --t) {
    const int dir = dual.extremal_descent(x, t, side);
    x += dir;
    if (x < w.x_min || x > w.x_max)
      throw std::runtime_error("trace_dual_extremal: path touches x boundary");
    p.steps.push_back(static_cast<std::int8_t>(dir));
  }
  return p;
}

bool validate_path(const ArrowConfig& config, const LatticePath& path) {
  const Window& w = config.window();
  std::int64_t x = path.x0;
  if (path.forward) {
    if (!even_site(x, path.t0)) return false;
    for (std::size_t k = 0; k < path.steps.size(); ++k) {
      const std::int64_t t = path.t0 + static_cast<std::int64_t>(k);
      const int dir = path.steps[k];
      if (dir != 1 && dir != -1) return false;
      if (!w.contains(x, t) || t >= w.t_max) return false;
      if (!config.has_arrow(x, t, dir)) return false;
      x += dir;
      if (!w.contains(x, t + 1)) return false;
    }
    return true;
  }
  const DualArrowConfig dual(config);
  if (even_site(x, path.t0)) return false;
  for (std::size_t k = 0; k < path.steps.size(); ++k) {
    const std::int64_t t = path.t0 - static_cast<std::int64_t>(k);
    const int dir = path.steps[k];
    if (dir != 1 && dir != -1) return false;
    if (!w.contains(x, t) || t <= w.t_min) return false;
    if (!dual.has_dual_arrow(x, t, dir)) return false;
    x += dir;
    if (!w.contains(x, t - 1)) return false;
  }
  return true;
}

std::vector<std::int64_t> crossing_times(const LatticePath& a,
                                         const LatticePath& b) {
  if (!a.forward || !b.forward) fail("crossing_times: forward paths only");
  if (!even_site(a.x0, a.t0) || !even_site(b.x0, b.t0))
    fail("crossing_times: paths on different sublattices");
  const std::int64_t lo = std::max(a.t_lo(), b.t_lo());
  const std::int64_t hi = std::min(a.t_hi(), b.t_hi());
  std::vector<std::int64_t> out;
  if (lo > hi) return out;
  const auto pa = positions(a, lo, hi);
  const auto pb = positions(b, lo, hi);
  // Same-sublattice paths move by +-1 per slab, so strict order can only
  // flip through an equality block at integer times; the crossing is dated
  // at the last equal time of that block. An equality that resolves to the
  // old side is a touch, not a crossing.
  int state = 0;
  std::int64_t last_equal = 0;
  bool have_equal = false;
  for (std::int64_t t = lo; t <= hi; ++t) {
    const std::int64_t d = pa[static_cast<std::size_t>(t - lo)] -
                           pb[static_cast<std::size_t>(t - lo)];
    if (d == 0) {
      last_equal = t;
      have_equal = true;
      continue;
    }
    const int s = d > 0 ? 1 : -1;
    if (state != 0 && s != state) {
      if (!have_equal) fail("crossing_times: order flip without meeting");
      out.push_back(last_equal);
    }
    state = s;
    have_equal = false;
  }
  return out;
}

std::int64_t first_meeting_time(const LatticePath& a, const LatticePath& b,
                                std::int64_t after) {
  const std::int64_t lo = std::max({a.t_lo(), b.t_lo(), after + 1});
  const std::int64_t hi = std::min(a.t_hi(), b.t_hi());
  if (lo > hi) return kNoMeetingTime;
  const auto pa = positions(a, lo, hi);
  const auto pb = positions(b, lo, hi);
  for (std::int64_t t = lo; t <= hi; ++t) {
    if (t <= a.t0 || t <= b.t0) continue;
    if (pa[static_cast<std::size_t>(t - lo)] ==
        pb[static_cast<std::size_t>(t - lo)])
      return t;
  }
  return kNoMeetingTime;
}

LatticePath hop_at_crossings(const std::vector<LatticePath>& paths,
                             const std::vector<std::int64_t>& hop_times) {
  if (paths.empty()) fail("hop_at_crossings: no paths");
  if (hop_times.size() + 1 != paths.size())
    fail("hop_at_crossings: need one hop time per adjacent pair");
  for (const auto& p : paths)
    if (!p.forward) fail("hop_at_crossings: forward paths only");
  LatticePath out;
  out.x0 = paths[0].x0;
  out.t0 = paths[0].t0;
  out.forward = true;
  std::int64_t t_cur = paths[0].t0;
  for (std::size_t k = 0; k < paths.size(); ++k) {
    const LatticePath& p = paths[k];
    const std::int64_t seg_end = k + 1 < paths.size()
                                     ? hop_times[k]
                                     : p.t_hi();
    if (k + 1 < paths.size()) {
      const LatticePath& q = paths[k + 1];
      const std::int64_t h = hop_times[k];
      if (h <= t_cur || h > p.t_hi())
        fail("hop_at_crossings: hop time outside current segment");
      if (h < q.t_lo() || h > q.t_hi())
        fail("hop_at_crossings: hop time outside next path domain");
      if (h <= p.t0 || h <= q.t0) fail("hop_at_crossings: hop at a starting time");
      if (p.position_at(h) != q.position_at(h))
        fail("hop_at_crossings: hop at non-intersection");
    }
    for (std::int64_t t = t_cur; t < seg_end; ++t)
      out.steps.push_back(p.steps[static_cast<std::size_t>(t - p.t0)]);
    t_cur = seg_end;
  }
  return out;
}

NoncrossingReport check_noncrossing(const ArrowConfig& config) {
  const Window& w = config.window();
  const DualArrowConfig dual(config);
  NoncrossingReport rep;
  for (std::int64_t t = w.t_min; t < w.t_max; ++t) {
    const std::int64_t x0 = w.x_min + (even_site(w.x_min, t) ? 0 : 1);
    for (std::int64_t x = x0; x <= w.x_max; x += 2) {
      const SiteState s = config.state_at(x, t);
      // Cell to the right of the site: forward diagonal up-right, dual
      // diagonal down-right from (x, t+1). The forward edge crosses the
      // dual one moving rightward, which only the +x-preferring dual family
      // may be crossed by.
      if (x + 1 <= w.x_max && config.has_arrow(x, t, +1) &&
          dual.has_dual_arrow(x, t + 1, +1)) {
        ++rep.shared_cells;
        if (s != SiteState::kBoth) ++rep.impossible_cells;
        if (dual.extremal_descent(x, t + 1, Side::kRight) == +1)
          ++rep.forbidden_crossings;
      }
      // Mirrored cell to the left: forward edge crosses leftward, which the
      // +x-preferring dual family must never be pierced by.
      if (x - 1 >= w.x_min && config.has_arrow(x, t, -1) &&
          dual.has_dual_arrow(x, t + 1, -1)) {
        ++rep.shared_cells;
        if (s != SiteState::kBoth) ++rep.impossible_cells;
        if (dual.extremal_descent(x, t + 1, Side::kLeft) == -1)
          ++rep.forbidden_crossings;
      }
    }
  }
  rep.ok = rep.forbidden_crossings == 0 && rep.impossible_cells == 0;
  return rep;
}

WedgeCheck wedge_entry_violations(const ArrowConfig& config, int samples) {
  const Window& w = config.window();
  const DualArrowConfig dual(config);
  WedgeCheck check;
  RngStream rng(mix::key2(config.seed(), 0x77656467));  // wedge salt
  for (int sample = 0; sample < samples; ++sample) {
    // Start level and gap of the two dual boundaries.
    const std::int64_t gap = rng.uniform() < 0.7 ? 2 : 4;
    std::int64_t s = w.t_min + 2 +
                     static_cast<std::int64_t>(rng.uniform() *
                                               static_cast<double>(w.height() - 2));
    if (s > w.t_max) s = w.t_max;
    const std::int64_t xc = (w.x_min + w.x_max) / 2;
    std::int64_t x_l = xc - gap / 2;
    if (even_site(x_l, s)) x_l += 1;
    const std::int64_t x_r = x_l + gap;
    // Keep the whole construction clear of the x boundary: duals drift at
    // most one step per slab, forward test paths likewise.
    const std::int64_t depth_room =
        std::min(x_l - w.x_min, w.x_max - x_r) - 8;
    if (depth_room < 4) fail("wedge_entry_violations: window too narrow");
    if (s - w.t_min > depth_room) s = w.t_min + depth_room;

    const LatticePath r_hat = trace_dual_extremal(dual, x_l, s, Side::kRight);
    const LatticePath l_hat = trace_dual_extremal(dual, x_r, s, Side::kLeft);
    ++check.wedges_formed;

    const auto rp = positions(r_hat, w.t_min, s);
    const auto lp = positions(l_hat, w.t_min, s);
    auto r_at = [&](std::int64_t t) {
      return rp[static_cast<std::size_t>(t - w.t_min)];
    };
    auto l_at = [&](std::int64_t t) {
      return lp[static_cast<std::size_t>(t - w.t_min)];
    };
    // First meeting going down; below it the region is no longer part of
    // the wedge even where the duals separate again.
    std::int64_t tau = w.t_min - 1;
    bool bottom = false;
    for (std::int64_t t = s - 1; t >= w.t_min; --t) {
      if (r_at(t) == l_at(t)) {
        tau = t;
        bottom = true;
        break;
      }
    }
    if (bottom) ++check.wedges_with_bottom;

    // Forward probes: extremal and hopped paths launched on levels around
    // and inside the wedge's time range.
    std::vector<LatticePath> probes;
    const std::int64_t band_lo = std::max(w.t_min, tau - 3);
    for (int lv_i = 0; lv_i < 4; ++lv_i) {
      const std::int64_t lv =
          band_lo + lv_i * std::max<std::int64_t>(1, (s - 1 - band_lo) / 4);
      if (lv >= s) break;
      for (std::int64_t xz = x_l - 5; xz <= x_r + 5; xz += 2) {
        std::int64_t x = even_site(xz, lv) ? xz : xz + 1;
        probes.push_back(trace_until(config, x, lv, Side::kLeft, s));
        probes.push_back(trace_until(config, x, lv, Side::kRight, s));
      }
      // A hopped probe: right-most from the left start, left-most from the
      // right start, switching at their first strict meeting.
      std::int64_t xa = even_site(x_l - 3, lv) ? x_l - 3 : x_l - 2;
      std::int64_t xb = even_site(x_r + 3, lv) ? x_r + 3 : x_r + 2;
      LatticePath pa = trace_until(config, xa, lv, Side::kRight, s);
      LatticePath pb = trace_until(config, xb, lv, Side::kLeft, s);
      const std::int64_t h = first_meeting_time(pa, pb, lv);
      if (h != kNoMeetingTime && h < s)
        probes.push_back(hop_at_crossings({pa, pb}, {h}));
    }

    for (const LatticePath& probe : probes) {
      ++check.paths_checked;
      const auto pp = positions(probe, probe.t0, s);
      auto p_at = [&](std::int64_t t) {
        return pp[static_cast<std::size_t>(t - probe.t0)];
      };
      // First strictly-inside time, then any strictly earlier time at
      // which the probe sat outside the wedge's closure.
      for (std::int64_t u1 = std::max(tau + 1, probe.t0); u1 < s; ++u1) {
        if (!(r_at(u1) < p_at(u1) && p_at(u1) < l_at(u1))) continue;
        for (std::int64_t u0 = probe.t0 + 1; u0 < u1; ++u0) {
          const bool outside =
              u0 <= tau || p_at(u0) < r_at(u0) || p_at(u0) > l_at(u0);
          if (outside) {
            ++check.violations;
            break;
          }
        }
        break;
      }
    }
  }
  return check;
}

}  // namespace bcnet::lattice
