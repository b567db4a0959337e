#include "bcnet/sticky_sde.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "bcnet/rng.hpp"

namespace bcnet::sticky {

namespace {

constexpr std::uint64_t kNoiseSalt = 0x6e6f6973;   // stream family tags
constexpr std::uint64_t kRefineSalt = 0x72666e65;
constexpr std::uint64_t kLlrBridgeSalt = 0x6c6c7262;
constexpr std::uint64_t kStickySalt = 0x73746b79;
constexpr std::uint64_t kPairGapSalt = 0x70617267;
constexpr std::uint64_t kSystemSalt = 0x63736c76;

std::size_t grid_steps(double step, double horizon) {
  if (!(step > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("noise: step and horizon must be positive");
  const auto n = static_cast<std::int64_t>(std::llround(horizon / step));
  if (n < 1) throw std::invalid_argument("noise: horizon below one step");
  return static_cast<std::size_t>(n);
}

// B~s at an off-grid clock value, by linear interpolation of the prefix
// sums. The stuck clock stays far below the horizon in practice; the clamp
// only guards astronomically long sticks.
double bs_at(const std::vector<double>& prefix, double step, double s_clock) {
  const double u = s_clock / step;
  const auto k = static_cast<std::size_t>(u);
  if (k + 1 >= prefix.size()) return prefix.back();
  return prefix[k] + (u - static_cast<double>(k)) * (prefix[k + 1] - prefix[k]);
}

// Exact minimum of a Brownian bridge between endpoint values a and b with
// increment variance var (drift drops out conditionally on the endpoints).
double bridge_min(double a, double b, double var, double u) {
  const double d = a - b;
  return 0.5 * (a + b - std::sqrt(d * d - 2.0 * var * std::log(u)));
}

struct Bracket {
  std::size_t j;
  double tp;  // t - node time
};

Bracket bracket(const std::vector<double>& times, double horizon, double t) {
  if (times.empty()) throw std::invalid_argument("solution has no nodes");
  if (t < times.front() || t > horizon + 1e-12)
    throw std::invalid_argument("query time outside the covered range");
  auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t j = static_cast<std::size_t>(it - times.begin());
  j = j == 0 ? 0 : j - 1;
  if (j + 1 >= times.size()) j = times.size() - 2;
  return {j, t - times[j]};
}

struct SlabValues {
  double gap, sum, sticky;
};

// Within a slab the apart clock runs first and the stuck portion sits at
// the end; when stuck time is present the right node has L = R exactly, so
// the gap interpolates to zero before the stuck portion starts and the
// stuck clock advances one-for-one with real time.
SlabValues slab_values(const LRSolution& sol, double t) {
  const Bracket b = bracket(sol.t, sol.horizon, t);
  const std::size_t j = b.j;
  const double apart = sol.T[j + 1] - sol.T[j];
  const double full = sol.t[j + 1] - sol.t[j];
  const double dj = sol.R[j] - sol.L[j];
  const double dj1 = sol.R[j + 1] - sol.L[j + 1];
  const double u = apart > 0.0 ? std::min(1.0, b.tp / apart) : 1.0;
  SlabValues v;
  v.gap = dj + u * (dj1 - dj);
  const double sj = sol.L[j] + sol.R[j];
  const double sj1 = sol.L[j + 1] + sol.R[j + 1];
  v.sum = full > 0.0 ? sj + (b.tp / full) * (sj1 - sj) : sj;
  v.sticky = sol.S[j] + std::max(0.0, b.tp - apart);
  return v;
}

}  // namespace

DrivingNoise sample_noise(double step, double horizon, std::uint64_t seed) {
  const std::size_t n = grid_steps(step, horizon);
  DrivingNoise out;
  out.step = step;
  out.horizon = static_cast<double>(n) * step;
  out.seed = seed;
  const double sd = std::sqrt(step);
  std::vector<double>* arrays[3] = {&out.dl, &out.dr, &out.ds};
  for (std::uint64_t a = 0; a < 3; ++a) {
    RngStream rng(mix::key3(seed, kNoiseSalt, a));
    arrays[a]->resize(n);
    for (std::size_t i = 0; i < n; ++i) (*arrays[a])[i] = sd * rng.gaussian();
  }
  return out;
}

DrivingNoise DrivingNoise::refine(std::uint64_t refine_seed) const {
  DrivingNoise out;
  out.step = step * 0.5;
  out.horizon = horizon;
  out.seed = refine_seed;
  RngStream rng(mix::key2(refine_seed, kRefineSalt));
  const double half_sd = 0.5 * std::sqrt(step);
  const std::vector<double>* src[3] = {&dl, &dr, &ds};
  std::vector<double>* dst[3] = {&out.dl, &out.dr, &out.ds};
  for (int a = 0; a < 3; ++a) {
    dst[a]->reserve(2 * src[a]->size());
    for (const double z : *src[a]) {
      const double first = 0.5 * z + half_sd * rng.gaussian();
      dst[a]->push_back(first);
      dst[a]->push_back(z - first);
    }
  }
  return out;
}

LRSolution solve_lr(const DrivingNoise& noise, double l0, double r0) {
  if (!std::isfinite(l0) || !std::isfinite(r0))
    throw std::invalid_argument("solve_lr: starts must be finite");
  const double h = noise.step;
  const std::size_t n = noise.dl.size();
  LRSolution sol;
  sol.l0 = l0;
  sol.r0 = r0;
  sol.tau_step = h;
  sol.horizon = noise.horizon;

  // Crossed starts: independent drifted motions until the first grid node
  // with L <= R.
  std::size_t m = 0;
  double lm = l0, rm = r0;
  if (l0 > r0) {
    double tl = l0, tr = r0;
    sol.t.push_back(0.0);
    sol.T.push_back(0.0);
    sol.S.push_back(0.0);
    sol.L.push_back(tl);
    sol.R.push_back(tr);
    while (m < n && tl > tr) {
      tl += noise.dl[m] - h;
      tr += noise.dr[m] + h;
      ++m;
      const double tau = static_cast<double>(m) * h;
      sol.t.push_back(tau);
      sol.T.push_back(tau);
      sol.S.push_back(0.0);
      sol.L.push_back(tl);
      sol.R.push_back(tr);
    }
    if (tl > tr) return sol;  // never met inside the horizon
    lm = tl;
    rm = tr;
  }

  // Sticky phase. The drift-adjusted gap W~ runs on the apart clock; its
  // clamped running minimum yields the stuck clock, and node j of the
  // solution sits at real time tau_m + j h + S~_j.
  std::vector<double> bs_prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    bs_prefix[i + 1] = bs_prefix[i] + noise.ds[i];
  const double tau_m = static_cast<double>(m) * h;
  const double sigma0 = lm + rm;
  const double d0 = rm - lm;
  double w = d0;
  double minrun = std::min(0.0, d0);
  double sum_apart = 0.0;
  if (sol.t.empty()) {
    sol.t.push_back(0.0);
    sol.T.push_back(0.0);
    sol.S.push_back(0.0);
    sol.L.push_back(lm);
    sol.R.push_back(rm);
  }
  double prev_t = sol.t.back();
  for (std::size_t j = 1; j + m <= n; ++j) {
    const std::size_t i = m + j - 1;
    w += (noise.dr[i] - noise.dl[i]) + 2.0 * h;
    minrun = std::min(minrun, w);
    const double s_tilde = -0.5 * minrun;
    sum_apart += noise.dl[i] + noise.dr[i];
    const double gap = w - minrun;  // exactly 0 at new-minimum nodes
    const double sum =
        sigma0 + sum_apart + 2.0 * bs_at(bs_prefix, h, s_tilde);
    const double big_t = tau_m + static_cast<double>(j) * h;
    const double tt = big_t + s_tilde;
    if (!(tt > prev_t))
      throw std::logic_error("solve_lr: time change not strictly increasing");
    prev_t = tt;
    sol.t.push_back(tt);
    sol.T.push_back(big_t);
    sol.S.push_back(s_tilde);
    sol.L.push_back(0.5 * (sum - gap));
    sol.R.push_back(0.5 * (sum + gap));
  }
  return sol;
}

double sticky_time(const LRSolution& sol, double t) {
  if (t == sol.t.front()) return sol.S.front();
  return slab_values(sol, t).sticky;
}

double gap_at(const LRSolution& sol, double t) {
  if (t == sol.t.front()) return sol.R.front() - sol.L.front();
  return slab_values(sol, t).gap;
}

double left_at(const LRSolution& sol, double t) {
  if (t == sol.t.front()) return sol.L.front();
  const SlabValues v = slab_values(sol, t);
  return 0.5 * (v.sum - v.gap);
}

double right_at(const LRSolution& sol, double t) {
  if (t == sol.t.front()) return sol.R.front();
  const SlabValues v = slab_values(sol, t);
  return 0.5 * (v.sum + v.gap);
}

ReflectedPath solve_reflected(const DrivingNoise& noise, double l0,
                              double r0) {
  if (l0 > r0)
    throw std::invalid_argument("solve_reflected: needs l0 <= r0");
  const double h = noise.step;
  const std::size_t n = noise.dl.size();
  ReflectedPath out;
  out.step = h;
  out.tau.reserve(n + 1);
  out.X.reserve(n + 1);
  out.compensator.reserve(n + 1);
  double w = r0 - l0;
  double minrun = std::min(0.0, w);
  out.tau.push_back(0.0);
  out.X.push_back(w - minrun);
  out.compensator.push_back(-minrun);
  for (std::size_t i = 0; i < n; ++i) {
    w += (noise.dr[i] - noise.dl[i]) + 2.0 * h;
    minrun = std::min(minrun, w);
    out.tau.push_back(static_cast<double>(i + 1) * h);
    out.X.push_back(w - minrun);
    out.compensator.push_back(-minrun);
  }
  return out;
}

LlrResult solve_llr(const DrivingNoise& noise, double eta, bool bridge_hit) {
  if (eta < 0.0) throw std::invalid_argument("solve_llr: eta must be >= 0");
  const double h = noise.step;
  const std::size_t n = noise.dl.size();
  LlrResult out;
  out.step = h;
  out.horizon = noise.horizon;
  out.eta = eta;
  RngStream bridge_rng(mix::key2(noise.seed, kLlrBridgeSalt));

  double l = 0.0, v = 0.0, minv = 0.0, rhat = eta;
  bool absorbed = eta <= 0.0;
  double lhat = 0.0;
  if (absorbed) rhat = lhat = 0.5 * (0.0 + eta);
  out.stop_time = absorbed ? 0.0 : noise.horizon;
  double x_prev = rhat - lhat;
  out.times.push_back(0.0);
  out.L.push_back(l);
  out.Lhat.push_back(lhat);
  out.Rhat.push_back(rhat);
  out.compensator.push_back(0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    out.times.push_back(static_cast<double>(k) * h);
    if (absorbed) {
      out.L.push_back(out.L.back());
      out.Lhat.push_back(out.Lhat.back());
      out.Rhat.push_back(out.Rhat.back());
      out.compensator.push_back(out.compensator.back());
      continue;
    }
    l += noise.ds[k - 1] - h;
    v += noise.dl[k - 1] - noise.ds[k - 1];
    minv = std::min(minv, v);
    lhat = l + (v - minv);  // reflection: exactly l at new minima
    rhat += noise.dr[k - 1] + h;
    double x = rhat - lhat;
    if (x <= 0.0 ||
        (bridge_hit && x_prev > 0.0 &&
         bridge_rng.uniform() < std::exp(-x_prev * x / h))) {
      absorbed = true;
      out.stop_time = static_cast<double>(k) * h;
      const double mid = 0.5 * (lhat + rhat);
      lhat = rhat = mid;
      x = 0.0;
    }
    x_prev = x;
    out.L.push_back(l);
    out.Lhat.push_back(lhat);
    out.Rhat.push_back(rhat);
    out.compensator.push_back(-minv);
  }
  out.survived = !absorbed;
  return out;
}

StickySample sample_sticky_time(double step, double horizon,
                                std::uint64_t seed, double l0, double r0,
                                bool bridge) {
  const std::size_t n = grid_steps(step, horizon);
  RngStream rng(mix::key2(seed, kStickySalt));
  const double h = step;
  const double sd = std::sqrt(2.0 * h);

  std::size_t used = 0;
  double d0 = r0 - l0;
  bool met_in_phase_a = false;
  if (l0 > r0) {
    double gp = l0 - r0;
    bool met = false;
    while (used < n) {
      const double gn = gp + sd * rng.gaussian() - 2.0 * h;
      ++used;
      if (gn <= 0.0) {
        met = true;
        d0 = -gn;
        break;
      }
      if (bridge && rng.uniform() < std::exp(-gp * gn / h)) {
        met = true;
        d0 = 0.0;
        break;
      }
      gp = gn;
    }
    if (!met) return {0.0, false};
    met_in_phase_a = true;
  }

  double w = d0;
  double inf = d0;
  for (std::size_t k = used; k < n; ++k) {
    const double wn = w + sd * rng.gaussian() + 2.0 * h;
    if (bridge)
      inf = std::min(inf, bridge_min(w, wn, 2.0 * h, rng.uniform()));
    else
      inf = std::min(inf, wn);
    w = wn;
  }
  StickySample out;
  out.s_horizon = -0.5 * std::min(0.0, inf);
  out.ever_met = met_in_phase_a || inf <= 0.0;
  return out;
}

double sample_pair_gap(double step, double t, std::uint64_t seed) {
  if (t <= 0.0) return 0.0;
  RngStream rng(mix::key2(seed, kPairGapSalt));
  const double h = step;
  const double sd = std::sqrt(2.0 * h);
  double w = 0.0, minrun = 0.0;
  double g_prev = 0.0, d_prev = 0.0;
  for (;;) {
    w += sd * rng.gaussian() + 2.0 * h;
    const double newmin = std::min(minrun, w);
    const double ds = -0.5 * (newmin - minrun);
    minrun = newmin;
    const double d_cur = w - minrun;
    const double g_cur = g_prev + h + ds;
    if (g_cur >= t) {
      const double tp = t - g_prev;
      if (tp <= h) return d_prev + (tp / h) * (d_cur - d_prev);
      return d_cur;  // inside the stuck tail of the slab, gap is 0 there
    }
    g_prev = g_cur;
    d_prev = d_cur;
  }
}

namespace {

// Incremental sticky pair for the finite system: advances its own apart
// clock in internal substeps until the accumulated real time covers the
// requested global time, then reports positions by the same end-of-slab
// allocation as the full solver.
class PairKernel {
 public:
  PairKernel(double l, double r, double step, RngStream* rng)
      : h_(step), rng_(rng) {
    sum_cur_ = sum_prev_ = l + r;
    w_ = r - l;
    minrun_ = std::min(0.0, w_);
    d_cur_ = d_prev_ = w_ - minrun_;
    g_cur_ = g_prev_ = 0.0;
    target_ = 0.0;
  }

  void advance(double dt) {
    target_ += dt;
    while (g_cur_ < target_) substep();
  }

  double left() const { return 0.5 * (sum_at() - gap_at()); }
  double right() const { return 0.5 * (sum_at() + gap_at()); }

 private:
  void substep() {
    g_prev_ = g_cur_;
    d_prev_ = d_cur_;
    sum_prev_ = sum_cur_;
    const double sd = std::sqrt(2.0 * h_);
    w_ += sd * rng_->gaussian() + 2.0 * h_;
    const double newmin = std::min(minrun_, std::min(0.0, w_));
    const double ds = -0.5 * (newmin - minrun_);
    minrun_ = newmin;
    sum_cur_ += sd * rng_->gaussian();
    if (ds > 0.0) sum_cur_ += 2.0 * std::sqrt(ds) * rng_->gaussian();
    d_cur_ = w_ - minrun_;
    g_cur_ += h_ + ds;
  }

  double gap_at() const {
    if (target_ <= g_prev_) return d_prev_;
    const double tp = target_ - g_prev_;
    const double u = std::min(1.0, tp / h_);
    return d_prev_ + u * (d_cur_ - d_prev_);
  }

  double sum_at() const {
    if (target_ <= g_prev_) return sum_prev_;
    const double full = g_cur_ - g_prev_;
    return sum_prev_ + ((target_ - g_prev_) / full) * (sum_cur_ - sum_prev_);
  }

  double h_;
  RngStream* rng_;
  double w_, minrun_;
  double g_prev_, g_cur_, d_prev_, d_cur_, sum_prev_, sum_cur_;
  double target_;
};

}  // namespace

CoalescingSystem solve_coalescing_system(
    const std::vector<CoalescingInput>& starts, double step, double horizon,
    std::uint64_t seed) {
  const std::size_t n = grid_steps(step, horizon);
  const std::size_t m = starts.size();
  if (m == 0)
    throw std::invalid_argument("solve_coalescing_system: no motions");
  CoalescingSystem out;
  out.step = step;
  out.horizon = static_cast<double>(n) * step;
  out.paths.assign(m, {});
  for (auto& p : out.paths) p.reserve(n + 1);
  out.merged_into.assign(m, -1);
  RngStream rng(mix::key2(seed, kSystemSalt));

  std::vector<double> x(m), x_prev(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = starts[i].x0;
  std::vector<int> rep(m);
  for (std::size_t i = 0; i < m; ++i) rep[i] = static_cast<int>(i);
  std::vector<bool> crossed(m * m, false);  // a pair crosses at most once

  auto live = [&](std::size_t i) { return rep[i] == static_cast<int>(i); };

  // Units over live motions: singletons and adjacent left-right pairs,
  // scanned left to right.
  struct Unit {
    int a = -1, b = -1;  // b >= 0 marks a pair (a carries the left motion)
    std::unique_ptr<PairKernel> kernel;
  };
  std::vector<Unit> units;
  auto rebuild_units = [&]() {
    units.clear();
    std::vector<int> order;
    for (std::size_t i = 0; i < m; ++i)
      if (live(i)) order.push_back(static_cast<int>(i));
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (x[a] != x[b]) return x[a] < x[b];
      if (starts[a].type != starts[b].type)
        return starts[a].type == MotionType::kLeft;
      return a < b;
    });
    for (std::size_t k = 0; k < order.size(); ++k) {
      const int i = order[k];
      if (k + 1 < order.size() && starts[i].type == MotionType::kLeft &&
          starts[order[k + 1]].type == MotionType::kRight) {
        const int j = order[k + 1];
        Unit u;
        u.a = i;
        u.b = j;
        u.kernel = std::make_unique<PairKernel>(x[i], x[j], step, &rng);
        units.push_back(std::move(u));
        ++k;
      } else {
        Unit u;
        u.a = i;
        units.push_back(std::move(u));
      }
    }
  };

  auto same_unit = [&](int i, int j) {
    for (const Unit& u : units)
      if (u.b >= 0 && ((u.a == i && u.b == j) || (u.a == j && u.b == i)))
        return true;
    return false;
  };

  // Merge motions that start on top of each other with equal type.
  bool initial_event = false;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (live(j) && live(i) && x[i] == x[j] &&
          starts[i].type == starts[j].type) {
        rep[j] = rep[i];
        initial_event = true;
        ++out.coalescence_events;
      }
  (void)initial_event;
  rebuild_units();

  out.times.push_back(0.0);
  for (std::size_t i = 0; i < m; ++i) out.paths[i].push_back(x[i]);

  for (std::size_t k = 1; k <= n; ++k) {
    x_prev = x;
    for (Unit& u : units) {
      if (u.b >= 0) {
        u.kernel->advance(step);
        x[static_cast<std::size_t>(u.a)] = u.kernel->left();
        x[static_cast<std::size_t>(u.b)] = u.kernel->right();
      } else {
        const double drift =
            starts[static_cast<std::size_t>(u.a)].type == MotionType::kLeft
                ? -1.0
                : 1.0;
        x[static_cast<std::size_t>(u.a)] +=
            std::sqrt(step) * rng.gaussian() + drift * step;
      }
    }

    // Meetings between motions of different units: same type merges,
    // opposite type is a crossing; either way the partition is rebuilt
    // from the current positions.
    bool event = false;
    for (std::size_t i = 0; i < m; ++i) {
      if (!live(i)) continue;
      for (std::size_t j = i + 1; j < m; ++j) {
        if (!live(j)) continue;
        if (same_unit(static_cast<int>(i), static_cast<int>(j))) continue;
        const double before = x_prev[i] - x_prev[j];
        const double after = x[i] - x[j];
        if (before * after > 0.0) continue;
        if (starts[i].type == starts[j].type) {
          const double meet = 0.5 * (x[i] + x[j]);
          x[i] = x[j] = meet;
          rep[j] = rep[i];
          ++out.coalescence_events;
          event = true;
        } else if (!crossed[i * m + j]) {
          crossed[i * m + j] = true;
          ++out.crossing_events;
          event = true;
        }
      }
    }
    if (event) rebuild_units();

    for (std::size_t i = 0; i < m; ++i)
      if (!live(i)) x[i] = x[static_cast<std::size_t>(rep[i])];
    out.times.push_back(static_cast<double>(k) * step);
    for (std::size_t i = 0; i < m; ++i) out.paths[i].push_back(x[i]);
  }

  for (std::size_t i = 0; i < m; ++i)
    out.merged_into[i] = live(i) ? -1 : rep[i];
  return out;
}

}  // namespace bcnet::sticky
