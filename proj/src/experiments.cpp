#include "bcnet/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "bcnet/closed_form.hpp"
#include "bcnet/lattice.hpp"
#include "bcnet/particles.hpp"
#include "bcnet/rng.hpp"
#include "bcnet/stats.hpp"
#include "bcnet/sticky_sde.hpp"

namespace bcnet::experiments {

namespace {

constexpr std::uint64_t kSaltDensity = 0x64656e73;
constexpr std::uint64_t kSaltAvoid = 0x61766f69;
constexpr std::uint64_t kSaltPairDiscrete = 0x70726430;
constexpr std::uint64_t kSaltPairContinuum = 0x70726331;
constexpr std::uint64_t kSaltSticky = 0x73746578;
constexpr std::uint64_t kSaltInvariance = 0x696e7661;
constexpr std::uint64_t kSaltBackbone = 0x6261636b;
constexpr std::uint64_t kSaltFlux = 0x666c7578;
constexpr std::uint64_t kSaltHitting = 0x68697462;
constexpr std::uint64_t kSaltStructural = 0x73747275;
constexpr std::uint64_t kSaltInitialSlice = 0x696e6974;
constexpr std::uint64_t kSaltEnvelope = 0x656e7670;

// Allowance per unit interval length and per eps for the density target,
// covering the finite-eps gap between the lattice count and the limit
// density. Calibrated by an eps-halving ladder (beta 0.02, 0.01, 0.005 on
// length-40 interval counts): the deviation scales linearly in eps with
// measured slope between -2.7 and -4.7 per unit length, consistent with
// the -2 small_psi(t) prefactor correction; 6.0 covers that with margin.
constexpr double kDensityBiasC = 6.0;

// Finite-eps allowance for the backbone intensity and dispersion targets:
// their limits 2 and 1 are approached like 4 eps at small beta.
constexpr double kBackboneBiasC = 4.5;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Deterministic-order JSON object for the parameters field.
class Params {
 public:
  Params& add(const char* key, double v) { return raw(key, fmt_num(v)); }
  Params& add(const char* key, std::int64_t v) {
    return raw(key, std::to_string(v));
  }
  Params& add(const char* key, const std::string& text) {
    return raw(key, "\"" + text + "\"");
  }
  std::string str() const { return body_ + "}"; }

 private:
  Params& raw(const char* key, const std::string& v) {
    body_ += body_.size() == 1 ? "\"" : ",\"";
    body_ += key;
    body_ += "\":";
    body_ += v;
    return *this;
  }
  std::string body_ = "{";
};

void finalize(ExperimentReport& r, const Timer& timer) {
  r.pass = recompute_verdict(r);
  r.wall_time = timer.seconds();
}

// Asymptotic one-sample KS critical distance at level alpha.
double ks_critical(double n_eff, double alpha) {
  const double lambda = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double rn = std::sqrt(n_eff);
  return lambda / (rn + 0.12 + 0.11 / rn);
}

std::int64_t count_in(const particles::ParticleSet& s, std::int64_t lo,
                      std::int64_t hi) {
  const auto& v = s.occupied;
  return std::lower_bound(v.begin(), v.end(), hi) -
         std::lower_bound(v.begin(), v.end(), lo);
}

struct SliceSetup {
  lattice::Window window;
  std::int64_t steps = 0;
  std::int64_t half_interval = 0;  // lattice half-width of the measured interval
  bool in_regime = true;
};

// Out-of-regime beta (above 0.05) is allowed here: the scaling targets then
// carry a widened allowance instead of a hard error, so exploratory runs
// still produce a judged report.
constexpr double kOutOfRegimeWiden = 5.0;

SliceSetup slice_setup(double beta, double t_phys, double interval_len) {
  if (!(beta > 0.0) || beta >= 1.0)
    throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(t_phys > 0.0) || !(interval_len > 0.0))
    throw std::invalid_argument("t_phys and interval length must be positive");
  SliceSetup s;
  s.in_regime = beta <= 0.05;
  const double eps = beta;
  s.steps = static_cast<std::int64_t>(std::floor(t_phys / (eps * eps)));
  if (s.steps < 1) throw std::invalid_argument("t_phys below one lattice step");
  s.half_interval = std::llround(interval_len / (2.0 * eps));
  const std::int64_t reach = s.half_interval + s.steps + 4;
  s.window = lattice::Window{-reach, reach, 0, s.steps, 2};
  s.window.validate();
  return s;
}

particles::ParticleSet evolve_full_slice(const lattice::Window& win,
                                         double beta, std::uint64_t cfg_seed,
                                         std::int64_t steps) {
  const lattice::ArrowConfig config = lattice::sample_config(win, beta,
                                                             cfg_seed);
  particles::Evolver ev(config, particles::full_slice(win, 0),
                        particles::BoundaryPolicy::kAbsorb);
  for (std::int64_t s = 0; s < steps; ++s) ev.step();
  return ev.current();
}

double exp4_cdf(double s) { return s <= 0.0 ? 0.0 : 1.0 - std::exp(-4.0 * s); }

std::uint64_t beta_tagged(std::uint64_t salt, double beta) {
  return salt ^ std::bit_cast<std::uint64_t>(beta);
}

}  // namespace

bool recompute_verdict(const ExperimentReport& r) {
  const double slack = r.k * r.std_error + r.bias_allowance;
  if (r.bound_target) return r.estimate <= r.target + slack;
  return std::abs(r.estimate - r.target) <= slack;
}

ExperimentReport density_experiment(double beta, double t_phys,
                                    double interval_len, int replicas,
                                    std::uint64_t seed, double k) {
  Timer timer;
  if (replicas < 2) throw std::invalid_argument("density: needs >= 2 replicas");
  const SliceSetup s = slice_setup(beta, t_phys, interval_len);
  std::vector<double> counts;
  counts.reserve(static_cast<std::size_t>(replicas));
  for (int r = 0; r < replicas; ++r) {
    const particles::ParticleSet slice = evolve_full_slice(
        s.window, beta, mix::key3(seed, kSaltDensity, static_cast<std::uint64_t>(r)),
        s.steps);
    counts.push_back(static_cast<double>(
        count_in(slice, -s.half_interval, s.half_interval)));
  }
  const stats::MeanStderr ms = stats::mean_stderr(counts);

  ExperimentReport rep;
  rep.name = "density";
  rep.estimate = ms.mean;
  rep.std_error = ms.stderr_;
  rep.target = interval_len * closed_form::small_psi(t_phys);
  rep.bias_allowance = kDensityBiasC * beta * interval_len *
                       (s.in_regime ? 1.0 : kOutOfRegimeWiden);
  rep.replicas = replicas;
  rep.seed = seed;
  rep.k = k;
  rep.parameters = Params()
                       .add("beta", beta)
                       .add("t", t_phys)
                       .add("w", interval_len)
                       .add("steps", s.steps)
                       .add("regime", std::string(s.in_regime ? "scaling"
                                                              : "out"))
                       .str();
  finalize(rep, timer);
  return rep;
}

ExperimentReport avoidance_experiment(double beta, double t_phys, double gap,
                                      int replicas, std::uint64_t seed,
                                      double k) {
  Timer timer;
  if (replicas < 2)
    throw std::invalid_argument("avoidance: needs >= 2 replicas");
  if (!(gap >= 0.0)) throw std::invalid_argument("avoidance: gap < 0");
  const SliceSetup s = slice_setup(beta, t_phys, std::max(gap, 1.0));
  const std::int64_t half_gap = std::llround(gap / (2.0 * beta));
  std::vector<double> empty_flags;
  empty_flags.reserve(static_cast<std::size_t>(replicas));
  for (int r = 0; r < replicas; ++r) {
    const particles::ParticleSet slice = evolve_full_slice(
        s.window, beta, mix::key3(seed, kSaltAvoid, static_cast<std::uint64_t>(r)),
        s.steps);
    empty_flags.push_back(count_in(slice, -half_gap, half_gap) == 0 ? 1.0
                                                                    : 0.0);
  }
  const stats::MeanStderr ms = stats::mean_stderr(empty_flags);

  ExperimentReport rep;
  rep.name = "avoidance";
  rep.estimate = ms.mean;
  rep.std_error = ms.stderr_;
  rep.target = 1.0 - closed_form::big_psi(gap, t_phys);
  rep.bias_allowance = s.in_regime ? 0.0 : 0.5 * beta;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.k = k;
  rep.parameters = Params()
                       .add("beta", beta)
                       .add("t", t_phys)
                       .add("gap", gap)
                       .add("steps", s.steps)
                       .add("regime", std::string(s.in_regime ? "scaling"
                                                              : "out"))
                       .str();
  finalize(rep, timer);
  return rep;
}

ExperimentReport pair_scaling_experiment(double beta, double t_phys,
                                         int replicas, std::uint64_t seed,
                                         double k) {
  Timer timer;
  if (replicas < 2) throw std::invalid_argument("pair: needs >= 2 replicas");
  if (!(beta > 0.0) || beta > 0.05)
    throw std::invalid_argument("scaling regime needs beta in (0, 0.05]");
  if (!(t_phys >= 0.0)) throw std::invalid_argument("pair: t_phys < 0");
  const double eps = beta;
  const auto n = static_cast<std::int64_t>(std::llround(t_phys / (eps * eps)));
  std::vector<double> discrete, continuum;
  discrete.reserve(static_cast<std::size_t>(replicas));
  continuum.reserve(static_cast<std::size_t>(replicas));
  const double h = 1e-4 * std::max(t_phys, 1e-8);
  if (n > 0) {
    const lattice::Window win{-(n + 4), n + 4, 0, n, 2};
    for (int r = 0; r < replicas; ++r) {
      const lattice::ArrowConfig config = lattice::sample_config(
          win, beta,
          mix::key3(seed, kSaltPairDiscrete, static_cast<std::uint64_t>(r)));
      const lattice::LrPair pair = lattice::trace_lr_pair(config, 0, 0);
      discrete.push_back(eps * static_cast<double>(pair.right.position_at(n) -
                                                   pair.left.position_at(n)));
    }
    for (int r = 0; r < replicas; ++r)
      continuum.push_back(sticky::sample_pair_gap(
          h, t_phys,
          mix::key3(seed, kSaltPairContinuum, static_cast<std::uint64_t>(r))));
  } else {
    discrete.assign(static_cast<std::size_t>(replicas), 0.0);
    continuum.assign(static_cast<std::size_t>(replicas), 0.0);
  }

  ExperimentReport rep;
  rep.name = "pair_scaling";
  rep.bound_target = true;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.k = k;
  if (n > 0) {
    const stats::KsResult ks = stats::ks_two_sample(discrete, continuum);
    const double n_eff = static_cast<double>(replicas) / 2.0;
    rep.estimate = ks.statistic;
    rep.target = ks_critical(n_eff, 0.01);
    rep.parameters = Params()
                         .add("beta", beta)
                         .add("t", t_phys)
                         .add("h", h)
                         .add("p_value", ks.p_value)
                         .str();
  } else {
    rep.estimate = 0.0;
    rep.target = 0.0;
    rep.parameters =
        Params().add("beta", beta).add("t", t_phys).add("h", h).str();
  }
  finalize(rep, timer);
  return rep;
}

ExperimentReport sticky_time_experiment(double h, double horizon,
                                        int replicas, double l0, double r0,
                                        std::uint64_t seed, double k) {
  Timer timer;
  if (!(h > 0.0) || !(horizon > h))
    throw std::invalid_argument("sticky: invalid h");
  if (replicas < 10)
    throw std::invalid_argument("sticky: needs >= 10 replicas");
  std::vector<double> positive;
  std::int64_t zeros = 0;
  for (int r = 0; r < replicas; ++r) {
    const sticky::StickySample s = sticky::sample_sticky_time(
        h, horizon, mix::key3(seed, kSaltSticky, static_cast<std::uint64_t>(r)),
        l0, r0, true);
    if (s.s_horizon > 0.0)
      positive.push_back(s.s_horizon);
    else
      ++zeros;
  }

  double worst = -1.0;
  Params params;
  params.add("h", h)
      .add("horizon", horizon)
      .add("l0", l0)
      .add("r0", r0)
      .add("zeros", zeros);
  if (positive.size() >= 10) {
    const stats::KsResult ks = stats::ks_one_sample(positive, exp4_cdf);
    const double d_crit =
        ks_critical(static_cast<double>(positive.size()), 0.01);
    worst = ks.statistic - d_crit;
    params.add("ks_d", ks.statistic).add("ks_crit", d_crit);
  }
  if (l0 < r0) {
    const double atom = 1.0 - std::exp(-2.0 * (r0 - l0));
    const double freq =
        static_cast<double>(zeros) / static_cast<double>(replicas);
    const double sigma =
        std::sqrt(atom * (1.0 - atom) / static_cast<double>(replicas));
    worst = std::max(worst, std::abs(freq - atom) - k * sigma);
    params.add("atom_target", atom).add("atom_freq", freq);
  }

  ExperimentReport rep;
  rep.name = "sticky_time";
  rep.estimate = worst;
  rep.target = 0.0;
  rep.bound_target = true;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.k = k;
  rep.parameters = params.str();
  finalize(rep, timer);
  return rep;
}

ExperimentReport invariance_experiment(double beta, std::int64_t width,
                                       int replicas, std::uint64_t seed,
                                       double k) {
  Timer timer;
  if (!(beta > 0.0) || beta > 1.0)
    throw std::invalid_argument("invariance: beta in (0, 1]");
  if (width < 64) throw std::invalid_argument("invariance: width too small");
  if (replicas < 2)
    throw std::invalid_argument("invariance: needs >= 2 replicas");
  const double rho = particles::bernoulli_intensity(beta);
  const lattice::Window win{0, width, 0, 2, 0};
  win.validate();
  const std::int64_t lo = 4, hi = width - 4;

  std::vector<double> p1, p2, pboth;
  std::uint64_t pair_table[2][2] = {{0, 0}, {0, 0}};
  for (int r = 0; r < replicas; ++r) {
    const std::uint64_t rep_seed =
        mix::key3(seed, kSaltInvariance, static_cast<std::uint64_t>(r));
    const lattice::ArrowConfig config =
        lattice::sample_config(win, beta, rep_seed);
    particles::ParticleSet initial;
    initial.time = 0;
    RngStream init_rng(mix::key2(rep_seed, kSaltInitialSlice));
    for (std::int64_t x = 0; x <= width; x += 2)
      if (init_rng.uniform() <= rho) initial.occupied.push_back(x);
    const particles::Trajectory traj =
        particles::evolve(config, initial, 2,
                          particles::BoundaryPolicy::kAbsorb);

    // Interior per-site tallies; sublattice parity follows the row.
    std::int64_t sites = 0, occ1 = 0, occ2 = 0, both = 0;
    const auto& row1 = traj.slices[1].occupied;
    const auto& row2 = traj.slices[2].occupied;
    for (std::int64_t x = lo + ((lo + 1) % 2); x <= hi; x += 2) {
      ++sites;
      const bool o1 =
          std::binary_search(row1.begin(), row1.end(), x);
      if (o1) {
        ++occ1;
        if (config.state_at(x, 1) == lattice::SiteState::kBoth) ++both;
      }
    }
    std::int64_t sites2 = 0;
    for (std::int64_t x = lo + (lo % 2); x <= hi; x += 2) {
      ++sites2;
      if (std::binary_search(row2.begin(), row2.end(), x)) ++occ2;
    }
    p1.push_back(static_cast<double>(occ1) / static_cast<double>(sites));
    p2.push_back(static_cast<double>(occ2) / static_cast<double>(sites2));
    pboth.push_back(static_cast<double>(both) / static_cast<double>(sites));

    // Disjoint site pairs at distance 2 on row 1, one pair per block of 8.
    for (std::int64_t x = lo + ((lo + 1) % 2); x + 2 <= hi; x += 8) {
      const bool a = std::binary_search(row1.begin(), row1.end(), x);
      const bool b = std::binary_search(row1.begin(), row1.end(), x + 2);
      ++pair_table[a ? 1 : 0][b ? 1 : 0];
    }
  }

  const stats::MeanStderr m1 = stats::mean_stderr(p1);
  const stats::MeanStderr m2 = stats::mean_stderr(p2);
  const stats::MeanStderr mb = stats::mean_stderr(pboth);
  double worst = std::abs(m1.mean - rho) - k * m1.stderr_;
  worst = std::max(worst, std::abs(m2.mean - rho) - k * m2.stderr_);
  worst = std::max(worst,
                   std::abs(mb.mean - rho * beta) - k * mb.stderr_);
  Params params;
  params.add("beta", beta)
      .add("width", width)
      .add("rho", rho)
      .add("p1", m1.mean)
      .add("p2", m2.mean)
      .add("p_both", mb.mean);
  const std::uint64_t row0 = pair_table[0][0] + pair_table[0][1];
  const std::uint64_t row1c = pair_table[1][0] + pair_table[1][1];
  const std::uint64_t col0 = pair_table[0][0] + pair_table[1][0];
  const std::uint64_t col1 = pair_table[0][1] + pair_table[1][1];
  if (row0 > 0 && row1c > 0 && col0 > 0 && col1 > 0) {
    const stats::ChiSquare2x2 chi = stats::chi_square_independence(pair_table);
    worst = std::max(worst, 1e-3 - chi.p_value);
    params.add("chi_p", chi.p_value);
  } else {
    params.add("chi_p", std::string("degenerate"));
  }

  ExperimentReport rep;
  rep.name = "invariance";
  rep.estimate = worst;
  rep.target = 0.0;
  rep.bound_target = true;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.k = k;
  rep.parameters = params.str();
  finalize(rep, timer);
  return rep;
}

ExperimentReport backbone_experiment(double beta, std::int64_t depth,
                                     std::int64_t width, std::uint64_t seed,
                                     double k) {
  Timer timer;
  if (!(beta > 0.0) || beta > 0.05)
    throw std::invalid_argument("scaling regime needs beta in (0, 0.05]");
  if (depth * beta < 20.0)
    throw std::invalid_argument("backbone: depth below 20 / beta");
  const double eps = beta;
  const double rho = particles::bernoulli_intensity(beta);
  const lattice::Window win{0, width, 0, depth, 0};
  win.validate();
  const lattice::ArrowConfig config =
      lattice::sample_config(win, beta, mix::key2(seed, kSaltBackbone));
  const particles::ParticleSet slice = particles::backbone_slice(config, depth);

  const std::int64_t lo = depth + 4;
  const std::int64_t hi = width - depth - 4;
  if (hi - lo < 64 / beta)
    throw std::invalid_argument("backbone: window interior too small");

  // Per-site intensity with a blocked standard error (sites are locally
  // correlated), blocks of one physical unit for the dispersion index.
  const std::int64_t block = std::max<std::int64_t>(
      2, 2 * std::llround(0.5 / eps));  // even span = 1 physical length
  std::vector<double> block_counts, block_rates;
  for (std::int64_t x = lo; x + block <= hi; x += block) {
    const double c = static_cast<double>(count_in(slice, x, x + block));
    block_counts.push_back(c);
    block_rates.push_back(c / (static_cast<double>(block) / 2.0));
  }
  const stats::MeanStderr mp = stats::mean_stderr(block_rates);
  const stats::Dispersion disp = stats::dispersion_index(block_counts);

  double worst = std::abs(mp.mean - rho) - k * mp.stderr_;
  const double lambda = mp.mean / (2.0 * eps);
  const double lambda_sigma = mp.stderr_ / (2.0 * eps);
  worst = std::max(worst, std::abs(lambda - 2.0) - k * lambda_sigma -
                              kBackboneBiasC * eps);
  worst = std::max(worst, std::abs(disp.index - 1.0) - k * disp.stderr_ -
                              kBackboneBiasC * eps);

  ExperimentReport rep;
  rep.name = "backbone";
  rep.estimate = worst;
  rep.target = 0.0;
  rep.bound_target = true;
  rep.replicas = static_cast<std::int64_t>(block_counts.size());
  rep.seed = seed;
  rep.k = k;
  rep.parameters = Params()
                       .add("beta", beta)
                       .add("depth", depth)
                       .add("width", width)
                       .add("intensity", mp.mean)
                       .add("rho", rho)
                       .add("rescaled", lambda)
                       .add("dispersion", disp.index)
                       .str();
  finalize(rep, timer);
  return rep;
}

ExperimentReport left_flux_experiment(double beta, double s_phys,
                                      double t_phys, int replicas,
                                      std::uint64_t seed, double k) {
  Timer timer;
  if (!(0.0 < s_phys && s_phys < t_phys))
    throw std::invalid_argument("left_flux: needs 0 < s_phys < t_phys");
  if (!(beta > 0.0) || beta > 0.05)
    throw std::invalid_argument("scaling regime needs beta in (0, 0.05]");
  if (replicas < 2)
    throw std::invalid_argument("left_flux: needs >= 2 replicas");
  const double eps = beta;
  const auto n = static_cast<std::int64_t>(std::llround(t_phys / (eps * eps)));
  const auto s_lo =
      static_cast<std::int64_t>(std::ceil(s_phys / (eps * eps)));
  const lattice::Window win{-(2 * n + 8), n + 8, 0, n, 2};
  win.validate();

  std::vector<double> event_counts;
  event_counts.reserve(static_cast<std::size_t>(replicas));
  for (int r = 0; r < replicas; ++r) {
    const lattice::ArrowConfig config = lattice::sample_config(
        win, beta, mix::key3(seed, kSaltFlux, static_cast<std::uint64_t>(r)));
    const lattice::LatticePath left_path =
        lattice::trace_extremal(config, 0, 0, lattice::Side::kLeft);

    // Watched set: positions reachable by walks that stayed strictly left of
    // the traced path so far. A touch at time t is one event; the touching
    // site leaves the watched set, so only fresh approaches count later.
    std::vector<std::int64_t> watched;
    for (std::int64_t x = win.x_min; x <= -2; x += 2) watched.push_back(x);
    std::vector<std::int64_t> next;
    std::int64_t events = 0;
    for (std::int64_t t = 1; t <= n && !watched.empty(); ++t) {
      const std::int64_t lpos = left_path.position_at(t);
      next.clear();
      bool touched = false;
      for (const std::int64_t x : watched) {
        for (const std::int64_t dir : {std::int64_t{-1}, std::int64_t{1}}) {
          if (!config.has_arrow(x, t - 1, static_cast<int>(dir))) continue;
          const std::int64_t y = x + dir;
          if (y >= lpos) {
            // Parity rules out jumping past without equality.
            touched = touched || y == lpos;
            continue;
          }
          if (y < win.x_min) continue;
          if (!next.empty() && next.back() == y) continue;
          next.push_back(y);
        }
      }
      if (touched && t >= s_lo) ++events;
      watched.swap(next);
    }
    event_counts.push_back(static_cast<double>(events));
  }
  const stats::MeanStderr ms = stats::mean_stderr(event_counts);

  ExperimentReport rep;
  rep.name = "left_flux";
  rep.estimate = ms.mean;
  rep.std_error = ms.stderr_;
  rep.target = closed_form::left_flux_bound(s_phys, t_phys);
  rep.bound_target = true;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.k = k;
  rep.parameters = Params()
                       .add("beta", beta)
                       .add("s", s_phys)
                       .add("t", t_phys)
                       .add("steps", n)
                       .str();
  finalize(rep, timer);
  return rep;
}

ExperimentReport hitting_bound_experiment(double eta, double t, double h,
                                          int replicas, std::uint64_t seed,
                                          double k) {
  Timer timer;
  if (!(eta >= 0.0)) throw std::invalid_argument("hitting: eta < 0");
  if (!(h > 0.0) || !(t > h)) throw std::invalid_argument("hitting: invalid h");
  if (replicas < 2)
    throw std::invalid_argument("hitting: needs >= 2 replicas");
  static constexpr double kCheckpoints[] = {0.15, 0.3, 0.45, 0.6, 0.75, 0.9};
  constexpr int kNumCheck = 6;

  std::vector<double> survived;
  std::vector<std::vector<double>> f_values(kNumCheck);
  survived.reserve(static_cast<std::size_t>(replicas));
  for (int r = 0; r < replicas; ++r) {
    const sticky::DrivingNoise noise = sticky::sample_noise(
        h, t, mix::key3(seed, kSaltHitting, static_cast<std::uint64_t>(r)));
    const sticky::LlrResult res = sticky::solve_llr(noise, eta, true);
    survived.push_back(res.survived ? 1.0 : 0.0);
    for (int c = 0; c < kNumCheck; ++c) {
      const auto idx = static_cast<std::size_t>(
          std::llround(kCheckpoints[c] * t / h));
      const double x = res.Rhat[idx] - res.Lhat[idx];
      const double y = res.Rhat[idx] + res.Lhat[idx] - 2.0 * res.L[idx];
      f_values[c].push_back(
          closed_form::supermartingale_F(t - res.times[idx], x, y));
    }
  }
  const stats::MeanStderr msurv = stats::mean_stderr(survived);
  const double psi2 = closed_form::big_psi(eta, t) *
                      closed_form::big_psi(eta, t);
  double worst = msurv.mean - psi2 - k * msurv.stderr_;
  Params params;
  params.add("eta", eta)
      .add("t", t)
      .add("h", h)
      .add("survival", msurv.mean)
      .add("bound", psi2);
  for (int c = 0; c + 1 < kNumCheck; ++c) {
    std::vector<double> diff(f_values[c].size());
    for (std::size_t i = 0; i < diff.size(); ++i)
      diff[i] = f_values[c + 1][i] - f_values[c][i];
    const stats::MeanStderr md = stats::mean_stderr(diff);
    worst = std::max(worst, md.mean - k * md.stderr_);
  }
  params.add("f_first", stats::mean_stderr(f_values[0]).mean)
      .add("f_last", stats::mean_stderr(f_values[kNumCheck - 1]).mean);

  ExperimentReport rep;
  rep.name = "hitting_bound";
  rep.estimate = worst;
  rep.target = 0.0;
  rep.bound_target = true;
  rep.replicas = replicas;
  rep.seed = seed;
  rep.k = k;
  rep.parameters = params.str();
  finalize(rep, timer);
  return rep;
}

std::vector<ExperimentReport> structural_suite(
    const std::vector<double>& beta_list, int replicas, std::uint64_t seed,
    double k) {
  std::vector<ExperimentReport> out;
  const lattice::Window win{-40, 40, 0, 16, 2};
  win.validate();
  for (const double beta : beta_list) {
    Timer timer;
    if (!(beta >= 0.0) || beta > 1.0)
      throw std::invalid_argument("structural: beta outside [0, 1]");
    std::int64_t violations = 0;
    std::int64_t hops_checked = 0;
    for (int r = 0; r < replicas; ++r) {
      const std::uint64_t cfg_seed = mix::key3(
          seed, beta_tagged(kSaltStructural, beta), static_cast<std::uint64_t>(r));
      const lattice::ArrowConfig config =
          lattice::sample_config(win, beta, cfg_seed);

      const lattice::NoncrossingReport nc = lattice::check_noncrossing(config);
      if (!nc.ok) ++violations;
      if (beta == 0.0 && nc.shared_cells != 0) ++violations;

      violations += lattice::wedge_entry_violations(config, 2).violations;

      // Extremal envelope: any arrow-following walk from the same start
      // stays between the two extremal paths.
      const lattice::LrPair pair = lattice::trace_lr_pair(config, 0, 0);
      if (!lattice::validate_path(config, pair.left) ||
          !lattice::validate_path(config, pair.right))
        ++violations;
      RngStream walk_rng(mix::key2(cfg_seed, kSaltEnvelope));
      std::int64_t x = 0;
      for (std::int64_t t = 0; t < 16; ++t) {
        const lattice::SiteState st = config.state_at(x, t);
        int dir;
        if (st == lattice::SiteState::kLeftOnly)
          dir = -1;
        else if (st == lattice::SiteState::kRightOnly)
          dir = 1;
        else
          dir = walk_rng.uniform() <= 0.5 ? -1 : 1;
        x += dir;
        if (x < pair.left.position_at(t + 1) ||
            x > pair.right.position_at(t + 1))
          ++violations;
      }

      // Hopping closure at the first order swap of two crossing extremal
      // paths, when the sample has one.
      const lattice::LatticePath a =
          lattice::trace_extremal(config, 0, 0, lattice::Side::kRight);
      const lattice::LatticePath b =
          lattice::trace_extremal(config, 4, 0, lattice::Side::kLeft);
      const std::vector<std::int64_t> crossings = lattice::crossing_times(a, b);
      if (!crossings.empty()) {
        ++hops_checked;
        const lattice::LatticePath hopped =
            lattice::hop_at_crossings({a, b}, {crossings.front()});
        if (!lattice::validate_path(config, hopped)) ++violations;
      }
    }

    ExperimentReport rep;
    rep.name = "structural";
    rep.estimate = static_cast<double>(violations);
    rep.target = 0.0;
    rep.bound_target = true;
    rep.replicas = replicas;
    rep.seed = seed;
    rep.k = k;
    rep.parameters = Params()
                         .add("beta", beta)
                         .add("hops_checked", hops_checked)
                         .str();
    finalize(rep, timer);
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace bcnet::experiments
