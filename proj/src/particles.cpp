#include "bcnet/particles.hpp"

#include <algorithm>
#include <stdexcept>

namespace bcnet::particles {

namespace {

void push_unique(std::vector<std::int64_t>& xs, std::int64_t x) {
  if (xs.empty() || xs.back() != x) xs.push_back(x);
}

std::int64_t even_sites_in_row(const lattice::Window& w, std::int64_t t) {
  const std::int64_t x0 = w.x_min + (lattice::even_site(w.x_min, t) ? 0 : 1);
  return x0 > w.x_max ? 0 : (w.x_max - x0) / 2 + 1;
}

}  // namespace

ParticleSet HalfStepEdges::lower_slice() const {
  ParticleSet s;
  s.time = time;
  for (const auto& e : edges) push_unique(s.occupied, e.first);
  return s;
}

ParticleSet HalfStepEdges::upper_slice() const {
  ParticleSet s;
  s.time = time + 1;
  std::vector<std::int64_t> ups;
  ups.reserve(edges.size());
  for (const auto& e : edges) ups.push_back(e.second);
  std::sort(ups.begin(), ups.end());
  for (std::int64_t x : ups) push_unique(s.occupied, x);
  return s;
}

Evolver::Evolver(const lattice::ArrowConfig& config, ParticleSet initial,
                 BoundaryPolicy policy)
    : config_(&config), current_(std::move(initial)), policy_(policy) {
  const lattice::Window& w = config.window();
  if (current_.time < w.t_min || current_.time > w.t_max)
    throw std::invalid_argument("evolve: initial slice outside window");
  for (std::size_t i = 0; i < current_.occupied.size(); ++i) {
    const std::int64_t x = current_.occupied[i];
    if (!lattice::even_site(x, current_.time) || x < w.x_min || x > w.x_max)
      throw std::invalid_argument("evolve: particle off the slice sublattice");
    if (i > 0 && current_.occupied[i - 1] >= x)
      throw std::invalid_argument("evolve: particles not sorted unique");
  }
}

void Evolver::step() {
  const lattice::Window& w = config_->window();
  const std::int64_t t = current_.time;
  if (t + 1 > w.t_max) throw std::invalid_argument("evolve: past window top");
  edges_.time = t;
  edges_.edges.clear();
  std::vector<std::int64_t> next;
  next.reserve(current_.occupied.size() + 8);
  for (const std::int64_t x : current_.occupied) {
    const lattice::SiteState s = config_->state_at(x, t);
    // Left target first, then right: emitted positions arrive in
    // non-decreasing order across consecutive sites, so one dedup pass
    // against the back keeps `next` sorted and unique.
    if (s != lattice::SiteState::kRightOnly) {
      if (x - 1 < w.x_min) {
        if (policy_ == BoundaryPolicy::kStrict)
          throw std::runtime_error("evolve: boundary touch");
      } else {
        push_unique(next, x - 1);
        edges_.edges.emplace_back(x, x - 1);
      }
    }
    if (s != lattice::SiteState::kLeftOnly) {
      if (x + 1 > w.x_max) {
        if (policy_ == BoundaryPolicy::kStrict)
          throw std::runtime_error("evolve: boundary touch");
      } else {
        push_unique(next, x + 1);
        edges_.edges.emplace_back(x, x + 1);
      }
    }
  }
  current_.occupied = std::move(next);
  current_.time = t + 1;
}

Trajectory evolve(const lattice::ArrowConfig& config, ParticleSet initial,
                  std::int64_t t_end, BoundaryPolicy policy) {
  if (t_end > config.window().t_max)
    throw std::invalid_argument("evolve: t_end beyond window");
  Evolver ev(config, std::move(initial), policy);
  Trajectory out;
  out.slices.push_back(ev.current());
  while (ev.current().time < t_end) {
    ev.step();
    out.half_steps.push_back(ev.last_edges());
    out.slices.push_back(ev.current());
  }
  return out;
}

double bernoulli_intensity(double beta) {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("bernoulli_intensity: beta outside [0, 1]");
  return 4.0 * beta / ((1.0 + beta) * (1.0 + beta));
}

HalfStepStats half_step_statistics(const lattice::ArrowConfig& config,
                                   const Trajectory& trajectory) {
  HalfStepStats st;
  std::int64_t n_left = 0, n_right = 0, n_both = 0;
  for (const HalfStepEdges& hs : trajectory.half_steps) {
    st.site_slots += even_sites_in_row(config.window(), hs.time);
    std::size_t i = 0;
    while (i < hs.edges.size()) {
      const std::int64_t site = hs.edges[i].first;
      bool left = false, right = false;
      for (; i < hs.edges.size() && hs.edges[i].first == site; ++i) {
        if (hs.edges[i].second < site) left = true;
        if (hs.edges[i].second > site) right = true;
      }
      if (left) ++n_left;
      if (right) ++n_right;
      if (left && right) ++n_both;
    }
  }
  if (st.site_slots > 0) {
    const double n = static_cast<double>(st.site_slots);
    st.p_left_edge = static_cast<double>(n_left) / n;
    st.p_right_edge = static_cast<double>(n_right) / n;
    st.p_both = static_cast<double>(n_both) / n;
  }
  return st;
}

ParticleSet full_slice(const lattice::Window& window, std::int64_t t) {
  ParticleSet s;
  s.time = t;
  const std::int64_t x0 =
      window.x_min + (lattice::even_site(window.x_min, t) ? 0 : 1);
  for (std::int64_t x = x0; x <= window.x_max; x += 2) s.occupied.push_back(x);
  return s;
}

ParticleSet backbone_slice(const lattice::ArrowConfig& config,
                           std::int64_t burn_in) {
  const lattice::Window& w = config.window();
  if (burn_in < 1 || w.t_min + burn_in > w.t_max)
    throw std::invalid_argument("backbone_slice: burn_in does not fit window");
  Evolver ev(config, full_slice(w, w.t_min), BoundaryPolicy::kAbsorb);
  for (std::int64_t k = 0; k < burn_in; ++k) ev.step();
  return ev.current();
}

}  // namespace bcnet::particles
