// Command-line front door: sample lattice configurations, dump closed-form
// curves, and run the verification suites. Exit codes: 0 success, 1
// verification failure or runtime fault, 2 usage / config error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "bcnet/closed_form.hpp"
#include "bcnet/experiments.hpp"
#include "bcnet/lattice.hpp"
#include "bcnet/particles.hpp"
#include "bcnet/pathspace.hpp"
#include "bcnet/report_io.hpp"

namespace {

namespace fs = std::filesystem;
using bcnet::experiments::ExperimentReport;

struct RunConfig {
  std::string command;
  double beta = 0.3;
  double eps = -1.0;  // < 0 means "follow beta"
  std::int64_t height = 32;
  std::int64_t half_width = 0;  // 0 means "derived from height"
  std::uint64_t seed = 0;
  int replicas = 0;  // 0 means "budget default"
  double h = 1e-4;
  std::string out = "out";
  double k = 3.0;
  std::string budget = "quick";
  // simulate
  int pairs = 2;
  int particles = 8;
  bool svg = false;
  std::string projection = "linear";
  // curve
  std::string which;
  double tmin = 0.1;
  double tmax = 10.0;
  int steps = 100;
  // verify
  std::string suite;
  bool beta_given = false;
};

double epsilon_of(const RunConfig& cfg) {
  return cfg.eps < 0.0 ? cfg.beta : cfg.eps;
}

// Validated before any work starts so a bad --out fails fast with exit 2
// instead of mid-run with a half-written directory.
void ensure_writable(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".write_probe";
  std::FILE* f = std::fopen(probe.string().c_str(), "wb");
  if (f == nullptr) {
    throw std::invalid_argument("output directory not writable: " + dir);
  }
  std::fclose(f);
  fs::remove(probe, ec);
}

std::pair<double, double> project(const RunConfig& cfg, double x, double t) {
  if (cfg.projection == "theta") {
    return bcnet::pathspace::theta_map({x, t});
  }
  return {x, t};
}

void append_path(const RunConfig& cfg, const bcnet::lattice::LatticePath& path,
                 bool dashed, const std::string& color, double width,
                 std::vector<bcnet::report_io::SvgPolyline>& lines) {
  bcnet::report_io::SvgPolyline line;
  line.dashed = dashed;
  line.color = color;
  line.width = width;
  for (std::int64_t t = path.t_lo(); t <= path.t_hi(); ++t) {
    line.points.push_back(project(cfg, static_cast<double>(path.position_at(t)),
                                  static_cast<double>(t)));
  }
  lines.push_back(std::move(line));
}

int cmd_simulate(const RunConfig& cfg) {
  if (!(cfg.beta >= 0.0 && cfg.beta <= 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1]");
  }
  if (cfg.height < 1 || cfg.height > 4096) {
    throw std::invalid_argument("height must lie in [1, 4096]");
  }
  if (cfg.pairs < 1 || cfg.pairs > 64) {
    throw std::invalid_argument("pairs must lie in [1, 64]");
  }
  if (cfg.particles < 0 || cfg.particles > 4096) {
    throw std::invalid_argument("particles must lie in [0, 4096]");
  }
  ensure_writable(cfg.out);

  const std::int64_t half =
      cfg.half_width > 0 ? cfg.half_width
                         : 2 * cfg.height + 8 + 2 * (cfg.pairs + cfg.particles);
  const bcnet::lattice::Window window{-half, half, 0, cfg.height, 2};
  const auto config = bcnet::lattice::sample_config(window, cfg.beta, cfg.seed);

  std::vector<bcnet::lattice::LatticePath> paths;
  for (int p = 0; p < cfg.pairs; ++p) {
    const auto pair = bcnet::lattice::trace_lr_pair(config, 2 * p, 0);
    paths.push_back(pair.left);
    paths.push_back(pair.right);
  }

  // The particle web feeds the skeleton rendering; a strict boundary touch
  // means the window cannot hold the evolution and aborts the run.
  bcnet::particles::Trajectory web;
  if (cfg.particles > 0) {
    bcnet::particles::ParticleSet initial;
    initial.time = 0;
    for (int i = 0; i < cfg.particles; ++i) {
      initial.occupied.push_back(2 * (i - cfg.particles / 2));
    }
    web = bcnet::particles::evolve(config, initial, cfg.height);
  }

  bcnet::report_io::write_trajectories_csv(cfg.out + "/trajectories.csv",
                                           paths);

  if (cfg.svg) {
    std::vector<bcnet::report_io::SvgPolyline> lines;
    for (const auto& slab : web.half_steps) {
      for (const auto& edge : slab.edges) {
        bcnet::report_io::SvgPolyline seg;
        seg.color = "#b9c6bd";
        seg.width = 0.6;
        seg.points.push_back(project(cfg, static_cast<double>(edge.first),
                                     static_cast<double>(slab.time)));
        seg.points.push_back(project(cfg, static_cast<double>(edge.second),
                                     static_cast<double>(slab.time + 1)));
        lines.push_back(std::move(seg));
      }
    }
    for (const auto& path : paths) {
      append_path(cfg, path, false, "#1f6f43", 1.4, lines);
    }
    const auto dual = bcnet::lattice::dual_config(config);
    for (int j = 0; j < 2; ++j) {
      const std::int64_t x0 = 2 * j - 1;
      const auto side = j == 0 ? bcnet::lattice::Side::kLeft
                               : bcnet::lattice::Side::kRight;
      append_path(cfg,
                  bcnet::lattice::trace_dual_extremal(dual, x0, cfg.height,
                                                      side),
                  true, "#8a4f1f", 1.0, lines);
    }
    bcnet::report_io::write_svg(cfg.out + "/skeleton.svg", lines, 720, 480);
  }
  return 0;
}

int cmd_curve(const RunConfig& cfg) {
  if (!(cfg.tmin > 0.0) || !(cfg.tmax > cfg.tmin)) {
    throw std::invalid_argument("need 0 < tmin < tmax");
  }
  if (cfg.steps < 2 || cfg.steps > 100000) {
    throw std::invalid_argument("steps must lie in [2, 100000]");
  }
  const double eps = epsilon_of(cfg);
  if (cfg.which == "Psi" && !(eps >= 0.0)) {
    throw std::invalid_argument("eps must be >= 0");
  }
  ensure_writable(cfg.out);

  const double dt = (cfg.tmax - cfg.tmin) / (cfg.steps - 1);
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(cfg.steps));
  if (cfg.which == "psi") {
    header = {"t", "value"};
    for (int i = 0; i < cfg.steps; ++i) {
      const double t = cfg.tmin + dt * i;
      rows.push_back({t, bcnet::closed_form::small_psi(t)});
    }
  } else if (cfg.which == "Psi") {
    header = {"eps", "t", "value"};
    for (int i = 0; i < cfg.steps; ++i) {
      const double t = cfg.tmin + dt * i;
      rows.push_back({eps, t, bcnet::closed_form::big_psi(eps, t)});
    }
  } else {
    // Cumulative bound on left-flux crossings of the interval [tmin, t].
    header = {"t", "value"};
    rows.push_back({cfg.tmin, 0.0});
    for (int i = 1; i < cfg.steps; ++i) {
      const double t = cfg.tmin + dt * i;
      rows.push_back({t, bcnet::closed_form::left_flux_bound(cfg.tmin, t)});
    }
  }

  const std::string base = cfg.out + "/" + cfg.which;
  bcnet::report_io::write_curve_csv(base + ".csv", header, rows);

  bcnet::report_io::SvgPolyline line;
  line.width = 1.5;
  const std::size_t t_col = rows.front().size() - 2;
  for (const auto& row : rows) {
    line.points.emplace_back(row[t_col], row[t_col + 1]);
  }
  bcnet::report_io::write_svg(base + ".svg", {line}, 640, 400);
  return 0;
}

struct Budget {
  int density = 0;
  int avoid = 0;
  int pair = 0;
  int sticky = 0;
  int invariance = 0;
  int flux = 0;
  int hitting = 0;
  int structural = 0;
  std::int64_t invariance_width = 0;
  std::int64_t backbone_width = 0;
  std::int64_t backbone_depth = 0;
};

Budget budget_of(const RunConfig& cfg) {
  if (cfg.budget == "full") {
    return {200, 400, 10000, 10000, 40, 200, 4000, 125, 100000, 200000, 5000};
  }
  return {60, 120, 2000, 2000, 10, 60, 1000, 30, 20000, 60000, 5000};
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.replicas < 0) {
    throw std::invalid_argument("replicas must be >= 0");
  }
  if (!(cfg.h > 0.0 && cfg.h <= 0.25)) {
    throw std::invalid_argument("h must lie in (0, 0.25]");
  }
  if (!(cfg.k > 0.0)) {
    throw std::invalid_argument("k must be > 0");
  }
  if (cfg.beta_given && !(cfg.beta >= 0.0 && cfg.beta <= 1.0)) {
    throw std::invalid_argument("beta must lie in [0, 1]");
  }
  ensure_writable(cfg.out);

  const Budget budget = budget_of(cfg);
  const auto reps = [&cfg](int suite_default) {
    return cfg.replicas > 0 ? cfg.replicas : suite_default;
  };
  const auto want = [&cfg](const char* name) {
    return cfg.suite == "all" || cfg.suite == name;
  };
  const auto subseed = [&cfg](std::uint64_t i) {
    return cfg.seed + 1000003ULL * i;
  };
  const double scaling_beta = cfg.beta_given ? cfg.beta : 0.01;
  if (cfg.beta_given && cfg.beta > 0.05 &&
      (want("density") || want("avoidance"))) {
    std::fprintf(stderr,
                 "warning: beta %g lies outside the scaling regime; "
                 "running with widened allowance\n",
                 cfg.beta);
  }

  std::vector<ExperimentReport> reports;
  if (want("density")) {
    const double times[] = {0.5, 1.0, 2.0};
    for (std::uint64_t i = 0; i < 3; ++i) {
      reports.push_back(bcnet::experiments::density_experiment(
          scaling_beta, times[i], 4.0, reps(budget.density), subseed(i),
          cfg.k));
    }
  }
  if (want("avoidance")) {
    const std::pair<double, double> cases[] = {{0.5, 1.0}, {1.0, 1.0},
                                               {1.0, 2.0}};
    for (std::uint64_t i = 0; i < 3; ++i) {
      reports.push_back(bcnet::experiments::avoidance_experiment(
          scaling_beta, cases[i].second, cases[i].first, reps(budget.avoid),
          subseed(10 + i), cfg.k));
    }
  }
  if (want("sticky")) {
    reports.push_back(bcnet::experiments::sticky_time_experiment(
        cfg.h, 5.0, reps(budget.sticky), 0.0, 0.0, subseed(20), cfg.k));
    reports.push_back(bcnet::experiments::sticky_time_experiment(
        cfg.h, 5.0, reps(budget.sticky), 0.0, 1.0, subseed(21), cfg.k));
  }
  if (want("pair")) {
    reports.push_back(bcnet::experiments::pair_scaling_experiment(
        scaling_beta, 1.0, reps(budget.pair), subseed(30), cfg.k));
  }
  if (want("invariance")) {
    std::vector<double> betas = {0.1, 0.3};
    if (cfg.beta_given) betas = {cfg.beta};
    for (std::uint64_t i = 0; i < betas.size(); ++i) {
      reports.push_back(bcnet::experiments::invariance_experiment(
          betas[i], budget.invariance_width, reps(budget.invariance),
          subseed(40 + i), cfg.k));
    }
  }
  if (want("backbone")) {
    // The dispersion statistic needs the slice relaxed; that takes physical
    // time of order one, so the burn-in scales like 1 / beta^2.
    const double beta = cfg.beta_given ? cfg.beta : 0.02;
    const auto depth = std::max<std::int64_t>(
        budget.backbone_depth,
        static_cast<std::int64_t>(std::llround(2.0 / (beta * beta))));
    reports.push_back(bcnet::experiments::backbone_experiment(
        beta, depth, budget.backbone_width, subseed(50), cfg.k));
  }
  if (want("flux")) {
    reports.push_back(bcnet::experiments::left_flux_experiment(
        scaling_beta, 0.5, 1.5, reps(budget.flux), subseed(60), cfg.k));
  }
  if (want("hitting")) {
    const std::pair<double, double> cases[] = {{0.5, 1.0}, {1.0, 1.0}};
    for (std::uint64_t i = 0; i < 2; ++i) {
      reports.push_back(bcnet::experiments::hitting_bound_experiment(
          cases[i].first, cases[i].second, cfg.h * cases[i].second,
          reps(budget.hitting), subseed(70 + i), cfg.k));
    }
  }
  if (want("structural")) {
    std::vector<double> betas = {0.0, 0.1, 0.5, 1.0};
    if (cfg.beta_given) betas = {cfg.beta};
    auto rs = bcnet::experiments::structural_suite(
        betas, reps(budget.structural), subseed(80), cfg.k);
    reports.insert(reports.end(), rs.begin(), rs.end());
  }

  bcnet::report_io::write_reports_csv(cfg.out + "/reports.csv", reports);
  bcnet::report_io::write_summary_text(cfg.out + "/summary.txt", reports);

  int passed = 0;
  for (const auto& r : reports) {
    if (r.pass) ++passed;
    std::printf("%s  %-28s estimate=%-14.6g stderr=%-10.4g target=%.6g\n",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.estimate,
                r.std_error, r.target);
  }
  std::printf("passed %d / %zu; reports under %s\n", passed, reports.size(),
              cfg.out.c_str());
  return passed == static_cast<int>(reports.size()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"branching-coalescing lattice walk laboratory"};
  // --h is taken by the sde grid step, so help keeps only its long form.
  app.set_help_flag("--help", "print this help and exit");
  app.set_config("--config", "",
                 "plain key=value file; command-line flags take precedence");
  app.require_subcommand(1);

  auto* sim = app.add_subcommand(
      "simulate", "sample one arrow field and trace paths through it");
  sim->set_help_flag("--help", "print this help and exit");
  sim->add_option("--beta", cfg.beta, "branching probability, in [0, 1]");
  sim->add_option("--seed", cfg.seed, "rng seed");
  sim->add_option("--height", cfg.height, "window height in lattice steps");
  sim->add_option("--width", cfg.half_width,
                  "window half-width (0 derives it from height)");
  sim->add_option("--pairs", cfg.pairs, "extremal pairs to trace");
  sim->add_option("--particles", cfg.particles,
                  "initial particles for the web rendering");
  sim->add_flag("--svg", cfg.svg, "also write skeleton.svg");
  sim->add_option("--projection", cfg.projection, "linear|theta")
      ->check(CLI::IsMember({"linear", "theta"}));
  sim->add_option("--out", cfg.out, "output directory");

  auto* curve =
      app.add_subcommand("curve", "tabulate a closed-form curve as CSV + SVG");
  curve->set_help_flag("--help", "print this help and exit");
  curve->add_option("which", cfg.which, "psi|Psi|flux")
      ->required()
      ->check(CLI::IsMember({"psi", "Psi", "flux"}));
  curve->add_option("--tmin", cfg.tmin, "grid start, > 0");
  curve->add_option("--tmax", cfg.tmax, "grid end, > tmin");
  curve->add_option("--steps", cfg.steps, "row count, >= 2");
  curve->add_option("--eps", cfg.eps, "scale parameter for Psi");
  curve->add_option("--out", cfg.out, "output directory");

  auto* verify = app.add_subcommand(
      "verify", "run verification suites, write reports.csv and summary.txt");
  verify->set_help_flag("--help", "print this help and exit");
  verify
      ->add_option("suite", cfg.suite,
                   "all|structural|density|avoidance|sticky|pair|invariance|"
                   "backbone|flux|hitting")
      ->required()
      ->check(CLI::IsMember({"all", "structural", "density", "avoidance",
                             "sticky", "pair", "invariance", "backbone",
                             "flux", "hitting"}));
  auto* beta_opt = verify->add_option(
      "--beta", cfg.beta, "override the suite's default branching parameter");
  verify->add_option("--seed", cfg.seed, "rng seed");
  verify->add_option("--replicas", cfg.replicas,
                     "override the budget's replica count (0 keeps it)");
  verify->add_option("--h", cfg.h, "sde grid step");
  verify->add_option("--k", cfg.k, "verdict multiplier");
  verify->add_option("--budget", cfg.budget, "quick|full")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--out", cfg.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    app.exit(e);
    return 2;
  }
  cfg.beta_given = beta_opt->count() > 0;

  try {
    if (sim->parsed()) {
      cfg.command = "simulate";
      return cmd_simulate(cfg);
    }
    if (curve->parsed()) {
      cfg.command = "curve";
      return cmd_curve(cfg);
    }
    cfg.command = "verify";
    return cmd_verify(cfg);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
