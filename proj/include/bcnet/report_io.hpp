#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bcnet/experiments.hpp"
#include "bcnet/lattice.hpp"

namespace bcnet::report_io {

// %.12g rendering used by every CSV writer; output is byte-stable across
// runs with equal inputs.
std::string format_number(double v);

std::string csv_quote(const std::string& field);

// Columns: name,param_json,estimate,stderr,target,verdict,seed,wall_time.
// wall_time is the only field that varies between identical runs, which is
// why it sits last: stability checks compare rows up to the final comma.
void write_reports_csv(const std::string& path,
                       const std::vector<experiments::ExperimentReport>& rs);

void write_summary_text(const std::string& path,
                        const std::vector<experiments::ExperimentReport>& rs);

// Columns: t,x,path_id; one block per path, in input order.
void write_trajectories_csv(const std::string& path,
                            const std::vector<lattice::LatticePath>& paths);

// Table with the given header; every row must match its width.
void write_curve_csv(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

struct SvgPolyline {
  std::vector<std::pair<double, double>> points;  // already projected
  bool dashed = false;
  std::string color = "#1f6f43";
  double width = 1.0;
};

// Minimal standalone SVG: fits the data into the viewport, flips the
// vertical axis so larger ordinates render upward.
void write_svg(const std::string& path,
               const std::vector<SvgPolyline>& lines, double pixel_width,
               double pixel_height);

}  // namespace bcnet::report_io
