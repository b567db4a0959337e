#include "bcnet/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bcnet::report_io {

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // fixed newlines everywhere
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void write_reports_csv(const std::string& path,
                       const std::vector<experiments::ExperimentReport>& rs) {
  std::ofstream out = open_or_throw(path);
  out << "name,param_json,estimate,stderr,target,verdict,seed,wall_time\n";
  for (const auto& r : rs) {
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", r.wall_time);
    out << csv_quote(r.name) << ',' << csv_quote(r.parameters) << ','
        << format_number(r.estimate) << ',' << format_number(r.std_error)
        << ',' << format_number(r.target) << ','
        << (r.pass ? "pass" : "fail") << ',' << r.seed << ',' << wall
        << '\n';
  }
}

void write_summary_text(const std::string& path,
                        const std::vector<experiments::ExperimentReport>& rs) {
  std::ofstream out = open_or_throw(path);
  std::size_t passed = 0;
  for (const auto& r : rs)
    if (r.pass) ++passed;
  out << "reports: " << rs.size() << "  passed: " << passed
      << "  failed: " << rs.size() - passed << "\n\n";
  for (const auto& r : rs) {
    out << (r.pass ? "PASS " : "FAIL ") << r.name << "\n  estimate "
        << format_number(r.estimate);
    if (r.std_error > 0.0) out << " +- " << format_number(r.std_error);
    out << (r.bound_target ? "  bound " : "  target ")
        << format_number(r.target);
    if (r.bias_allowance > 0.0)
      out << "  allowance " << format_number(r.bias_allowance);
    out << "  replicas " << r.replicas << "\n  " << r.parameters << "\n";
  }
}

void write_trajectories_csv(const std::string& path,
                            const std::vector<lattice::LatticePath>& paths) {
  std::ofstream out = open_or_throw(path);
  out << "t,x,path_id\n";
  for (std::size_t id = 0; id < paths.size(); ++id) {
    const lattice::LatticePath& p = paths[id];
    for (std::int64_t t = p.t_lo(); t <= p.t_hi(); ++t)
      out << t << ',' << p.position_at(t) << ',' << id << '\n';
  }
}

void write_curve_csv(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_or_throw(path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << csv_quote(header[i]);
  out << '\n';
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("curve row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_svg(const std::string& path,
               const std::vector<SvgPolyline>& lines, double pixel_width,
               double pixel_height) {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  bool first = true;
  for (const auto& l : lines)
    for (const auto& [x, y] : l.points) {
      if (first) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        first = false;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  const double pad = 8.0;
  const double sx =
      (pixel_width - 2 * pad) / std::max(1e-12, x_hi - x_lo);
  const double sy =
      (pixel_height - 2 * pad) / std::max(1e-12, y_hi - y_lo);

  std::ofstream out = open_or_throw(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
      << format_number(pixel_width) << "\" height=\""
      << format_number(pixel_height) << "\" viewBox=\"0 0 "
      << format_number(pixel_width) << ' ' << format_number(pixel_height)
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& l : lines) {
    if (l.points.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << l.color
        << "\" stroke-width=\"" << format_number(l.width) << "\"";
    if (l.dashed) out << " stroke-dasharray=\"4 3\"";
    out << " points=\"";
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      const double px = pad + (l.points[i].first - x_lo) * sx;
      const double py = pixel_height - pad - (l.points[i].second - y_lo) * sy;
      out << (i ? " " : "") << format_number(px) << ',' << format_number(py);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace bcnet::report_io
