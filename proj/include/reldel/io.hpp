#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reldel/error.hpp"
#include "reldel/geometry.hpp"
#include "reldel/persistence.hpp"

namespace reldel::io {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  if (*b == '+') ++b;
  const auto [p, ec] = std::from_chars(b, s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace detail

// One point per line, comma-separated coordinates. A first line that does not
// parse as numbers is taken as a header.
inline PointCloud read_points(std::istream& in, const std::string& name = "input") {
  std::vector<Point> pts;
  int dim = -1;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto fields = detail::split_fields(text);
    std::vector<double> c;
    bool numeric = true;
    for (const auto& f : fields) {
      double v{};
      if (!detail::parse_double(f, v)) {
        numeric = false;
        break;
      }
      c.push_back(v);
    }
    const bool header = first && !numeric;
    first = false;
    if (header) continue;
    const auto where = name + ":" + std::to_string(lineno) + ": ";
    if (!numeric) throw input_error(where + "expected comma-separated numbers");
    if (dim < 0) dim = static_cast<int>(c.size());
    if (static_cast<int>(c.size()) != dim)
      throw input_error(where + "expected " + std::to_string(dim) + " coordinates, found " + std::to_string(c.size()));
    try {
      pts.emplace_back(std::span<const double>(c));
    } catch (const input_error& e) {
      throw input_error(where + e.what());
    }
  }
  if (pts.empty()) throw input_error(name + ": no points");
  return PointCloud(dim, std::move(pts));
}

// 0-based indices, one per line, each below n.
inline std::set<vertex_index> read_indices(std::istream& in, std::size_t n, const std::string& name = "subset") {
  std::set<vertex_index> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    const auto where = name + ":" + std::to_string(lineno) + ": ";
    unsigned long v{};
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || p != text.data() + text.size()) throw input_error(where + "expected a 0-based index");
    if (v >= n) throw input_error(where + "index " + text + " out of range for " + std::to_string(n) + " points");
    if (!out.insert(static_cast<vertex_index>(v)).second) throw input_error(where + "repeated index " + text);
  }
  return out;
}

inline PointCloud read_points_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  return read_points(in, path);
}

inline std::set<vertex_index> read_indices_file(const std::string& path, std::size_t n) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  return read_indices(in, n, path);
}

inline void write_points(std::ostream& out, const PointCloud& x) {
  for (const auto& p : x) {
    for (int j = 0; j < p.dimension(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", p[j]);
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

// Splits X into (A, X minus A), each keeping index order.
inline std::pair<PointCloud, PointCloud> split(const PointCloud& x, const std::set<vertex_index>& a) {
  std::vector<Point> in, out;
  for (vertex_index i = 0; i < x.size(); ++i) (a.count(i) ? in : out).push_back(x[i]);
  return {PointCloud(x.dimension(), std::move(in)), PointCloud(x.dimension(), std::move(out))};
}

// Persistence diagram: birth on x, death on y over [0, 1.05 * max finite
// death]; infinite bars sit on a rail along the top edge.
inline void write_svg(std::ostream& out, const Barcode& b) {
  constexpr double size = 400, margin = 40, plot = size - 2 * margin;
  double top = 0;
  for (const auto& dim : b.dims)
    for (const auto& bar : dim) top = std::max(top, bar.infinite() ? bar.birth : bar.death);
  const double range = top > 0 ? 1.05 * top : 1.0;
  auto sx = [&](double v) { return margin + plot * v / range; };
  auto sy = [&](double v) { return size - margin - plot * v / range; };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"400\" height=\"400\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n", margin, margin,
                plot, plot);
  out << buf;
  std::snprintf(buf, sizeof buf, "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"gray\"/>\n", sx(0), sy(0),
                sx(range), sy(range));
  out << buf;
  const double rail = margin - 12;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n", margin,
                rail, size - margin, rail);
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\">inf</text>\n", size - margin + 4, rail + 4);
  out << buf;
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\">%.4g</text>\n", size - margin - 20,
                size - margin + 16, range);
  out << buf;
  for (std::size_t k = 0; k < b.dims.size(); ++k) {
    const char* color = colors[k % 5];
    for (const auto& bar : b.dims[k]) {
      const double y = bar.infinite() ? rail : sy(bar.death);
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"%s\"><title>H%zu</title></circle>\n",
                    sx(bar.birth), y, color, k);
      out << buf;
    }
  }
  for (std::size_t k = 0; k < b.dims.size(); ++k) {
    std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" font-size=\"11\" fill=\"%s\">H%zu</text>\n", margin + 6,
                  margin + 14 + 13.0 * static_cast<double>(k), colors[k % 5], k);
    out << buf;
  }
  out << "</svg>\n";
}

}  // namespace reldel::io
