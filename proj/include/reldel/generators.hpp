#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "reldel/error.hpp"
#include "reldel/geometry.hpp"

namespace reldel {

enum class generator { uniform_box, annulus, sphere };

inline generator parse_generator(const std::string& name) {
  if (name == "uniform-box") return generator::uniform_box;
  if (name == "annulus") return generator::annulus;
  if (name == "sphere") return generator::sphere;
  throw input_error("unknown generator '" + name + "' (expected uniform-box, annulus or sphere)");
}

// n distinct points: uniform in [0,1]^d, uniform in the shell 1/2 <= |x| <= 1,
// or uniform on the unit sphere.
inline PointCloud generate(generator g, int d, std::size_t n, std::uint64_t seed) {
  if (d < 1 || d > max_dimension) throw input_error("generator dimension out of range");
  if (g == generator::sphere && d == 1 && n > 2) throw input_error("the 0-sphere has only two points");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), sym(-1.0, 1.0);
  std::normal_distribution<double> normal;
  std::set<Point> seen;
  std::vector<Point> pts;
  std::vector<double> c(static_cast<std::size_t>(d));
  while (pts.size() < n) {
    double r2 = 0;
    switch (g) {
      case generator::uniform_box:
        for (auto& x : c) x = unit(rng);
        break;
      case generator::annulus:
        do {
          r2 = 0;
          for (auto& x : c) {
            x = sym(rng);
            r2 += x * x;
          }
        } while (r2 > 1 || r2 < 0.25);
        break;
      case generator::sphere:
        do {
          r2 = 0;
          for (auto& x : c) {
            x = normal(rng);
            r2 += x * x;
          }
        } while (r2 < 1e-12);
        for (auto& x : c) x /= std::sqrt(r2);
        break;
    }
    Point p{std::span<const double>(c)};
    if (seen.insert(p).second) pts.push_back(p);
  }
  return PointCloud(d, std::move(pts));
}

}  // namespace reldel
