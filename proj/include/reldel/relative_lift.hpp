#pragma once

#include <algorithm>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "reldel/complex.hpp"
#include "reldel/delaunay.hpp"
#include "reldel/error.hpp"
#include "reldel/geometry.hpp"

namespace reldel {

// Highest data dimension: the lift adds one coordinate.
inline constexpr int max_data_dimension = 3;

enum class layer : std::uint8_t { plus, minus };

struct LiftedConfiguration {
  PointCloud x1;  // the subset A, lifted to +s
  PointCloud x2;  // X minus A, lifted to -s
  double s = 0;
  PointCloud z;
  std::vector<layer> labels;
  std::vector<std::pair<layer, vertex_index>> back_map;  // z vertex -> (cloud, index)

  Point base_point(vertex_index v) const {
    const auto [which, i] = back_map[v];
    return which == layer::plus ? x1[i] : x2[i];
  }
};

namespace detail {

inline void check_pair(const PointCloud& x1, const PointCloud& x2) {
  if (x1.dimension() != x2.dimension())
    throw input_error("point clouds have dimensions " + std::to_string(x1.dimension()) + " and " +
                      std::to_string(x2.dimension()));
}

// Largest alpha value of del(X): the circumradius of its worst top simplex.
inline double max_alpha_value(const PointCloud& x) {
  if (x.size() < 2) return 0;
  const auto t = delaunay(x);
  double best = 0;
  std::vector<Point> pts;
  for (const auto& s : t.top_simplices) {
    pts.clear();
    for (auto v : s) pts.push_back(x[v]);
    best = std::max(best, circumradius(pts));
  }
  return best;
}

}  // namespace detail

// A lift height above the largest alpha value of either cloud, by `factor`.
// The alpha value of a simplex bounds its MEB radius, so this also clears
// every Delaunay-Cech value.
inline double choose_s(const PointCloud& x1, const PointCloud& x2, double factor = 2.0) {
  detail::check_pair(x1, x2);
  if (!(factor > 1) || !std::isfinite(factor)) throw input_error("s factor must be a finite number above 1");
  double top = std::max(detail::max_alpha_value(x1), detail::max_alpha_value(x2));
  if (top == 0) top = 1;
  return factor * top;
}

inline LiftedConfiguration lift(const PointCloud& x1, const PointCloud& x2, double s) {
  detail::check_pair(x1, x2);
  if (!(s > 0) || !std::isfinite(s)) throw input_error("lift height must be positive and finite");
  if (x1.dimension() > max_data_dimension)
    throw input_error("data dimension " + std::to_string(x1.dimension()) + " exceeds cap " +
                      std::to_string(max_data_dimension));
  LiftedConfiguration cfg{x1, x2, s, PointCloud(x1.dimension() + 1), {}, {}};
  std::vector<Point> z;
  for (vertex_index i = 0; i < x1.size(); ++i) {
    z.push_back(x1[i].lifted(s));
    cfg.labels.push_back(layer::plus);
    cfg.back_map.emplace_back(layer::plus, i);
  }
  for (vertex_index i = 0; i < x2.size(); ++i) {
    z.push_back(x2[i].lifted(-s));
    cfg.labels.push_back(layer::minus);
    cfg.back_map.emplace_back(layer::minus, i);
  }
  cfg.z = PointCloud(x1.dimension() + 1, std::move(z));
  return cfg;
}

struct RelativeDelCech {
  LiftedConfiguration config;
  Triangulation del_z;
  FilteredComplex complex;
  std::size_t added_cells = 0;  // cells of j1(del(X1)) missing from del(Z)
};

// The complex del(Z) together with j1(del(X1)), filtered by the Cech value of
// each cell's projection; all-plus cells form the subcomplex at value 0.
inline RelativeDelCech relative_delcech_at(const PointCloud& x1, const PointCloud& x2, double s,
                                           const DelaunayOptions& options = {}) {
  if (x1.size() + x2.size() == 0) throw input_error("relative_delcech: both clouds are empty");
  RelativeDelCech out{lift(x1, x2, s), {}, {}, 0};
  const auto& cfg = out.config;
  out.del_z = delaunay(cfg.z, options);

  std::unordered_set<Simplex, SimplexHash> present;
  std::vector<Simplex> simplices;
  for (const auto& level : out.del_z.all_simplices)
    for (const auto& s : level) {
      present.insert(s);
      simplices.push_back(s);
    }
  if (x1.size() > 0) {
    // x1 occupies the first vertex indices of z, so j1 is the identity on labels
    for (const auto& level : delaunay(x1, options).all_simplices)
      for (const auto& s : level)
        if (present.insert(s).second) {
          simplices.push_back(s);
          ++out.added_cells;
        }
  }

  std::vector<Cell> cells;
  cells.reserve(simplices.size());
  std::vector<Point> proj;
  for (auto& s : simplices) {
    const bool sub = std::all_of(s.begin(), s.end(), [&](vertex_index v) { return cfg.labels[v] == layer::plus; });
    double value = 0;
    if (!sub) {
      proj.clear();
      for (auto v : s) proj.push_back(cfg.base_point(v));
      value = cech_value(proj);
    }
    cells.push_back({std::move(s), value, sub});
  }
  out.complex = FilteredComplex::build(std::move(cells), cfg.z.size());
  return out;
}

inline FilteredComplex relative_delcech(const PointCloud& x1, const PointCloud& x2, double factor = 2.0,
                                        const DelaunayOptions& options = {}) {
  return relative_delcech_at(x1, x2, choose_s(x1, x2, factor), options).complex;
}

struct EmbeddingReport {
  bool x1_embedded = true;        // j1(del(X1)) is a subcomplex of del(Z)
  bool x2_embedded = true;        // j2(del(X2)) likewise
  bool subcomplex_matches = true;  // all-plus cells of del(Z) are exactly j1(del(X1))
  std::vector<std::string> problems;

  bool ok() const { return x1_embedded && x2_embedded && subcomplex_matches; }
};

inline EmbeddingReport verify_embedding(const LiftedConfiguration& cfg, const Triangulation& t) {
  if (t.cloud.size() != cfg.z.size()) throw precondition_error("verify_embedding: triangulation is not of z");
  EmbeddingReport r;
  std::unordered_set<Simplex, SimplexHash> in_z;
  for (const auto& level : t.all_simplices) in_z.insert(level.begin(), level.end());

  auto lifted_faces = [](const PointCloud& x, vertex_index offset) {
    std::vector<Simplex> out;
    if (x.size() == 0) return out;
    for (const auto& level : delaunay(x).all_simplices)
      for (const auto& s : level) {
        std::vector<vertex_index> vs(s.begin(), s.end());
        for (auto& v : vs) v += offset;
        out.emplace_back(std::move(vs));
      }
    return out;
  };
  const auto del1 = lifted_faces(cfg.x1, 0);
  const auto del2 = lifted_faces(cfg.x2, static_cast<vertex_index>(cfg.x1.size()));
  for (const auto& s : del1)
    if (!in_z.count(s)) {
      r.x1_embedded = false;
      r.problems.push_back("del(X1) simplex " + FilteredComplex::describe(s) + " is not in del(Z)");
    }
  for (const auto& s : del2)
    if (!in_z.count(s)) {
      r.x2_embedded = false;
      r.problems.push_back("del(X2) simplex " + FilteredComplex::describe(s) + " is not in del(Z)");
    }
  const std::unordered_set<Simplex, SimplexHash> j1(del1.begin(), del1.end());
  for (const auto& s : in_z) {
    const bool plus = std::all_of(s.begin(), s.end(), [&](vertex_index v) { return cfg.labels[v] == layer::plus; });
    if (plus && !j1.count(s)) {
      r.subcomplex_matches = false;
      r.problems.push_back("all-plus cell " + FilteredComplex::describe(s) + " is not in del(X1)");
    }
  }
  for (const auto& s : del1)
    if (!in_z.count(s)) r.subcomplex_matches = false;
  if (!r.ok()) r.problems.push_back("lift height too small or input degenerate");
  return r;
}

}  // namespace reldel
