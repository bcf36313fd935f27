#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "reldel/error.hpp"
#include "reldel/geometry.hpp"

namespace reldel {

// Sorted, duplicate-free vertex set.
class Simplex {
 public:
  Simplex() = default;

  explicit Simplex(std::vector<vertex_index> vertices) : v_(std::move(vertices)) {
    std::sort(v_.begin(), v_.end());
    if (std::adjacent_find(v_.begin(), v_.end()) != v_.end())
      throw input_error("simplex has a repeated vertex");
  }

  Simplex(std::initializer_list<vertex_index> vertices) : Simplex(std::vector<vertex_index>(vertices)) {}

  int dimension() const { return static_cast<int>(v_.size()) - 1; }
  std::size_t size() const { return v_.size(); }
  const std::vector<vertex_index>& vertices() const { return v_; }
  vertex_index operator[](std::size_t i) const { return v_[i]; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  // Codimension-one faces; face i omits vertex i.
  std::vector<Simplex> boundary() const {
    std::vector<Simplex> out;
    if (v_.size() <= 1) return out;
    out.reserve(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) {
      Simplex f;
      f.v_.reserve(v_.size() - 1);
      for (std::size_t j = 0; j < v_.size(); ++j)
        if (j != i) f.v_.push_back(v_[j]);
      out.push_back(std::move(f));
    }
    return out;
  }

  bool contains(vertex_index x) const { return std::binary_search(v_.begin(), v_.end(), x); }

  friend bool operator==(const Simplex&, const Simplex&) = default;
  friend auto operator<=>(const Simplex& a, const Simplex& b) { return a.v_ <=> b.v_; }

 private:
  std::vector<vertex_index> v_;
};

struct SimplexHash {
  std::size_t operator()(const Simplex& s) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ s.size();
    for (auto v : s) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// All nonempty faces of the given simplices, grouped by dimension, each once,
// lexicographically sorted.
inline std::vector<std::vector<Simplex>> downward_closure(std::span<const Simplex> tops) {
  int top = -1;
  for (const auto& s : tops) top = std::max(top, s.dimension());
  std::vector<std::unordered_set<Simplex, SimplexHash>> seen(static_cast<std::size_t>(top + 1));
  for (const auto& s : tops) {
    const auto n = static_cast<std::uint32_t>(s.size());
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<vertex_index> sub;
      for (std::uint32_t i = 0; i < n; ++i)
        if (mask & (1u << i)) sub.push_back(s[i]);
      seen[sub.size() - 1].insert(Simplex(std::move(sub)));
    }
  }
  std::vector<std::vector<Simplex>> out(seen.size());
  for (std::size_t d = 0; d < seen.size(); ++d) {
    out[d].assign(seen[d].begin(), seen[d].end());
    std::sort(out[d].begin(), out[d].end());
  }
  return out;
}

struct Triangulation {
  PointCloud cloud;
  int top_dimension = -1;  // affine rank of the cloud
  std::vector<Simplex> top_simplices;
  std::vector<std::vector<Simplex>> all_simplices;  // by dimension

  std::size_t simplex_count() const {
    std::size_t n = 0;
    for (const auto& level : all_simplices) n += level.size();
    return n;
  }
};

struct DelaunayOptions {
  std::uint64_t seed = 0x5eedull;  // insertion order only; the output does not depend on it
  int dimension_cap = max_dimension - 1;
};

struct DelaunayStats {
  std::size_t cells_created = 0;
  std::size_t conflict_tests = 0;
  std::size_t relocation_scans = 0;  // pending points not found among new cells
};

namespace detail {

// Randomized incremental construction of the regular triangulation of the
// cloud for the lifted heights |p_i|^2 + eps_i. Geometrically this is the
// lower convex hull of the paraboloid lift, compactified by a vertex at
// vertical infinity: cells containing it stand for the hull facets of the
// cloud. Each pending point is kept in the conflict list of one cell it
// conflicts with; when that cell is destroyed the point moves to a new
// cell incident to the inserted vertex.
class IncrementalDelaunay {
 public:
  static constexpr std::int32_t infinite = -1;
  static constexpr int slots = max_dimension + 1;

  IncrementalDelaunay(const PointCloud& cloud, std::vector<vertex_index> initial, std::vector<int> axes)
      : cloud_(cloud), k_(static_cast<int>(axes.size())), axes_(std::move(axes)), initial_(std::move(initial)) {}

  DelaunayStats stats;

  std::vector<Simplex> run(std::uint64_t seed) {
    const std::size_t n = cloud_.size();
    located_.assign(n, -1);
    bootstrap();

    std::vector<vertex_index> order;
    std::vector<char> is_initial(n, 0);
    for (auto v : initial_) is_initial[v] = 1;
    for (vertex_index i = 0; i < n; ++i)
      if (!is_initial[i]) order.push_back(i);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::int32_t> first_cells(cells_.size());
    std::iota(first_cells.begin(), first_cells.end(), 0);
    for (auto p : order) place(p, first_cells);
    for (auto p : order) insert(p);

    std::vector<Simplex> tops;
    for (const auto& c : cells_) {
      if (!c.alive || c.is_infinite(k_)) continue;
      tops.emplace_back(std::vector<vertex_index>(c.v.begin(), c.v.begin() + k_ + 1));
    }
    std::sort(tops.begin(), tops.end());
    return tops;
  }

 private:
  struct Cell {
    std::array<std::int32_t, slots> v{};
    std::array<std::int32_t, slots> nb{};
    int inner = 0;  // infinite cells: sign of orientation(finite facet, interior point)
    bool alive = true;
    std::vector<vertex_index> pending;

    bool is_infinite(int k) const {
      for (int i = 0; i <= k; ++i)
        if (v[i] == infinite) return true;
      return false;
    }
  };

  std::vector<const Point*> finite_points(const Cell& c, std::vector<vertex_index>* ids = nullptr) const {
    std::vector<const Point*> pts;
    for (int i = 0; i <= k_; ++i) {
      if (c.v[i] == infinite) continue;
      pts.push_back(&cloud_[static_cast<std::size_t>(c.v[i])]);
      if (ids) ids->push_back(static_cast<vertex_index>(c.v[i]));
    }
    return pts;
  }

  int orient_with(const Cell& c, const Point& q) const {
    auto pts = finite_points(c);
    pts.push_back(&q);
    return orientation_in_axes(pts, axes_);
  }

  void set_inner(Cell& c) const {
    if (!c.is_infinite(k_)) return;
    for (auto r : initial_) {
      const int o = orient_with(c, cloud_[r]);
      if (o != 0) {
        c.inner = o;
        return;
      }
    }
    throw std::logic_error("delaunay: hull facet coplanar with the initial simplex");
  }

  bool conflicts(const Cell& c, vertex_index q) {
    ++stats.conflict_tests;
    std::vector<vertex_index> ids;
    const bool inf = c.is_infinite(k_);
    if (!inf) {
      for (int i = 0; i <= k_; ++i) ids.push_back(static_cast<vertex_index>(c.v[i]));
      return in_sphere_perturbed(cloud_, ids, q) > 0;
    }
    const int o = orient_with(c, cloud_[q]);
    if (o != 0) return o == -c.inner;
    // q on the hull facet's hyperplane: decided inside that hyperplane
    finite_points(c, &ids);
    return in_sphere_perturbed(cloud_, ids, q) > 0;
  }

  void bootstrap() {
    Cell base;
    for (int i = 0; i <= k_; ++i) base.v[i] = static_cast<std::int32_t>(initial_[i]);
    cells_.push_back(base);
    for (int i = 0; i <= k_; ++i) {
      Cell c;
      c.v = base.v;
      c.v[i] = infinite;
      cells_.push_back(c);
    }
    // cell 0 is finite, cell i+1 replaced vertex i by infinity
    for (int i = 0; i <= k_; ++i) {
      cells_[0].nb[i] = i + 1;
      Cell& c = cells_[static_cast<std::size_t>(i + 1)];
      for (int j = 0; j <= k_; ++j) c.nb[j] = (j == i) ? 0 : j + 1;
    }
    for (auto& c : cells_) set_inner(c);
    stats.cells_created = cells_.size();
  }

  void place(vertex_index p, std::span<const std::int32_t> candidates) {
    for (auto id : candidates) {
      if (!cells_[id].alive) continue;
      if (conflicts(cells_[id], p)) {
        located_[p] = id;
        cells_[id].pending.push_back(p);
        return;
      }
    }
    ++stats.relocation_scans;
    for (std::size_t id = 0; id < cells_.size(); ++id) {
      if (!cells_[id].alive) continue;
      if (conflicts(cells_[id], p)) {
        located_[p] = static_cast<std::int32_t>(id);
        cells_[id].pending.push_back(p);
        return;
      }
    }
    throw std::logic_error("delaunay: point " + std::to_string(p) + " conflicts with no cell");
  }

  using FacetKey = std::array<std::int32_t, slots>;
  struct FacetKeyHash {
    std::size_t operator()(const FacetKey& k) const noexcept {
      std::uint64_t h = 1469598103934665603ull;
      for (auto x : k) h = (h ^ static_cast<std::uint32_t>(x)) * 1099511628211ull;
      return static_cast<std::size_t>(h);
    }
  };

  FacetKey facet_key(const Cell& c, int omit) const {
    FacetKey key;
    key.fill(-2);
    int n = 0;
    for (int i = 0; i <= k_; ++i)
      if (i != omit) key[n++] = c.v[i];
    std::sort(key.begin(), key.begin() + n);
    return key;
  }

  void insert(vertex_index q) {
    const std::int32_t start = located_[q];
    ++epoch_;
    if (mark_.size() < cells_.size()) mark_.resize(cells_.size() * 2, {0, 0});

    struct Boundary {
      std::int32_t inside;
      int slot;
      std::int32_t outside;
    };
    std::vector<std::int32_t> cavity{start};
    std::vector<Boundary> boundary;
    mark_[start] = {epoch_, 1};
    for (std::size_t head = 0; head < cavity.size(); ++head) {
      const std::int32_t c = cavity[head];
      for (int i = 0; i <= k_; ++i) {
        const std::int32_t n = cells_[c].nb[i];
        auto& m = mark_[n];
        if (m.first != epoch_) {
          m = {epoch_, conflicts(cells_[n], q) ? 1 : 2};
          if (m.second == 1) cavity.push_back(n);
        }
        if (m.second == 2) boundary.push_back({c, i, n});
      }
    }

    std::vector<std::int32_t> created;
    created.reserve(boundary.size());
    std::unordered_map<FacetKey, std::pair<std::int32_t, int>, FacetKeyHash> open;
    for (const auto& b : boundary) {
      Cell nc;
      nc.v = cells_[b.inside].v;
      nc.v[b.slot] = static_cast<std::int32_t>(q);
      nc.nb.fill(-1);
      nc.nb[b.slot] = b.outside;
      const auto id = static_cast<std::int32_t>(cells_.size());
      Cell& out = cells_[b.outside];
      for (int j = 0; j <= k_; ++j)
        if (out.nb[j] == b.inside) out.nb[j] = id;
      set_inner(nc);
      cells_.push_back(std::move(nc));
      created.push_back(id);
      for (int t = 0; t <= k_; ++t) {
        if (t == b.slot) continue;
        FacetKey key = facet_key(cells_[id], t);
        auto it = open.find(key);
        if (it == open.end()) {
          open.emplace(key, std::make_pair(id, t));
        } else {
          cells_[id].nb[t] = it->second.first;
          cells_[it->second.first].nb[it->second.second] = id;
          open.erase(it);
        }
      }
    }
    if (!open.empty()) throw std::logic_error("delaunay: cavity boundary is not a closed sphere");
    stats.cells_created += created.size();
    if (mark_.size() < cells_.size()) mark_.resize(cells_.size() * 2, {0, 0});

    std::vector<vertex_index> orphans;
    for (auto c : cavity) {
      Cell& dead = cells_[c];
      dead.alive = false;
      for (auto p : dead.pending)
        if (p != q) orphans.push_back(p);
      std::vector<vertex_index>().swap(dead.pending);
    }
    for (auto p : orphans) place(p, created);
  }

  const PointCloud& cloud_;
  int k_;
  std::vector<int> axes_;
  std::vector<vertex_index> initial_;
  std::vector<Cell> cells_;
  std::vector<std::int32_t> located_;
  std::vector<std::pair<std::uint32_t, int>> mark_;
  std::uint32_t epoch_ = 0;
};

}  // namespace detail

// Delaunay triangulation of the cloud within its affine hull. Degenerate
// (cospherical) configurations are resolved by perturbing the paraboloid
// lift by vertex index, so the result is a proper triangulation determined
// by the point order alone.
inline Triangulation delaunay(const PointCloud& cloud, const DelaunayOptions& options = {},
                              DelaunayStats* stats = nullptr) {
  if (cloud.empty()) throw input_error("delaunay: empty point cloud");
  const int m = cloud.dimension();
  if (m > options.dimension_cap)
    throw input_error("delaunay: dimension " + std::to_string(m) + " exceeds cap " +
                      std::to_string(options.dimension_cap));

  // greedy maximal affinely independent subset, in index order
  std::vector<vertex_index> initial{0};
  for (vertex_index i = 1; i < cloud.size() && static_cast<int>(initial.size()) < m + 1; ++i) {
    std::vector<const Point*> pts;
    for (auto v : initial) pts.push_back(&cloud[v]);
    pts.push_back(&cloud[i]);
    if (affinely_independent(pts)) initial.push_back(i);
  }
  const int k = static_cast<int>(initial.size()) - 1;

  Triangulation t{cloud, k, {}, {}};
  if (k == 0) {
    t.top_simplices = {Simplex{0}};
  } else {
    // coordinate axes onto which the affine hull projects bijectively
    std::vector<const Point*> ref;
    for (auto v : initial) ref.push_back(&cloud[v]);
    std::vector<int> axes;
    std::vector<int> pick(static_cast<std::size_t>(k));
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      if (orientation_in_axes(ref, pick) != 0) {
        axes = pick;
        break;
      }
      int pos = k - 1;
      while (pos >= 0 && pick[pos] == m - k + pos) --pos;
      if (pos < 0) throw std::logic_error("delaunay: no projection preserves the affine hull");
      ++pick[pos];
      for (int i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
    }
    detail::IncrementalDelaunay engine(cloud, initial, axes);
    t.top_simplices = engine.run(options.seed);
    if (stats) *stats = engine.stats;
  }
  t.all_simplices = downward_closure(t.top_simplices);
  return t;
}

// Simplices of the given dimension, lexicographic.
inline const std::vector<Simplex>& faces(const Triangulation& t, int dim) {
  if (dim < 0 || dim > t.top_dimension)
    throw input_error("faces: dimension " + std::to_string(dim) + " outside [0, " +
                      std::to_string(t.top_dimension) + "]");
  return t.all_simplices[static_cast<std::size_t>(dim)];
}

}  // namespace reldel
