#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reldel/error.hpp"
#include "reldel/exact.hpp"

namespace reldel {

// Highest ambient dimension any construction may use: data in R^3, one
// extra coordinate for the two-layer lift, and the paraboloid coordinate
// implicit in the Delaunay predicates.
inline constexpr int max_dimension = 6;

using vertex_index = std::uint32_t;

class Point {
 public:
  Point() = default;

  explicit Point(std::span<const double> coords) : dim_(static_cast<int>(coords.size())) {
    if (coords.size() > static_cast<std::size_t>(max_dimension))
      throw input_error("point dimension " + std::to_string(coords.size()) + " exceeds cap " +
                        std::to_string(max_dimension));
    for (std::size_t i = 0; i < coords.size(); ++i) {
      if (!std::isfinite(coords[i])) throw input_error("point coordinate is not finite");
      c_[i] = coords[i];
    }
  }

  Point(std::initializer_list<double> coords)
      : Point(std::span<const double>(coords.begin(), coords.size())) {}

  int dimension() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coords() const { return {c_.data(), static_cast<std::size_t>(dim_)}; }

  // (x, last) in one dimension higher.
  Point lifted(double last) const {
    if (dim_ >= max_dimension) throw input_error("lifted point would exceed the dimension cap");
    std::array<double, max_dimension> tmp{};
    std::copy(c_.begin(), c_.begin() + dim_, tmp.begin());
    tmp[static_cast<std::size_t>(dim_)] = last;
    return Point(std::span<const double>(tmp.data(), static_cast<std::size_t>(dim_ + 1)));
  }

  // Drops the last coordinate.
  Point projected() const {
    if (dim_ == 0) throw precondition_error("cannot project a 0-dimensional point");
    return Point(std::span<const double>(c_.data(), static_cast<std::size_t>(dim_ - 1)));
  }

  friend bool operator==(const Point& a, const Point& b) {
    return a.dim_ == b.dim_ && std::equal(a.c_.begin(), a.c_.begin() + a.dim_, b.c_.begin());
  }

  friend std::partial_ordering operator<=>(const Point& a, const Point& b) {
    if (a.dim_ != b.dim_) return a.dim_ <=> b.dim_;
    for (int i = 0; i < a.dim_; ++i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
    return std::partial_ordering::equivalent;
  }

 private:
  std::array<double, max_dimension> c_{};
  int dim_ = 0;
};

// A finite point set in R^dimension with pairwise distinct points.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(int dimension) : dim_(dimension) { check_dimension(); }

  PointCloud(int dimension, std::vector<Point> points) : points_(std::move(points)), dim_(dimension) {
    check_dimension();
    for (std::size_t i = 0; i < points_.size(); ++i)
      if (points_[i].dimension() != dim_)
        throw input_error("point " + std::to_string(i) + " has dimension " +
                          std::to_string(points_[i].dimension()) + ", cloud has " +
                          std::to_string(dim_));
    std::vector<std::size_t> order(points_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return points_[a] < points_[b]; });
    for (std::size_t i = 1; i < order.size(); ++i)
      if (points_[order[i]] == points_[order[i - 1]])
        throw input_error("duplicate point at indices " +
                          std::to_string(std::min(order[i], order[i - 1])) + " and " +
                          std::to_string(std::max(order[i], order[i - 1])));
  }

  int dimension() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  void check_dimension() const {
    if (dim_ < 0 || dim_ > max_dimension)
      throw input_error("dimension " + std::to_string(dim_) + " outside [0, " +
                        std::to_string(max_dimension) + "]");
  }

  std::vector<Point> points_;
  int dim_ = 0;
};

struct Ball {
  Point center;
  double radius = 0.0;
};

inline double squared_distance(const Point& a, const Point& b) {
  if (a.dimension() != b.dimension()) throw input_error("squared_distance: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < a.dimension(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace detail {

// Determinant of the edge vectors p[i] - p[0], i = 1..k, restricted to the
// coordinate axes in `axes` (k of them).
template <class T>
std::vector<T> orientation_terms(std::span<const Point* const> p, std::span<const int> axes) {
  const int k = static_cast<int>(axes.size());
  std::vector<T> a(static_cast<std::size_t>(k * k), T(0.0));
  for (int i = 1; i <= k; ++i)
    for (int j = 0; j < k; ++j)
      a[static_cast<std::size_t>((i - 1) * k + j)] = T((*p[i])[axes[j]]) - T((*p[0])[axes[j]]);
  return {exact::determinant<T>(std::span<const T>(a), k)};
}

// Gram determinant of the edge vectors; positive iff affinely independent.
template <class T>
std::vector<T> gram_terms(std::span<const Point* const> p) {
  const int k = static_cast<int>(p.size()) - 1;
  const int m = p[0]->dimension();
  std::vector<std::vector<T>> v(static_cast<std::size_t>(k), std::vector<T>(static_cast<std::size_t>(m), T(0.0)));
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < m; ++l) v[i][l] = T((*p[i + 1])[l]) - T((*p[0])[l]);
  std::vector<T> g(static_cast<std::size_t>(k * k), T(0.0));
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) {
      T acc(0.0);
      for (int l = 0; l < m; ++l) acc += v[r][l] * v[c][l];
      g[static_cast<std::size_t>(r * k + c)] = acc;
    }
  return {exact::determinant<T>(std::span<const T>(g), k)};
}

// Terms of the in-sphere test of q against the simplex s (j+1 affinely
// independent points in R^m, j <= m), computed in the simplex's own affine
// hull through the Gram matrix of its edge vectors v_i = s_i - s_0:
//
//     M = | G    u  |     G_rc = v_r . v_c,  u_r = v_r . w,  w = q - s_0,
//         | h^T  hq |     h_c = |v_c|^2,     hq = |w|^2.
//
// det M = det G * (|w|^2 - u^T G^-1 h), negative iff q lies strictly inside
// the smallest sphere through s. Regarding h and hq as the paraboloid lift,
// perturbing the lift of point i by eps_i (eps_i >> eps_j for i < j) adds
// a term linear in each eps; the coefficients of those terms follow det M
// in the returned sequence, ordered by priority.
template <class T>
std::vector<T> in_sphere_terms(std::span<const Point* const> s, const Point& q,
                               std::span<const std::size_t> priorities) {
  const int j = static_cast<int>(s.size()) - 1;
  const int m = q.dimension();
  const int n = j + 1;
  std::vector<std::vector<T>> v(static_cast<std::size_t>(j), std::vector<T>(static_cast<std::size_t>(m), T(0.0)));
  std::vector<T> w(static_cast<std::size_t>(m), T(0.0));
  for (int i = 0; i < j; ++i)
    for (int l = 0; l < m; ++l) v[i][l] = T((*s[i + 1])[l]) - T((*s[0])[l]);
  for (int l = 0; l < m; ++l) w[l] = T(q[l]) - T((*s[0])[l]);
  auto dot = [m](const std::vector<T>& a, const std::vector<T>& b) {
    T acc(0.0);
    for (int l = 0; l < m; ++l) acc += a[l] * b[l];
    return acc;
  };
  std::vector<T> mat(static_cast<std::size_t>(n * n), T(0.0));
  for (int r = 0; r < j; ++r) {
    for (int c = 0; c < j; ++c) mat[static_cast<std::size_t>(r * n + c)] = dot(v[r], v[c]);
    mat[static_cast<std::size_t>(r * n + j)] = dot(v[r], w);
  }
  for (int c = 0; c < j; ++c) mat[static_cast<std::size_t>(j * n + c)] = dot(v[c], v[c]);
  mat[static_cast<std::size_t>(j * n + j)] = dot(w, w);

  const auto dp = exact::minor_table(std::span<const T>(mat), n, j);
  const std::uint32_t full = (1u << n) - 1;
  std::vector<T> cofactor(static_cast<std::size_t>(n), T(0.0));
  T det(0.0);
  for (int c = 0; c < n; ++c) {
    cofactor[c] = dp[full & ~(1u << c)];
    if ((j + c) % 2 != 0) cofactor[c] = -cofactor[c];
    det += mat[static_cast<std::size_t>(j * n + c)] * cofactor[c];
  }
  std::vector<T> terms;
  terms.push_back(det);
  if (priorities.empty()) return terms;

  // coefficient per point: s_0, s_1..s_j, q
  std::vector<T> coef(static_cast<std::size_t>(n + 1), T(0.0));
  T sum(0.0);
  for (int c = 0; c < j; ++c) {
    coef[c + 1] = cofactor[c];
    sum += cofactor[c];
  }
  sum += cofactor[j];
  coef[0] = -sum;
  coef[n] = cofactor[j];
  std::vector<int> order(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return priorities[a] < priorities[b]; });
  for (int i : order) terms.push_back(coef[i]);
  return terms;
}

inline std::vector<const Point*> pointers(std::span<const Point> pts) {
  std::vector<const Point*> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(&p);
  return out;
}

}  // namespace detail

// Sign of det[p_1 - p_0, ..., p_m - p_0] for m+1 points of R^m.
inline int orientation(std::span<const Point> simplex_points) {
  if (simplex_points.empty()) throw input_error("orientation: no points");
  const int m = simplex_points[0].dimension();
  if (static_cast<int>(simplex_points.size()) != m + 1)
    throw input_error("orientation: need " + std::to_string(m + 1) + " points in R^" + std::to_string(m));
  for (const auto& p : simplex_points)
    if (p.dimension() != m) throw input_error("orientation: dimension mismatch");
  const auto ptrs = detail::pointers(simplex_points);
  std::vector<int> axes(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) axes[i] = i;
  return exact::lexicographic_sign(
      [&]<class T>(exact::type_tag<T>) { return detail::orientation_terms<T>(ptrs, axes); });
}

// Orientation of k+1 points after projecting onto the k coordinate axes given.
inline int orientation_in_axes(std::span<const Point* const> pts, std::span<const int> axes) {
  return exact::lexicographic_sign(
      [&]<class T>(exact::type_tag<T>) { return detail::orientation_terms<T>(pts, axes); });
}

inline bool affinely_independent(std::span<const Point* const> pts) {
  if (pts.size() <= 1) return true;
  if (static_cast<int>(pts.size()) > pts[0]->dimension() + 1) return false;
  return exact::lexicographic_sign(
             [&]<class T>(exact::type_tag<T>) { return detail::gram_terms<T>(pts); }) > 0;
}

// +1 if q is strictly inside the circumsphere of the simplex, -1 if strictly
// outside, 0 if on it. The simplex may have fewer than m+1 vertices, in which
// case its smallest circumsphere is used.
inline int in_sphere(std::span<const Point> simplex_points, const Point& query) {
  if (simplex_points.empty()) throw input_error("in_sphere: no points");
  const int m = query.dimension();
  for (const auto& p : simplex_points)
    if (p.dimension() != m) throw input_error("in_sphere: dimension mismatch");
  const auto ptrs = detail::pointers(simplex_points);
  if (!affinely_independent(ptrs)) throw precondition_error("in_sphere: degenerate simplex");
  return -exact::lexicographic_sign([&]<class T>(exact::type_tag<T>) {
    return detail::in_sphere_terms<T>(ptrs, query, std::span<const std::size_t>{});
  });
}

// in_sphere under the index-ordered perturbation of the paraboloid lift
// (point i lifted to |p_i|^2 + eps_i, eps_0 >> eps_1 >> ...). Never 0 for a
// query distinct from the simplex vertices.
inline int in_sphere_perturbed(const PointCloud& cloud, std::span<const vertex_index> simplex,
                               vertex_index query) {
  std::vector<const Point*> ptrs;
  std::vector<std::size_t> prio;
  ptrs.reserve(simplex.size());
  for (auto v : simplex) {
    ptrs.push_back(&cloud[v]);
    prio.push_back(v);
  }
  prio.push_back(query);
  const Point& q = cloud[query];
  return -exact::lexicographic_sign([&]<class T>(exact::type_tag<T>) {
    return detail::in_sphere_terms<T>(ptrs, q, prio);
  });
}

namespace detail {

// Smallest ball whose boundary passes through every support point, with its
// center in their affine hull. Empty if the support is (numerically)
// affinely dependent.
inline std::optional<Ball> circumscribed_ball(std::span<const Point* const> support) {
  if (support.empty()) return std::nullopt;
  const Point& p0 = *support[0];
  const int m = p0.dimension();
  const int k = static_cast<int>(support.size()) - 1;
  if (k == 0) return Ball{p0, 0.0};
  if (k > m) return std::nullopt;
  using real = long double;
  std::vector<std::vector<real>> v(static_cast<std::size_t>(k), std::vector<real>(static_cast<std::size_t>(m)));
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < m; ++l) v[i][l] = static_cast<real>((*support[i + 1])[l]) - static_cast<real>(p0[l]);
  // augmented system G lambda = |v|^2 / 2
  std::vector<std::vector<real>> a(static_cast<std::size_t>(k), std::vector<real>(static_cast<std::size_t>(k + 1)));
  real scale = 0;
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      real acc = 0;
      for (int l = 0; l < m; ++l) acc += v[r][l] * v[c][l];
      a[r][c] = acc;
    }
    a[r][k] = a[r][r] / 2;
    scale = std::max(scale, a[r][r]);
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) <= 1e-14L * scale) return std::nullopt;
    std::swap(a[piv], a[col]);
    for (int r = col + 1; r < k; ++r) {
      const real f = a[r][col] / a[col][col];
      for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<real> lambda(static_cast<std::size_t>(k));
  for (int r = k - 1; r >= 0; --r) {
    real acc = a[r][k];
    for (int c = r + 1; c < k; ++c) acc -= a[r][c] * lambda[c];
    lambda[r] = acc / a[r][r];
  }
  std::array<double, max_dimension> c{};
  for (int l = 0; l < m; ++l) {
    real acc = static_cast<real>(p0[l]);
    for (int i = 0; i < k; ++i) acc += lambda[i] * v[i][l];
    c[static_cast<std::size_t>(l)] = static_cast<double>(acc);
  }
  Point center(std::span<const double>(c.data(), static_cast<std::size_t>(m)));
  double r2 = 0.0;
  for (const Point* s : support) r2 = std::max(r2, squared_distance(center, *s));
  return Ball{center, std::sqrt(r2)};
}

inline bool ball_contains(const Ball& b, const Point& p, double rel_tol) {
  if (b.radius < 0) return false;
  return std::sqrt(squared_distance(b.center, p)) <= b.radius + rel_tol * (1.0 + b.radius);
}

// Move-to-front recursion: the smallest ball containing pts[0..end) with
// every point of `support` on its boundary.
inline void welzl_mtf(std::vector<const Point*>& pts, std::size_t end, std::vector<const Point*>& support,
                      Ball& ball, int max_support) {
  if (support.empty()) {
    ball = Ball{Point{}, -1.0};
  } else if (auto b = circumscribed_ball(support)) {
    ball = *b;
  } else {
    // dependent support: keep the newest point and the best subset of the rest
    std::optional<Ball> best;
    for (std::size_t drop = 0; drop + 1 < support.size(); ++drop) {
      std::vector<const Point*> sub;
      for (std::size_t i = 0; i < support.size(); ++i)
        if (i != drop) sub.push_back(support[i]);
      auto cand = circumscribed_ball(sub);
      if (!cand) continue;
      bool all = true;
      for (const Point* s : support) all = all && ball_contains(*cand, *s, 1e-9);
      if (all && (!best || cand->radius < best->radius)) best = cand;
    }
    if (best) ball = *best;
  }
  if (static_cast<int>(support.size()) == max_support) return;
  for (std::size_t i = 0; i < end; ++i) {
    if (ball_contains(ball, *pts[i], 1e-12)) continue;
    support.push_back(pts[i]);
    welzl_mtf(pts, i, support, ball, max_support);
    support.pop_back();
    std::rotate(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(i), pts.begin() + static_cast<std::ptrdiff_t>(i + 1));
  }
}

}  // namespace detail

// Unique smallest ball containing all points. The result depends only on
// the set of points: the input is sorted first, and the final ball is
// recomputed from the lexicographically first minimum-size support set, so
// equal point sets (and sets sharing that support) get bit-identical radii.
inline Ball smallest_enclosing_ball(std::span<const Point> points) {
  if (points.empty()) throw input_error("smallest_enclosing_ball: empty input");
  const int m = points[0].dimension();
  for (const auto& p : points)
    if (p.dimension() != m) throw input_error("smallest_enclosing_ball: dimension mismatch");

  std::vector<const Point*> pts = detail::pointers(points);
  std::sort(pts.begin(), pts.end(), [](const Point* a, const Point* b) { return *a < *b; });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Point* a, const Point* b) { return *a == *b; }),
            pts.end());
  if (pts.size() == 1) return Ball{*pts[0], 0.0};

  Ball ball{Point{}, -1.0};
  {
    std::vector<const Point*> work = pts;
    std::vector<const Point*> support;
    detail::welzl_mtf(work, work.size(), support, ball, m + 1);
  }

  const double tol = 1e-9 * (1.0 + ball.radius);
  std::vector<const Point*> boundary;
  for (const Point* p : pts)
    if (std::sqrt(squared_distance(ball.center, *p)) >= ball.radius - tol) boundary.push_back(p);
  if (boundary.size() > 16) return ball;

  const int nb = static_cast<int>(boundary.size());
  for (int size = 1; size <= std::min(nb, m + 1); ++size) {
    // subsets of `boundary` of this size in lexicographic order
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::vector<const Point*> sub;
      for (int i : idx) sub.push_back(boundary[static_cast<std::size_t>(i)]);
      if (auto cand = detail::circumscribed_ball(sub); cand && cand->radius <= ball.radius + tol) {
        bool all = true;
        for (const Point* p : pts) {
          if (!detail::ball_contains(*cand, *p, 1e-9)) {
            all = false;
            break;
          }
        }
        if (all) return *cand;
      }
      int pos = size - 1;
      while (pos >= 0 && idx[pos] == nb - size + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  return ball;
}

// Radius of the smallest sphere through the points, in their affine hull.
// This is the alpha value of a Delaunay simplex.
// Filtration value of the simplex spanned by these points: the MEB radius,
// raised to the largest MEB radius of any subset. The two agree in exact
// arithmetic; taking the maximum makes the values monotone under inclusion
// bit for bit, and still a function of the point set alone.
inline double cech_value(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const double whole = smallest_enclosing_ball(pts).radius;
  if (pts.size() <= 2 || pts.size() > 10) return whole;
  double best = whole;
  const auto n = static_cast<std::uint32_t>(pts.size());
  std::vector<Point> sub;
  for (std::uint32_t mask = 3; mask + 1 < (1u << n); ++mask) {
    if (std::popcount(mask) < 2) continue;
    sub.clear();
    for (std::uint32_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sub.push_back(pts[i]);
    best = std::max(best, smallest_enclosing_ball(sub).radius);
  }
  return best;
}

inline double circumradius(std::span<const Point> simplex_points) {
  const auto ptrs = detail::pointers(simplex_points);
  auto b = detail::circumscribed_ball(ptrs);
  if (!b) throw precondition_error("circumradius: degenerate simplex");
  return b->radius;
}

}  // namespace reldel
