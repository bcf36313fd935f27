#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <random>
#include <set>
#include <vector>

#include "reldel/delaunay.hpp"
#include "support/oracles.hpp"

using namespace reldel;

namespace {

std::vector<Point> subset_points(const PointCloud& c, const Simplex& s) {
  std::vector<Point> out;
  for (auto v : s) out.push_back(c[v]);
  return out;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<vertex_index>&)>& f) {
  std::vector<vertex_index> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  if (k > n) return;
  while (true) {
    f(pick);
    int pos = static_cast<int>(k) - 1;
    while (pos >= 0 && pick[pos] == n - k + pos) --pos;
    if (pos < 0) return;
    ++pick[pos];
    for (std::size_t i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
  }
}

// Top simplices of the perturbed Delaunay triangulation by exhaustive search:
// full-dimensional subsets with every other point strictly outside.
std::set<Simplex> brute_force_delaunay(const std::vector<Point>& pts) {
  const int m = pts[0].dimension();
  std::set<Simplex> out;
  for_each_subset(pts.size(), static_cast<std::size_t>(m + 1), [&](const std::vector<vertex_index>& pick) {
    std::vector<Point> s;
    for (auto v : pick) s.push_back(pts[v]);
    if (oracle::orientation(s) == 0) return;
    std::vector<std::size_t> idx(pick.begin(), pick.end());
    for (std::size_t q = 0; q < pts.size(); ++q) {
      if (std::find(pick.begin(), pick.end(), q) != pick.end()) continue;
      if (oracle::in_sphere_epsilon(s, idx, pts[q], q) > 0) return;
    }
    out.insert(Simplex(pick));
  });
  return out;
}

std::vector<Point> dedup_shuffled(std::vector<Point> pts, std::mt19937_64& rng) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::shuffle(pts.begin(), pts.end(), rng);
  return pts;
}

// Barycentric membership with tolerance.
bool in_simplex(const std::vector<Point>& s, const Point& q, double tol) {
  const int m = q.dimension();
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a(j, i) = s[i + 1][j] - s[0][j];
  }
  for (int j = 0; j < m; ++j) b[j] = q[j] - s[0][j];
  const Eigen::VectorXd lam = a.fullPivLu().solve(b);
  double rest = 1;
  for (int i = 0; i < m; ++i) {
    if (lam[i] < -tol) return false;
    rest -= lam[i];
  }
  return rest >= -tol;
}

long euler(const Triangulation& t) {
  long chi = 0;
  for (std::size_t d = 0; d < t.all_simplices.size(); ++d)
    chi += (d % 2 ? -1 : 1) * static_cast<long>(t.all_simplices[d].size());
  return chi;
}

}  // namespace

TEST_CASE("single triangle") {
  const auto t = delaunay(PointCloud(2, {{0, 0}, {1, 0}, {0, 1}}));
  CHECK(t.top_dimension == 2);
  CHECK(t.top_simplices == std::vector<Simplex>{{0, 1, 2}});
  CHECK(faces(t, 1) == std::vector<Simplex>{{0, 1}, {0, 2}, {1, 2}});
  CHECK(faces(t, 0) == std::vector<Simplex>{{0}, {1}, {2}});
  CHECK(t.simplex_count() == 7);
  CHECK_THROWS_AS(faces(t, 3), input_error);
  CHECK_THROWS_AS(faces(t, -1), input_error);
}

TEST_CASE("unit square picks one diagonal") {
  const auto t = delaunay(PointCloud(2, {{0, 0}, {1, 0}, {0, 1}, {1, 1}}));
  CHECK(faces(t, 2).size() == 2);
  CHECK(faces(t, 1).size() == 5);
  CHECK(faces(t, 0).size() == 4);
}

TEST_CASE("20 random points pass the empty-circumcircle check") {
  std::mt19937_64 rng(42);
  const auto pts = oracle::random_points(rng, 20, 2);
  const auto t = delaunay(PointCloud(2, pts));
  for (const auto& s : t.top_simplices) {
    const auto sp = subset_points(t.cloud, s);
    REQUIRE(oracle::orientation(sp) != 0);
    for (std::size_t q = 0; q < pts.size(); ++q)
      if (!s.contains(static_cast<vertex_index>(q))) CHECK(oracle::in_sphere(sp, pts[q]) < 0);
  }
  // a planar triangulation with h hull vertices has 2n - 2 - h triangles
  std::size_t hull = 0;
  for (const auto& e : faces(t, 1)) {
    int cofaces = 0;
    for (const auto& s : t.top_simplices) cofaces += s.contains(e[0]) && s.contains(e[1]);
    hull += cofaces == 1;
  }
  CHECK(t.top_simplices.size() == 2 * 20 - 2 - hull);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(delaunay(PointCloud(2)), input_error);
  CHECK_THROWS_AS(delaunay(PointCloud(6, {Point{0, 0, 0, 0, 0, 0}})), input_error);
  DelaunayOptions low;
  low.dimension_cap = 2;
  CHECK_THROWS_AS(delaunay(PointCloud(3, {{0, 0, 0}}), low), input_error);
}

TEST_CASE("matches exhaustive search on generic clouds") {
  std::mt19937_64 rng(100);
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 1 + trial % 4;
    const int n = m + 1 + static_cast<int>(rng() % (m == 4 ? 5 : 8));
    const auto pts = oracle::random_points(rng, n, m);
    const auto t = delaunay(PointCloud(m, pts));
    const std::set<Simplex> got(t.top_simplices.begin(), t.top_simplices.end());
    CHECK(got == brute_force_delaunay(pts));
  }
}

TEST_CASE("matches exhaustive search on lattice clouds") {
  // small integer grids are full of cospherical and coplanar subsets
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 150; ++trial) {
    const int m = 1 + trial % 3;
    auto pts = dedup_shuffled(oracle::random_integer_points(rng, 4 + trial % 7, m, -2, 2), rng);
    if (static_cast<int>(pts.size()) < m + 1) continue;
    const auto t = delaunay(PointCloud(m, pts));
    if (t.top_dimension < m) continue;
    const std::set<Simplex> got(t.top_simplices.begin(), t.top_simplices.end());
    CHECK(got.size() == t.top_simplices.size());
    CHECK(got == brute_force_delaunay(pts));
  }
}

TEST_CASE("two-layer clouds like the lifted construction") {
  std::mt19937_64 rng(102);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 2;
    const auto a = oracle::random_integer_points(rng, 3 + trial % 3, d, -2, 2);
    const auto b = oracle::random_integer_points(rng, 3 + trial % 4, d, -2, 2);
    std::vector<Point> z;
    for (const auto& p : a) z.push_back(p.lifted(2));
    for (const auto& p : b) z.push_back(p.lifted(-2));
    z = dedup_shuffled(z, rng);
    const auto t = delaunay(PointCloud(d + 1, z));
    if (t.top_dimension < d + 1) continue;
    const std::set<Simplex> got(t.top_simplices.begin(), t.top_simplices.end());
    CHECK(got == brute_force_delaunay(z));
  }
}

TEST_CASE("empty circumsphere under perturbation") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 1 + trial % 4;
    const bool lattice = trial % 2;
    auto pts = lattice ? dedup_shuffled(oracle::random_integer_points(rng, 40, m, -3, 3), rng)
                       : oracle::random_points(rng, 40, m);
    PointCloud cloud(m, pts);
    const auto t = delaunay(cloud);
    REQUIRE(t.top_dimension == m);
    for (const auto& s : t.top_simplices) {
      CHECK(orientation(subset_points(cloud, s)) != 0);
      for (vertex_index q = 0; q < cloud.size(); ++q)
        if (!s.contains(q)) CHECK(in_sphere_perturbed(cloud, s.vertices(), q) < 0);
    }
  }
}

TEST_CASE("downward closure stores every face once") {
  std::mt19937_64 rng(104);
  const auto t = delaunay(PointCloud(3, oracle::random_points(rng, 30, 3)));
  for (std::size_t d = 0; d < t.all_simplices.size(); ++d) {
    const auto& level = t.all_simplices[d];
    CHECK(std::is_sorted(level.begin(), level.end()));
    CHECK(std::adjacent_find(level.begin(), level.end()) == level.end());
    for (const auto& s : level) {
      CHECK(s.dimension() == static_cast<int>(d));
      for (const auto& f : s.boundary()) CHECK(std::binary_search(t.all_simplices[d - 1].begin(), t.all_simplices[d - 1].end(), f));
    }
  }
  CHECK(t.all_simplices.back() == std::vector<Simplex>(t.top_simplices.begin(), t.top_simplices.end()));
}

TEST_CASE("top simplices cover the convex hull") {
  std::mt19937_64 rng(105);
  for (int m = 2; m <= 4; ++m) {
    const auto pts = oracle::random_points(rng, 25, m);
    PointCloud cloud(m, pts);
    const auto t = delaunay(cloud);
    std::vector<std::vector<Point>> cells;
    for (const auto& s : t.top_simplices) cells.push_back(subset_points(cloud, s));
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    std::exponential_distribution<double> w(1.0);
    for (int k = 0; k < 1000; ++k) {
      // random convex combination of a few cloud points
      std::vector<double> c(static_cast<std::size_t>(m), 0.0);
      double total = 0;
      for (int j = 0; j < 4; ++j) {
        const auto& p = pts[pick(rng)];
        const double wt = w(rng);
        total += wt;
        for (int i = 0; i < m; ++i) c[i] += wt * p[i];
      }
      for (auto& x : c) x /= total;
      const Point q{std::span<const double>(c)};
      const bool covered =
          std::any_of(cells.begin(), cells.end(), [&](const auto& s) { return in_simplex(s, q, 1e-9); });
      CHECK(covered);
    }
  }
}

TEST_CASE("Euler characteristic of a triangulated convex set is one") {
  std::mt19937_64 rng(106);
  const std::vector<Point> square_grid{{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {2, 1}, {0, 2}, {1, 2}, {2, 2}};
  CHECK(euler(delaunay(PointCloud(2, square_grid))) == 1);
  CHECK(faces(delaunay(PointCloud(2, square_grid)), 2).size() == 8);
  // integer points on a circle of radius 5: every quadruple is cocircular
  std::vector<Point> pythagorean{{5, 0}, {4, 3}, {3, 4}, {0, 5}, {-3, 4}, {-4, 3}, {-5, 0}, {-4, -3}, {-3, -4}, {0, -5}, {3, -4}, {4, -3}};
  std::shuffle(pythagorean.begin(), pythagorean.end(), rng);
  const auto ring = delaunay(PointCloud(2, pythagorean));
  CHECK(euler(ring) == 1);
  CHECK(faces(ring, 2).size() == 10);
  for (int m = 1; m <= 4; ++m) CHECK(euler(delaunay(PointCloud(m, oracle::random_points(rng, 30, m)))) == 1);
}

TEST_CASE("output does not depend on the seed") {
  std::mt19937_64 rng(107);
  for (int m = 1; m <= 4; ++m) {
    auto pts = dedup_shuffled(oracle::random_integer_points(rng, 40, m, -3, 3), rng);
    PointCloud cloud(m, pts);
    const auto base = delaunay(cloud).top_simplices;
    for (std::uint64_t seed : {1ull, 2ull, 99ull, 123456789ull}) {
      DelaunayOptions opt;
      opt.seed = seed;
      CHECK(delaunay(cloud, opt).top_simplices == base);
    }
    CHECK(delaunay(cloud).top_simplices == base);
  }
}

TEST_CASE("lower-dimensional clouds are triangulated within their affine hull") {
  SECTION("singleton") {
    const auto t = delaunay(PointCloud(3, {{1, 2, 3}}));
    CHECK(t.top_dimension == 0);
    CHECK(t.top_simplices == std::vector<Simplex>{{0}});
  }
  SECTION("collinear in the plane") {
    const auto t = delaunay(PointCloud(2, {{2, 2}, {0, 0}, {3, 3}, {1, 1}}));
    CHECK(t.top_dimension == 1);
    CHECK(t.top_simplices == std::vector<Simplex>{{0, 2}, {0, 3}, {1, 3}});
  }
  SECTION("vertical segment") {
    const auto t = delaunay(PointCloud(3, {{0, 0, 1}, {0, 0, -1}}));
    CHECK(t.top_dimension == 1);
    CHECK(t.top_simplices == std::vector<Simplex>{{0, 1}});
  }
  SECTION("planar cloud in space matches the planar triangulation") {
    std::mt19937_64 rng(108);
    for (int trial = 0; trial < 20; ++trial) {
      auto flat = dedup_shuffled(oracle::random_integer_points(rng, 15, 2, -3, 3), rng);
      std::vector<Point> tilted;
      for (const auto& p : flat) tilted.push_back(Point{p[0], 7.0, p[1]});
      const auto a = delaunay(PointCloud(2, flat));
      const auto b = delaunay(PointCloud(3, tilted));
      CHECK(b.top_dimension == 2);
      CHECK(a.top_simplices == b.top_simplices);
    }
  }
  SECTION("coplanar two-layer slice") {
    // Z with both layers degenerate to lines in the plane
    const auto t = delaunay(PointCloud(3, {{0, 0, 1}, {1, 0, 1}, {0, 0, -1}, {2, 0, -1}}));
    CHECK(t.top_dimension == 2);
    CHECK(euler(t) == 1);
  }
}
