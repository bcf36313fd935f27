#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "reldel/complex.hpp"
#include "reldel/error.hpp"
#include "reldel/geometry.hpp"
#include "reldel/persistence.hpp"

namespace reldel {

inline constexpr std::size_t default_oracle_cap = 14;

// Every subset of at most max_simplex_dim + 1 points. Subsets of A are
// present from the start; the rest enter at their MEB radius.
inline FilteredComplex relative_cech(const PointCloud& x, const std::set<vertex_index>& a, int max_simplex_dim,
                                     std::size_t cap = default_oracle_cap) {
  if (x.size() > cap)
    throw input_error("oracle: " + std::to_string(x.size()) + " points exceed the cap of " + std::to_string(cap));
  if (max_simplex_dim < 0) throw input_error("oracle: max_simplex_dim must be nonnegative");
  for (auto v : a)
    if (v >= x.size()) throw input_error("oracle: subset index " + std::to_string(v) + " out of range");
  const auto n = static_cast<vertex_index>(x.size());
  const std::size_t k_max = std::min<std::size_t>(n, static_cast<std::size_t>(max_simplex_dim) + 1);
  std::vector<Cell> cells;
  std::vector<Point> pts;
  for (std::size_t k = 1; k <= k_max; ++k) {
    std::vector<vertex_index> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      const bool sub = std::all_of(pick.begin(), pick.end(), [&](vertex_index v) { return a.count(v) > 0; });
      double value = 0;
      if (!sub) {
        pts.clear();
        for (auto v : pick) pts.push_back(x[v]);
        value = cech_value(pts);
      }
      cells.push_back({Simplex(pick), value, sub});
      int pos = static_cast<int>(k) - 1;
      while (pos >= 0 && pick[pos] == n - k + pos) --pos;
      if (pos < 0) break;
      ++pick[pos];
      for (std::size_t i = pos + 1; i < k; ++i) pick[i] = pick[i - 1] + 1;
    }
  }
  return FilteredComplex::build(std::move(cells), x.size());
}

struct BarcodeDiff {
  bool equal = true;
  // unmatched bars per side, as (dimension, bar)
  std::vector<std::pair<int, Bar>> only_first, only_second;

  std::string text() const {
    if (equal) return "barcodes match\n";
    std::ostringstream out;
    auto put = [&](const char* side, const auto& bars) {
      for (const auto& [k, b] : bars)
        out << side << " H" << k << " [" << format_value(b.birth) << ", " << format_value(b.death) << ")\n";
    };
    out << "barcodes differ\n";
    put("only in first: ", only_first);
    put("only in second:", only_second);
    return out.str();
  }

  nlohmann::ordered_json json() const {
    auto bars = [](const auto& list) {
      nlohmann::ordered_json out = nlohmann::ordered_json::array();
      for (const auto& [k, b] : list) {
        nlohmann::ordered_json death = nullptr;
        if (!b.infinite()) death = b.death;
        out.push_back({{"dim", k}, {"bar", {b.birth, death}}});
      }
      return out;
    };
    return {{"equal", equal}, {"only_first", bars(only_first)}, {"only_second", bars(only_second)}};
  }
};

namespace detail {

inline bool close(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

// A bar this short may be matched to the diagonal: the nearest diagonal
// point moves each endpoint by half its length.
inline bool near_diagonal(const Bar& b, double tol) { return !b.infinite() && (b.death - b.birth) / 2 <= tol; }

// Maximum bipartite matching by augmenting paths.
struct Matcher {
  std::vector<std::vector<int>> adj;
  std::vector<int> match_right;
  std::vector<char> seen;

  bool augment(int u) {
    for (int v : adj[u]) {
      if (seen[v]) continue;
      seen[v] = 1;
      if (match_right[v] < 0 || augment(match_right[v])) {
        match_right[v] = u;
        return true;
      }
    }
    return false;
  }
};

}  // namespace detail

// Bars match when both endpoints agree within tol (infinite deaths only with
// infinite deaths); a bar within tol of the diagonal may go unmatched.
inline BarcodeDiff compare_barcodes(const Barcode& b1, const Barcode& b2, double tol) {
  if (b1.max_dim() != b2.max_dim()) throw precondition_error("compare_barcodes: different max dimensions");
  BarcodeDiff diff;
  for (int k = 0; k <= b1.max_dim(); ++k) {
    const auto& p = b1[k];
    const auto& q = b2[k];
    const int n1 = static_cast<int>(p.size()), n2 = static_cast<int>(q.size());
    // left: bars of p, then diagonal slots for q; right: bars of q, then diagonal slots for p
    detail::Matcher m;
    m.adj.resize(static_cast<std::size_t>(n1 + n2));
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j)
        if (detail::close(p[i].birth, q[j].birth, tol) && detail::close(p[i].death, q[j].death, tol))
          m.adj[i].push_back(j);
      if (detail::near_diagonal(p[i], tol)) m.adj[i].push_back(n2 + i);
    }
    for (int j = 0; j < n2; ++j) {
      if (detail::near_diagonal(q[j], tol)) m.adj[n1 + j].push_back(j);
      for (int i = 0; i < n1; ++i) m.adj[n1 + j].push_back(n2 + i);
    }
    m.match_right.assign(static_cast<std::size_t>(n1 + n2), -1);
    std::vector<char> left_matched(static_cast<std::size_t>(n1 + n2), 0);
    for (int u = 0; u < n1 + n2; ++u) {
      m.seen.assign(static_cast<std::size_t>(n1 + n2), 0);
      left_matched[u] = m.augment(u);
    }
    for (int i = 0; i < n1; ++i)
      if (!left_matched[i]) diff.only_first.emplace_back(k, p[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n2; ++j)
      if (m.match_right[j] < 0) diff.only_second.emplace_back(k, q[static_cast<std::size_t>(j)]);
  }
  diff.equal = diff.only_first.empty() && diff.only_second.empty();
  return diff;
}

}  // namespace reldel
