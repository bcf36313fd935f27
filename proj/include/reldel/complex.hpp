#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "reldel/delaunay.hpp"
#include "reldel/error.hpp"

namespace reldel {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct Cell {
  Simplex simplex;
  double value = 0;  // nonnegative or +infinity
  bool in_subcomplex = false;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// A simplicial complex with a sublevel-set filtration (a cell is present at
// every t >= value) and a marked subcomplex. Only build() creates one, so a
// FilteredComplex is always valid.
class FilteredComplex {
 public:
  FilteredComplex() = default;

  static FilteredComplex build(std::vector<Cell> cells, std::optional<std::size_t> vertex_count = std::nullopt) {
    FilteredComplex c;
    c.cells_ = std::move(cells);
    c.index_.reserve(c.cells_.size());
    std::size_t nv = 0;
    for (std::size_t i = 0; i < c.cells_.size(); ++i) {
      const auto& cell = c.cells_[i];
      if (cell.simplex.size() == 0) throw complex_error(complex_error::kind::bad_value, "empty simplex");
      if (std::isnan(cell.value) || cell.value < 0)
        throw complex_error(complex_error::kind::bad_value, "bad filtration value on " + describe(cell.simplex));
      if (!c.index_.emplace(cell.simplex, i).second)
        throw complex_error(complex_error::kind::duplicate_cell, "duplicate cell " + describe(cell.simplex));
      c.top_ = std::max(c.top_, cell.simplex.dimension());
      nv = std::max<std::size_t>(nv, cell.simplex.vertices().back() + std::size_t{1});
    }
    if (vertex_count) {
      if (*vertex_count < nv) throw complex_error(complex_error::kind::bad_value, "vertex index out of range");
      nv = *vertex_count;
    }
    c.vertex_count_ = nv;

    for (const auto& cell : c.cells_) {
      for (const auto& f : cell.simplex.boundary()) {
        const auto it = c.index_.find(f);
        if (it == c.index_.end())
          throw complex_error(complex_error::kind::missing_face,
                              "face " + describe(f) + " of " + describe(cell.simplex) + " is missing");
        const auto& face = c.cells_[it->second];
        if (face.value > cell.value)
          throw complex_error(complex_error::kind::non_monotone,
                              "face " + describe(f) + " enters after its coface " + describe(cell.simplex));
        if (cell.in_subcomplex && !face.in_subcomplex)
          throw complex_error(complex_error::kind::subcomplex_not_closed,
                              "subcomplex cell " + describe(cell.simplex) + " has face " + describe(f) + " outside it");
      }
    }
    return c;
  }

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t size() const { return cells_.size(); }
  int top_dimension() const { return top_; }
  const std::vector<Cell>& cells() const { return cells_; }
  const Cell& operator[](std::size_t i) const { return cells_[i]; }

  std::optional<std::size_t> find(const Simplex& s) const {
    const auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t subcomplex_size() const {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const Cell& c) { return c.in_subcomplex; }));
  }

  static std::string describe(const Simplex& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
    return out + "}";
  }

 private:
  std::vector<Cell> cells_;
  std::unordered_map<Simplex, std::size_t, SimplexHash> index_;
  std::size_t vertex_count_ = 0;
  int top_ = -1;
};

// Subcomplex first, then by value, dimension and vertices. On a valid complex
// this is a linear extension of the face order.
inline std::vector<std::size_t> canonical_order(const FilteredComplex& c) {
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Cell& x = c[a];
    const Cell& y = c[b];
    if (x.in_subcomplex != y.in_subcomplex) return x.in_subcomplex;
    if (x.value != y.value) return x.value < y.value;
    if (x.simplex.size() != y.simplex.size()) return x.simplex.size() < y.simplex.size();
    return x.simplex < y.simplex;
  });
  return order;
}

inline long euler_characteristic(const FilteredComplex& c, double t = infinity) {
  long chi = 0;
  for (const auto& cell : c.cells())
    if (cell.value <= t) chi += cell.simplex.dimension() % 2 ? -1 : 1;
  return chi;
}

// Text form, one cell per line in canonical order:  v0 v1 ... vk <value> <0|1>
inline std::string format_value(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_complex(std::ostream& out, const FilteredComplex& c) {
  for (auto i : canonical_order(c)) {
    const auto& cell = c[i];
    for (auto v : cell.simplex) out << v << ' ';
    out << format_value(cell.value) << ' ' << (cell.in_subcomplex ? 1 : 0) << '\n';
  }
}

inline FilteredComplex read_complex(std::istream& in) {
  std::vector<Cell> cells;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const auto bad = [&] { return input_error("complex line " + std::to_string(lineno) + " is malformed"); };
    if (tok.size() < 3 || (tok.back() != "0" && tok.back() != "1")) throw bad();
    std::vector<vertex_index> vs;
    for (std::size_t i = 0; i + 2 < tok.size(); ++i) {
      vertex_index v{};
      const auto [p, ec] = std::from_chars(tok[i].data(), tok[i].data() + tok[i].size(), v);
      if (ec != std::errc{} || p != tok[i].data() + tok[i].size()) throw bad();
      vs.push_back(v);
    }
    const std::string& val = tok[tok.size() - 2];
    double value{};
    if (val == "inf") {
      value = infinity;
    } else {
      const auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), value);
      if (ec != std::errc{} || p != val.data() + val.size()) throw bad();
    }
    cells.push_back({Simplex(std::move(vs)), value, tok.back() == "1"});
  }
  return FilteredComplex::build(std::move(cells));
}

}  // namespace reldel
