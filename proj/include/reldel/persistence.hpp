#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "reldel/complex.hpp"
#include "reldel/error.hpp"

namespace reldel {

// Columns follow a linear extension of the face order, restricted to the
// cells that survive the quotient. Row indices refer to column positions.
struct BoundaryMatrix {
  bool relative = false;
  std::vector<std::size_t> cell;  // column -> cell index in the complex
  std::vector<int> dim;
  std::vector<std::vector<std::uint32_t>> columns;

  std::size_t size() const { return columns.size(); }
};

// In relative mode subcomplex cells contribute neither rows nor columns.
// An explicit order must list every complex cell once with faces first;
// by default the canonical order is used.
inline BoundaryMatrix boundary_matrix(const FilteredComplex& c, bool relative,
                                      std::optional<std::span<const std::size_t>> order = std::nullopt) {
  std::vector<std::size_t> canon;
  if (!order) {
    canon = canonical_order(c);
    order = canon;
  }
  if (order->size() != c.size()) throw precondition_error("boundary_matrix: order does not list every cell");
  constexpr std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> position(c.size(), none);
  BoundaryMatrix m;
  m.relative = relative;
  for (auto i : *order) {
    if (i >= c.size()) throw precondition_error("boundary_matrix: order lists an unknown cell");
    const Cell& cell = c[i];
    if (relative && cell.in_subcomplex) continue;
    std::vector<std::uint32_t> col;
    for (const auto& f : cell.simplex.boundary()) {
      const std::size_t fi = *c.find(f);
      if (relative && c[fi].in_subcomplex) continue;
      if (position[fi] == none) throw precondition_error("boundary_matrix: order places a coface before its face");
      col.push_back(position[fi]);
    }
    std::sort(col.begin(), col.end());
    if (position[i] != none) throw precondition_error("boundary_matrix: order lists a cell twice");
    position[i] = static_cast<std::uint32_t>(m.columns.size());
    m.cell.push_back(i);
    m.dim.push_back(cell.simplex.dimension());
    m.columns.push_back(std::move(col));
  }
  return m;
}

struct Reduction {
  std::vector<std::vector<std::uint32_t>> columns;  // reduced
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, column), sorted by column
  std::vector<std::size_t> unpaired;                        // ascending
};

namespace detail {

inline void add_column(std::vector<std::uint32_t>& target, const std::vector<std::uint32_t>& source,
                       std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace detail

// Standard left-to-right reduction over GF(2). Dimensions are processed from
// the top down so that every pivot row found in dimension k+1 can be cleared
// before dimension k is reduced.
inline Reduction reduce(const BoundaryMatrix& m) {
  Reduction r;
  r.columns = m.columns;
  const std::size_t n = m.size();
  constexpr std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> pivot_of_row(n, none);
  std::vector<char> cleared(n, 0), paired(n, 0);
  std::vector<std::uint32_t> scratch;
  int top = -1;
  for (int d : m.dim) top = std::max(top, d);
  for (int k = top; k >= 0; --k) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m.dim[j] != k) continue;
      auto& col = r.columns[j];
      if (cleared[j]) {
        col.clear();
        continue;
      }
      while (!col.empty()) {
        const auto other = pivot_of_row[col.back()];
        if (other == none) break;
        detail::add_column(col, r.columns[other], scratch);
      }
      if (col.empty()) continue;
      const std::uint32_t low = col.back();
      pivot_of_row[low] = static_cast<std::uint32_t>(j);
      paired[low] = paired[j] = 1;
      cleared[low] = 1;
      r.pairs.emplace_back(low, j);
    }
  }
  std::sort(r.pairs.begin(), r.pairs.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  for (std::size_t j = 0; j < n; ++j)
    if (!paired[j]) r.unpaired.push_back(j);
  return r;
}

struct Bar {
  double birth = 0;
  double death = infinity;

  bool infinite() const { return std::isinf(death); }
  friend bool operator==(const Bar&, const Bar&) = default;
  friend auto operator<=>(const Bar&, const Bar&) = default;
};

struct Barcode {
  bool relative = false;
  std::vector<std::vector<Bar>> dims;  // dims[k] sorted by (birth, death)

  int max_dim() const { return static_cast<int>(dims.size()) - 1; }
  const std::vector<Bar>& operator[](int k) const { return dims[static_cast<std::size_t>(k)]; }

  // Number of bars of dimension k alive at t (birth <= t < death).
  std::size_t betti(int k, double t) const {
    if (k < 0 || k > max_dim()) return 0;
    return static_cast<std::size_t>(std::count_if(dims[static_cast<std::size_t>(k)].begin(),
                                                  dims[static_cast<std::size_t>(k)].end(),
                                                  [&](const Bar& b) { return b.birth <= t && t < b.death; }));
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& d : dims) n += d.size();
    return n;
  }

  friend bool operator==(const Barcode&, const Barcode&) = default;
};

inline Barcode barcode_from(const FilteredComplex& c, const BoundaryMatrix& m, const Reduction& r, int max_dim) {
  if (max_dim < 0) throw precondition_error("barcode: max_dim must be nonnegative");
  Barcode b;
  b.relative = m.relative;
  b.dims.resize(static_cast<std::size_t>(max_dim) + 1);
  auto value = [&](std::size_t col) { return c[m.cell[col]].value; };
  for (const auto& [row, col] : r.pairs) {
    const int k = m.dim[row];
    if (k > max_dim || value(row) == value(col)) continue;
    b.dims[static_cast<std::size_t>(k)].push_back({value(row), value(col)});
  }
  for (auto col : r.unpaired) {
    const int k = m.dim[col];
    if (k > max_dim || std::isinf(value(col))) continue;
    b.dims[static_cast<std::size_t>(k)].push_back({value(col), infinity});
  }
  for (auto& d : b.dims) std::sort(d.begin(), d.end());
  return b;
}

inline Barcode barcode(const FilteredComplex& c, bool relative, int max_dim) {
  if (max_dim < 0) throw precondition_error("barcode: max_dim must be nonnegative");
  const auto m = boundary_matrix(c, relative);
  return barcode_from(c, m, reduce(m), max_dim);
}

inline nlohmann::ordered_json to_json(const Barcode& b) {
  nlohmann::ordered_json out;
  out["field"] = "GF(2)";
  out["relative"] = b.relative;
  out["dims"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < b.dims.size(); ++k) {
    nlohmann::ordered_json bars = nlohmann::ordered_json::array();
    for (const auto& bar : b.dims[k]) {
      nlohmann::ordered_json death = nullptr;
      if (!bar.infinite()) death = bar.death;
      bars.push_back({bar.birth, death});
    }
    out["dims"].push_back({{"dim", k}, {"bars", std::move(bars)}});
  }
  return out;
}

inline Barcode barcode_from_json(const nlohmann::ordered_json& j) {
  Barcode b;
  try {
    if (j.at("field") != "GF(2)") throw input_error("barcode json: unsupported field");
    b.relative = j.at("relative").get<bool>();
    for (const auto& d : j.at("dims")) {
      const auto k = d.at("dim").get<std::size_t>();
      if (k != b.dims.size()) throw input_error("barcode json: dimensions out of order");
      auto& bars = b.dims.emplace_back();
      for (const auto& bar : d.at("bars"))
        bars.push_back({bar.at(0).get<double>(), bar.at(1).is_null() ? infinity : bar.at(1).get<double>()});
      std::sort(bars.begin(), bars.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("barcode json: ") + e.what());
  }
  return b;
}

}  // namespace reldel
