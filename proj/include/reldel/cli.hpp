#pragma once

// The reldel command line driver, kept in a header so tests can run the
// commands in-process.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "reldel/cech_oracle.hpp"
#include "reldel/complex.hpp"
#include "reldel/generators.hpp"
#include "reldel/io.hpp"
#include "reldel/persistence.hpp"
#include "reldel/relative_lift.hpp"

namespace reldel::cli {

enum exit_code : int { success = 0, internal = 1, bad_input = 2, mismatch = 3 };

inline constexpr std::uint64_t default_seed = 0x5eedull;

// Seed from RELDEL_SEED when set, otherwise the fallback.
inline std::uint64_t seed_from_env(std::uint64_t fallback = default_seed) {
  const char* env = std::getenv("RELDEL_SEED");
  if (!env || !*env) return fallback;
  std::uint64_t v{};
  const std::string s(env);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw input_error("RELDEL_SEED must be an unsigned integer");
  return v;
}

struct Input {
  PointCloud points;
  std::optional<std::set<vertex_index>> subset;  // absent: absolute persistence
};

struct PipelineOptions {
  double s_factor = 2.0;
  std::optional<int> max_dim;  // defaults to the data dimension
  std::uint64_t seed = default_seed;
};

struct PipelineResult {
  RelativeDelCech construction;
  Barcode barcode;
  bool relative = false;
  int max_dim = 0;
  double ms_complex = 0, ms_reduction = 0;
};

inline int resolve_max_dim(const PointCloud& x, std::optional<int> requested) {
  const int m = requested.value_or(x.dimension());
  if (m < 0) throw input_error("--max-dim must be nonnegative");
  return m;
}

inline PipelineResult run_pipeline(const Input& in, const PipelineOptions& opt) {
  using clock = std::chrono::steady_clock;
  PipelineResult r;
  r.relative = in.subset.has_value();
  r.max_dim = resolve_max_dim(in.points, opt.max_dim);
  const auto [x1, x2] = io::split(in.points, in.subset.value_or(std::set<vertex_index>{}));
  DelaunayOptions dopt;
  dopt.seed = opt.seed;
  const auto t0 = clock::now();
  r.construction = relative_delcech_at(x1, x2, choose_s(x1, x2, opt.s_factor), dopt);
  const auto t1 = clock::now();
  const auto m = boundary_matrix(r.construction.complex, r.relative);
  r.barcode = barcode_from(r.construction.complex, m, reduce(m), r.max_dim);
  r.barcode.relative = r.relative;
  const auto t2 = clock::now();
  r.ms_complex = std::chrono::duration<double, std::milli>(t1 - t0).count();
  r.ms_reduction = std::chrono::duration<double, std::milli>(t2 - t1).count();
  return r;
}

struct ComputeOptions {
  PipelineOptions pipeline;
  std::string out_path, svg_path, dump_path;
};

inline void write_to(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw input_error("cannot write " + path);
  f << text;
  if (!f) throw input_error("failed writing " + path);
}

inline int compute(const Input& in, const ComputeOptions& opt, std::ostream& out) {
  const auto r = run_pipeline(in, opt.pipeline);
  const std::string json = to_json(r.barcode).dump() + "\n";
  if (opt.out_path.empty())
    out << json;
  else
    write_to(opt.out_path, json);
  if (!opt.svg_path.empty()) {
    std::ostringstream svg;
    io::write_svg(svg, r.barcode);
    write_to(opt.svg_path, svg.str());
  }
  if (!opt.dump_path.empty()) {
    std::ostringstream dump;
    write_complex(dump, r.construction.complex);
    write_to(opt.dump_path, dump.str());
  }
  return success;
}

struct CheckOptions {
  PipelineOptions pipeline;
  double tol = 1e-9;
  std::size_t oracle_cap = default_oracle_cap;
  bool json = false;
  bool inject_fault = false;
};

struct CheckResult {
  bool match = false;
  BarcodeDiff diff;
  Barcode pipeline, oracle;
  EmbeddingReport embedding;
};

// Lowers one filtration value of the pipeline complex: a vertex outside the
// subcomplex moves to half the value of its cheapest coface.
inline FilteredComplex inject_fault(const FilteredComplex& c) {
  std::optional<std::size_t> target;
  for (std::size_t i = 0; i < c.size() && !target; ++i)
    if (c[i].simplex.size() == 1 && !c[i].in_subcomplex) target = i;
  if (!target) throw input_error("fault injection needs a point outside the subset");
  double lowest = infinity;
  const auto v = c[*target].simplex[0];
  for (const auto& cell : c.cells())
    if (cell.simplex.size() > 1 && cell.simplex.contains(v)) lowest = std::min(lowest, cell.value);
  auto cells = c.cells();
  cells[*target].value = std::isinf(lowest) ? 1.0 : lowest / 2;
  return FilteredComplex::build(std::move(cells), c.vertex_count());
}

inline CheckResult run_check(const Input& in, const CheckOptions& opt) {
  if (in.points.size() > opt.oracle_cap)
    throw input_error("check: " + std::to_string(in.points.size()) + " points exceed the oracle cap of " +
                      std::to_string(opt.oracle_cap));
  CheckResult r;
  auto p = run_pipeline(in, opt.pipeline);
  r.embedding = verify_embedding(p.construction.config, p.construction.del_z);
  if (opt.inject_fault) {
    const auto faulty = inject_fault(p.construction.complex);
    r.pipeline = barcode(faulty, p.relative, p.max_dim);
  } else {
    r.pipeline = p.barcode;
  }
  const auto cech = relative_cech(in.points, in.subset.value_or(std::set<vertex_index>{}), p.max_dim + 1,
                                  opt.oracle_cap);
  r.oracle = barcode(cech, p.relative, p.max_dim);
  r.diff = compare_barcodes(r.pipeline, r.oracle, opt.tol);
  r.match = r.diff.equal;
  return r;
}

inline int check(const Input& in, const CheckOptions& opt, std::ostream& out) {
  const auto r = run_check(in, opt);
  if (opt.json) {
    nlohmann::ordered_json j;
    j["match"] = r.match;
    j["tolerance"] = opt.tol;
    j["diff"] = r.diff.json();
    j["embedding"] = {{"x1_embedded", r.embedding.x1_embedded},
                      {"x2_embedded", r.embedding.x2_embedded},
                      {"subcomplex_matches", r.embedding.subcomplex_matches}};
    j["pipeline"] = to_json(r.pipeline);
    j["oracle"] = to_json(r.oracle);
    out << j.dump() << "\n";
  } else {
    char tol[32];
    std::snprintf(tol, sizeof tol, "%g", opt.tol);
    out << (r.match ? "MATCH" : "MISMATCH") << " (tolerance " << tol << ")\n";
    out << r.diff.text();
    for (const auto& problem : r.embedding.problems) out << "embedding: " << problem << "\n";
  }
  return r.match ? success : mismatch;
}

struct BenchOptions {
  generator gen = generator::uniform_box;
  int d = 2;
  std::vector<std::size_t> sizes;
  double subset_fraction = 0.5;  // the first fraction of each sample forms A
  double s_factor = 2.0;
  std::uint64_t seed = default_seed;
};

struct BenchRow {
  std::size_t n_total = 0;
  int d = 0;
  std::size_t cells_total = 0, cells_subcomplex = 0;
  double wall_ms_delaunay = 0, wall_ms_reduction = 0;
};

inline std::vector<BenchRow> run_bench(const BenchOptions& opt) {
  if (opt.sizes.empty()) throw input_error("bench: no sizes given");
  if (!(opt.subset_fraction >= 0 && opt.subset_fraction <= 1)) throw input_error("bench: subset fraction outside [0,1]");
  std::vector<BenchRow> rows;
  for (std::size_t n : opt.sizes) {
    if (n == 0) throw input_error("bench: sizes must be positive");
    const auto x = generate(opt.gen, opt.d, n, opt.seed + n);
    std::set<vertex_index> a;
    const auto k = static_cast<std::size_t>(std::floor(opt.subset_fraction * static_cast<double>(n)));
    for (vertex_index i = 0; i < k; ++i) a.insert(i);
    PipelineOptions popt;
    popt.s_factor = opt.s_factor;
    popt.seed = opt.seed;
    const auto r = run_pipeline({x, a}, popt);
    rows.push_back({n, opt.d, r.construction.complex.size(), r.construction.complex.subcomplex_size(), r.ms_complex,
                    r.ms_reduction});
  }
  return rows;
}

// Least-squares slope of log(cells) against log(n).
inline std::optional<double> growth_exponent(const std::vector<BenchRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (const auto& r : rows) {
    if (r.n_total < 2) continue;
    const double x = std::log(static_cast<double>(r.n_total)), y = std::log(static_cast<double>(r.cells_total));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  const double den = static_cast<double>(k) * sxx - sx * sx;
  if (k < 2 || den <= 0) return std::nullopt;
  return (static_cast<double>(k) * sxy - sx * sy) / den;
}

inline int bench(const BenchOptions& opt, std::ostream& out) {
  const auto rows = run_bench(opt);
  out << "n_total,d,cells_total,cells_subcomplex,wall_ms_delaunay,wall_ms_reduction\n";
  char buf[64];
  for (const auto& r : rows) {
    out << r.n_total << ',' << r.d << ',' << r.cells_total << ',' << r.cells_subcomplex << ',';
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", r.wall_ms_delaunay, r.wall_ms_reduction);
    out << buf << '\n';
  }
  const int lifted = opt.d + 1;
  const int worst_case = (lifted + 1) / 2;  // ceil((d+1)/2)
  if (const auto e = growth_exponent(rows)) {
    std::snprintf(buf, sizeof buf, "%.4f", *e);
    out << "# fitted exponent of cells_total vs n_total: " << buf << "\n";
  } else {
    out << "# fitted exponent of cells_total vs n_total: n/a (need two sizes >= 2)\n";
  }
  out << "# linear reading O(n * ceil((d+1)/2)) predicts exponent 1\n";
  out << "# worst-case reading O(n^ceil((d+1)/2)) predicts exponent " << worst_case << "\n";
  return success;
}

}  // namespace reldel::cli
