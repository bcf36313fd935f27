#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "reldel/cli.hpp"

using namespace reldel;

namespace {

struct Common {
  std::string points;
  std::string subset;
  double s_factor = 2.0;
  std::optional<int> max_dim;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("points", c.points, "CSV file, one point per line")->required();
  cmd->add_option("--subset-indices", c.subset, "file of 0-based indices of the subset A");
  cmd->add_option("--s-factor", c.s_factor, "lift height as a multiple of the largest alpha value")
      ->capture_default_str();
  cmd->add_option("--max-dim", c.max_dim, "highest homology dimension reported (default: data dimension)");
  cmd->add_option("--seed", c.seed, "insertion-order seed (default: RELDEL_SEED or a fixed value)");
}

cli::Input load(const Common& c) {
  cli::Input in{io::read_points_file(c.points), std::nullopt};
  if (!c.subset.empty()) in.subset = io::read_indices_file(c.subset, in.points.size());
  return in;
}

cli::PipelineOptions pipeline(const Common& c) {
  cli::PipelineOptions p;
  p.s_factor = c.s_factor;
  p.max_dim = c.max_dim;
  p.seed = c.seed ? *c.seed : cli::seed_from_env();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative persistent homology of point-cloud pairs via a relative Delaunay-Cech complex"};
  app.require_subcommand(1);

  Common compute_args;
  cli::ComputeOptions compute_opts;
  auto* compute = app.add_subcommand("compute", "write the relative barcode as JSON");
  add_common(compute, compute_args);
  compute->add_option("--out", compute_opts.out_path, "write the JSON here instead of stdout");
  compute->add_option("--svg", compute_opts.svg_path, "write a persistence diagram");
  compute->add_option("--dump-complex", compute_opts.dump_path, "write the filtered complex as text");

  Common check_args;
  cli::CheckOptions check_opts;
  auto* check = app.add_subcommand("check", "compare against the brute-force relative Cech complex");
  add_common(check, check_args);
  check->add_option("--tol", check_opts.tol, "endpoint tolerance")->capture_default_str();
  check->add_option("--oracle-cap", check_opts.oracle_cap, "largest point count the oracle accepts")
      ->capture_default_str();
  check->add_flag("--json", check_opts.json, "print the report as JSON");
  check->add_flag("--inject-fault", check_opts.inject_fault, "corrupt one filtration value (negative control)");

  cli::BenchOptions bench_opts;
  std::string generator_name = "uniform-box";
  std::optional<std::uint64_t> bench_seed;
  bench_opts.sizes = {100, 200, 500, 1000, 2000};
  auto* bench = app.add_subcommand("bench", "report complex sizes and timings as CSV");
  bench->add_option("--generator", generator_name, "uniform-box, annulus or sphere")->capture_default_str();
  bench->add_option("--dim", bench_opts.d, "data dimension")->capture_default_str();
  bench->add_option("--sizes", bench_opts.sizes, "point counts")->delimiter(',')->capture_default_str();
  bench->add_option("--subset-fraction", bench_opts.subset_fraction, "share of each sample placed in A")
      ->capture_default_str();
  bench->add_option("--s-factor", bench_opts.s_factor, "lift height factor")->capture_default_str();
  bench->add_option("--seed", bench_seed, "generator seed (default: RELDEL_SEED or a fixed value)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::bad_input;
  }

  try {
    if (*compute) return cli::compute(load(compute_args), {pipeline(compute_args), compute_opts.out_path,
                                                           compute_opts.svg_path, compute_opts.dump_path},
                                      std::cout);
    if (*check) {
      check_opts.pipeline = pipeline(check_args);
      return cli::check(load(check_args), check_opts, std::cout);
    }
    if (*bench) {
      bench_opts.gen = parse_generator(generator_name);
      bench_opts.seed = bench_seed ? *bench_seed : cli::seed_from_env();
      return cli::bench(bench_opts, std::cout);
    }
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::bad_input;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return cli::internal;
  }
  return cli::internal;
}
