#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "reldel/cli.hpp"
#include "support/oracles.hpp"

using namespace reldel;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("reldel_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::string& args, const std::string& env = "") {
  const auto out = (scratch() / "stdout").string();
  const auto err = (scratch() / "stderr").string();
  const std::string cmd = env + " '" RELDEL_CLI_PATH "' " + args + " >'" + out + "' 2>'" + err + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

std::string random_csv(std::mt19937_64& rng, int n, int d) {
  std::ostringstream s;
  io::write_points(s, PointCloud(d, oracle::random_points(rng, n, d)));
  return s.str();
}

}  // namespace

TEST_CASE("csv parsing") {
  std::istringstream with_header("x,y\n0,0\n\n1.5, 2\n");
  const auto x = io::read_points(with_header);
  CHECK(x.dimension() == 2);
  CHECK(x.size() == 2);
  CHECK(x[1] == Point{1.5, 2});

  std::istringstream no_header("1e-3,2\n3,4\n");
  CHECK(io::read_points(no_header).size() == 2);

  std::istringstream bad("0,0\n1,1\n2,a\n");
  try {
    io::read_points(bad, "pts.csv");
    FAIL("accepted a bad row");
  } catch (const input_error& e) {
    CHECK(std::string(e.what()).find("pts.csv:3:") == 0);
  }
  std::istringstream ragged("0,0\n1\n");
  CHECK_THROWS_AS(io::read_points(ragged), input_error);
  std::istringstream dup("0,0\n1,1\n0,0\n");
  CHECK_THROWS_AS(io::read_points(dup), input_error);
  std::istringstream empty("x,y\n");
  CHECK_THROWS_AS(io::read_points(empty), input_error);
  std::istringstream nonfinite("0,inf\n");
  CHECK_THROWS_AS(io::read_points(nonfinite), input_error);
}

TEST_CASE("index parsing") {
  std::istringstream ok("2\n0\n\n");
  CHECK(io::read_indices(ok, 3) == std::set<vertex_index>{0, 2});
  std::istringstream range("3\n");
  CHECK_THROWS_AS(io::read_indices(range, 3), input_error);
  std::istringstream neg("-1\n");
  CHECK_THROWS_AS(io::read_indices(neg, 3), input_error);
  std::istringstream twice("1\n1\n");
  CHECK_THROWS_AS(io::read_indices(twice, 3), input_error);
}

TEST_CASE("compute reports relative and absolute barcodes") {
  const auto pts = write_file("two.csv", "x,y\n0,0\n2,0\n");
  const auto sub = write_file("a.txt", "0\n");
  auto r = run("compute " + pts + " --subset-indices " + sub);
  CHECK(r.code == 0);
  CHECK(r.out ==
        "{\"field\":\"GF(2)\",\"relative\":true,\"dims\":[{\"dim\":0,\"bars\":[[0.0,1.0]]},{\"dim\":1,\"bars\":[]},{"
        "\"dim\":2,\"bars\":[]}]}\n");
  r = run("compute " + pts);
  CHECK(r.code == 0);
  CHECK(r.out.find("\"relative\":false") != std::string::npos);
  CHECK(r.out.find("[0.0,null]") != std::string::npos);
  r = run("compute " + pts + " --max-dim 0");
  CHECK(r.out == "{\"field\":\"GF(2)\",\"relative\":false,\"dims\":[{\"dim\":0,\"bars\":[[0.0,1.0],[0.0,null]]}]}\n");
}

TEST_CASE("compute is invariant under the lift height") {
  std::mt19937_64 rng(600);
  for (int trial = 0; trial < 5; ++trial) {
    const auto pts = write_file("s.csv", random_csv(rng, 25, 2 + trial % 2));
    const auto sub = write_file("s.txt", "0\n3\n4\n7\n11\n12\n20\n");
    const auto a = run("compute " + pts + " --subset-indices " + sub);
    const auto b = run("compute " + pts + " --subset-indices " + sub + " --s-factor 4");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("output files") {
  std::mt19937_64 rng(601);
  const auto pts = write_file("f.csv", random_csv(rng, 30, 2));
  const auto sub = write_file("f.txt", "1\n2\n5\n");
  const auto json = (scratch() / "f.json").string();
  const auto svg = (scratch() / "f.svg").string();
  const auto dump = (scratch() / "f.cx").string();
  const auto r = run("compute " + pts + " --subset-indices " + sub + " --out " + json + " --svg " + svg +
                     " --dump-complex " + dump);
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());

  const auto b = barcode_from_json(nlohmann::ordered_json::parse(slurp(json)));
  CHECK(b.relative);
  const auto picture = slurp(svg);
  CHECK(picture.rfind("<svg", 0) == 0);
  std::size_t circles = 0;
  for (auto p = picture.find("<circle"); p != std::string::npos; p = picture.find("<circle", p + 1)) ++circles;
  CHECK(circles == b.size());

  // the dump rebuilds the same complex the pipeline produced
  std::ifstream dumped(dump);
  const auto c = read_complex(dumped);
  cli::Input in{io::read_points_file(pts), io::read_indices_file(sub, 30)};
  const auto direct = cli::run_pipeline(in, {}).construction.complex;
  REQUIRE(c.size() == direct.size());
  for (const auto& cell : direct.cells()) {
    const auto i = c.find(cell.simplex);
    REQUIRE(i);
    CHECK(c[*i] == cell);
  }
  CHECK(barcode(c, true, 2) == b);
}

TEST_CASE("check exit codes") {
  std::mt19937_64 rng(602);
  const auto pts = write_file("c.csv", random_csv(rng, 10, 2));
  const auto sub = write_file("c.txt", "0\n4\n5\n9\n");
  auto r = run("check " + pts + " --subset-indices " + sub, "RELDEL_SEED=17");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("MATCH", 0) == 0);

  r = run("check " + pts + " --subset-indices " + sub + " --json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["match"] == true);
  CHECK(j["embedding"]["x1_embedded"] == true);

  r = run("check " + pts + " --subset-indices " + sub + " --inject-fault");
  CHECK(r.code == 3);
  CHECK(r.out.rfind("MISMATCH", 0) == 0);

  const auto big = write_file("big.csv", random_csv(rng, 15, 2));
  r = run("check " + big);
  CHECK(r.code == 2);
  CHECK(r.err.find("oracle cap") != std::string::npos);
  CHECK(run("check " + big + " --oracle-cap 15").code == 0);
}

TEST_CASE("input errors exit with 2") {
  const auto dup = write_file("dup.csv", "0,0\n1,1\n0,0\n");
  auto r = run("compute " + dup);
  CHECK(r.code == 2);
  CHECK(r.err.find("duplicate point") != std::string::npos);

  const auto bad = write_file("bad.csv", "0,0\n1,x\n");
  r = run("compute " + bad);
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.csv:2:") != std::string::npos);

  CHECK(run("compute " + write_file("d4.csv", "0,0,0,0\n1,0,0,0\n")).code == 2);
  CHECK(run("compute " + (scratch() / "missing.csv").string()).code == 2);
  CHECK(run("compute " + write_file("ok.csv", "0\n1\n") + " --subset-indices " + write_file("oob.txt", "5\n")).code ==
        2);
  CHECK(run("compute " + write_file("ok2.csv", "0\n1\n") + " --s-factor 0.5").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("compute").code == 2);
  CHECK(run("compute " + write_file("ok3.csv", "0\n1\n"), "RELDEL_SEED=abc").code == 2);
}

TEST_CASE("bench") {
  auto r = run("bench --sizes 1");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("n_total,d,cells_total,cells_subcomplex,wall_ms_delaunay,wall_ms_reduction\n1,2,1,0,", 0) == 0);

  r = run("bench --generator uniform-box --dim 2 --sizes 50,100,200");
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  std::size_t previous = 0, rows = 0;
  while (std::getline(lines, line) && line[0] != '#') {
    std::istringstream f(line);
    std::string n, d, cells;
    std::getline(f, n, ',');
    std::getline(f, d, ',');
    std::getline(f, cells, ',');
    CHECK(std::stoul(cells) > previous);
    previous = std::stoul(cells);
    ++rows;
  }
  CHECK(rows == 3);
  CHECK(r.out.find("# fitted exponent") != std::string::npos);

  // counts (not timings) are reproducible
  auto counts = [](const std::string& out) {
    std::string kept;
    std::istringstream in(out);
    for (std::string l; std::getline(in, l);)
      if (l[0] != '#') kept += l.substr(0, l.find(',', l.find(',', l.find(',', l.find(',') + 1) + 1) + 1)) + "\n";
    return kept;
  };
  const auto a = run("bench --generator annulus --sizes 60,120 --seed 9");
  const auto b = run("bench --generator annulus --sizes 60,120 --seed 9");
  CHECK(a.code == 0);
  CHECK(counts(a.out) == counts(b.out));
  CHECK(run("bench --generator sphere --dim 3 --sizes 40").code == 0);
  CHECK(run("bench --generator torus").code == 2);
}
