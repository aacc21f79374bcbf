#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hyp/cli.hpp"
#include "hyp/hardness.hpp"
#include "hyp/io.hpp"
#include "hyp/separator.hpp"
#include "hyp/solvers.hpp"
#include "hyp/tiling.hpp"
#include "json.hpp"

using namespace hyp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
  fs::path p = fs::temp_directory_path() / "hyptw_tests";
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  REQUIRE(out.good());
  out << text;
}

// Runs the CLI, requiring success, and returns the parsed --json report.
json cli_json(std::vector<std::string> args) {
  args.push_back("--json");
  std::ostringstream out, err;
  int rc = run_cli(args, out, err);
  INFO(err.str());
  REQUIRE(rc == 0);
  return json::parse(out.str());
}

int cli_rc(const std::vector<std::string>& args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int rc = run_cli(args, out, err);
  if (err_text) *err_text = err.str();
  return rc;
}

// Radial CDF of the uniform ball measure: normalized integral of sinh^{d-1}.
double radial_cdf(int d, double r, double R) {
  auto anti = [d](double x) {
    if (d == 2) return std::cosh(x) - 1.0;
    return (std::sinh(x) * std::cosh(x) - x) / 2.0;  // d == 3
  };
  return anti(r) / anti(R);
}

}  // namespace

TEST_CASE("uniform ball sampling: empty input, radius guard, radial law") {
  GenPointsSpec gp;
  gp.kind = GenPointsSpec::uniform_ball;
  gp.d = 2;
  gp.seed = 5;
  gp.R = 3.0;

  gp.n = 0;
  CHECK(gen_points(gp).empty());

  gp.n = 1;
  gp.R = 40.0;
  CHECK_THROWS_AS(gen_points(gp), std::invalid_argument);
  gp.R = 0.0;
  CHECK_THROWS_AS(gen_points(gp), std::invalid_argument);
  gp.n = -1;
  gp.R = 1.0;
  CHECK_THROWS_AS(gen_points(gp), std::invalid_argument);

  // Kolmogorov-Smirnov distance between empirical radii and the closed-form
  // radial CDF, at 1e5 samples per dimension.
  for (int d : {2, 3}) {
    gp.d = d;
    gp.n = 100000;
    gp.R = 4.0;
    gp.seed = 11 + static_cast<uint64_t>(d);
    std::vector<HPoint> pts = gen_points(gp);
    REQUIRE(pts.size() == 100000);
    std::vector<double> rad;
    for (const HPoint& p : pts) {
      double r = radius(p);
      CHECK(r <= gp.R + 1e-9);
      rad.push_back(r);
    }
    std::sort(rad.begin(), rad.end());
    double ks = 0.0;
    for (size_t i = 0; i < rad.size(); ++i) {
      double f = radial_cdf(d, rad[i], gp.R);
      ks = std::max(ks, std::abs(f - static_cast<double>(i) / rad.size()));
      ks = std::max(ks, std::abs(static_cast<double>(i + 1) / rad.size() - f));
    }
    CHECK(ks < 0.02);
  }
}

TEST_CASE("per-tile layout fills every ball tile with the same count") {
  GenPointsSpec gp;
  gp.kind = GenPointsSpec::per_tile;
  gp.d = 2;
  gp.seed = 9;
  gp.n = 1024;  // count = 32 per tile of B(o, ln 32)
  std::vector<HPoint> pts = gen_points(gp);
  REQUIRE(!pts.empty());
  CHECK(pts.size() % 32 == 0);

  SquareTilingSpec st = square_tiling(2, gp.delta);
  std::map<std::string, int> occupancy;
  for (const HPoint& p : pts) occupancy[locate(st, p).str()]++;
  CHECK(occupancy.size() == pts.size() / 32);
  for (const auto& [tile, c] : occupancy) CHECK(c == 32);

  // the tiles are exactly those with centers in the ball
  double R = std::log(32.0);
  for (const HPoint& p : pts) CHECK(radius(p) <= R + 2.0 * st.circumradius);

  GenPointsSpec bad = gp;
  bad.n = 0;
  CHECK_THROWS_AS(gen_points(bad), std::invalid_argument);
  bad.d = 3;
  bad.n = 16;
  CHECK_THROWS_AS(gen_points(bad), std::invalid_argument);
}

TEST_CASE("per-tile tight example: separator weight tracks log^2 n") {
  std::vector<double> ratio;
  for (int n : {256, 1024, 4096}) {
    GenPointsSpec gp;
    gp.kind = GenPointsSpec::per_tile;
    gp.d = 2;
    gp.seed = 9;
    gp.n = n;
    std::vector<HPoint> pts = gen_points(gp);
    NubgInstance inst = build_graph(pts, 0.52, 1.0);
    CliqueSeparator sep = find_separator(inst, square_tiling(2, 0.52 * 0.99), 64, 9);
    double l2 = std::log2(static_cast<double>(pts.size()));
    ratio.push_back(sep.weight / (l2 * l2));
  }
  // weight / log2^2(n) stays in a narrow band while n grows 17x
  for (double r : ratio) {
    CHECK(r > 0.5);
    CHECK(r < 3.0);
  }
  CHECK(*std::max_element(ratio.begin(), ratio.end()) <
        2.0 * *std::min_element(ratio.begin(), ratio.end()));
}

TEST_CASE("horosphere grid matches the flat-to-hyperbolic distance law") {
  GenPointsSpec gp;
  gp.kind = GenPointsSpec::horosphere_grid;
  gp.d = 3;
  gp.seed = 0;
  gp.side = 4;
  std::vector<HPoint> pts = gen_points(gp);
  REQUIRE(pts.size() == 16);
  // point i corresponds to lattice coordinates (i % 4, i / 4)
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      double dx = static_cast<double>(i % 4) - static_cast<double>(j % 4);
      double dy = static_cast<double>(i / 4) - static_cast<double>(j / 4);
      double eu = std::sqrt(dx * dx + dy * dy);
      CHECK(dist(pts[i], pts[j]) == doctest::Approx(2.0 * std::asinh(eu / 2.0)).epsilon(1e-9));
    }
  gp.side = 0;
  CHECK_THROWS_AS(gen_points(gp), std::invalid_argument);
}

TEST_CASE("file formats round-trip") {
  fs::path dir = tmp_dir();
  Rng rng(3);
  std::vector<HPoint> pts;
  for (int i = 0; i < 40; ++i) pts.push_back(random_ball_point(2, 3.0, rng));

  write_points_file((dir / "rt.points").string(), pts);
  std::vector<HPoint> back = read_points_file((dir / "rt.points").string());
  REQUIRE(back.size() == pts.size());
  // acosh noise makes dist() ~1e-8 even for identical points; compare coords
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = 0; j < pts[i].x.size(); ++j)
      CHECK(back[i].x[j] == doctest::Approx(pts[i].x[j]).epsilon(1e-12));

  NubgInstance inst = build_graph(pts, 0.6, 1.2, NoisePolicy::bernoulli_policy(0.5, 4));
  write_nubg_file((dir / "rt.graph").string(), inst);
  NubgInstance ginst = read_nubg_file((dir / "rt.graph").string());
  CHECK(ginst.g.n == inst.g.n);
  CHECK(ginst.rho == inst.rho);
  CHECK(ginst.nu == inst.nu);
  CHECK(ginst.g.edges() == inst.g.edges());

  Partition part = tiling_partition(inst);
  write_partition_file((dir / "rt.part").string(), part);
  Partition pback = read_partition_file((dir / "rt.part").string(), inst.g.n);
  CHECK(pback.classes == part.classes);
  CHECK(pback.class_of == part.class_of);

  WeightedTreeDecomposition wtd = pipeline_decompose(inst, 3);
  int nc = static_cast<int>(wtd.partition.classes.size());
  write_wtd_file((dir / "rt.wtd").string(), wtd, nc);
  WeightedTreeDecomposition wback = read_wtd_file((dir / "rt.wtd").string());
  CHECK(wback.bags == wtd.bags);
  CHECK(wback.tree.edges() == wtd.tree.edges());
  CHECK(wback.bag_weights == wtd.bag_weights);
  CHECK(wback.weighted_width == doctest::Approx(wtd.weighted_width));

  TreeDecomposition td = heuristic_decompose(inst.g);
  write_td_file((dir / "rt.td").string(), td, inst.g.n);
  TreeDecomposition tback = read_td_file((dir / "rt.td").string());
  CHECK(tback.bags == td.bags);
  CHECK(tback.tree.edges() == td.tree.edges());

  GridTilingInstance gt;
  gt.k = 2;
  gt.N = 3;
  gt.mode = GridTilingInstance::leq;
  gt.sets = {{{{1, 2}}, {{2, 2}, {3, 1}}}, {{{1, 1}}, {{2, 3}}}};
  CHECK(read_gt_json(write_gt_json(gt)).sets == gt.sets);
}

TEST_CASE("malformed files fail with the offending line number") {
  fs::path dir = tmp_dir();
  spit(dir / "bad.points", "hyperboloid,2,1,0,0\nball,2,0.1\n");
  std::string msg;
  try {
    read_points_file((dir / "bad.points").string());
  } catch (const std::exception& e) {
    msg = e.what();
  }
  CHECK(msg.find("line 2") != std::string::npos);

  spit(dir / "bad.graph", "p nubg 3 1 0.5 1\ne 1 9\n");
  msg.clear();
  try {
    read_nubg_file((dir / "bad.graph").string());
  } catch (const std::exception& e) {
    msg = e.what();
  }
  CHECK(msg.find("line 2") != std::string::npos);

  spit(dir / "bad.td", "s td 2 2 3\nb 1 1 2\nb 7 3\n1 2\n");
  msg.clear();
  try {
    read_td_file((dir / "bad.td").string());
  } catch (const std::exception& e) {
    msg = e.what();
  }
  CHECK(msg.find("line 3") != std::string::npos);

  spit(dir / "bad.part", "c 1 1 2\nq 2 3\n");
  msg.clear();
  try {
    read_partition_file((dir / "bad.part").string(), 3);
  } catch (const std::exception& e) {
    msg = e.what();
  }
  CHECK(msg.find("line 2") != std::string::npos);
}

TEST_CASE("cli pipeline: gen, build, partition, separator, decompose, solve") {
  fs::path dir = tmp_dir();
  std::string pts = (dir / "cli.points").string();
  std::string grf = (dir / "cli.graph").string();

  json g = cli_json({"gen-points", "--kind", "uniform_ball", "--n", "400", "--R", "3.5",
                     "--seed", "21", "--out", pts});
  CHECK(g["points"] == 400);

  // n = 0 writes an empty file
  std::string empty = (dir / "empty.points").string();
  cli_json({"gen-points", "--kind", "uniform_ball", "--n", "0", "--R", "1", "--seed", "1",
            "--out", empty});
  CHECK(slurp(empty).empty());

  json b = cli_json({"build-graph", "--points", pts, "--rho", "0.5", "--out", grf});
  CHECK(b["n"] == 400);

  json p = cli_json({"partition", "--graph", grf, "--points", pts, "--seed", "21", "--out",
                     (dir / "cli.part").string()});
  CHECK(p["classes"].get<int>() > 1);
  Partition part = read_partition_file((dir / "cli.part").string(), 400);
  CHECK(part.classes.size() == p["classes"].get<size_t>());

  json s = cli_json({"separator", "--graph", grf, "--points", pts, "--seed", "21", "--out",
                     (dir / "cli.sep").string()});
  CHECK(s["balanced"] == true);
  CHECK(s["size"].get<int>() > 0);

  json d = cli_json({"decompose", "--graph", grf, "--points", pts, "--seed", "21", "--out",
                     (dir / "cli.wtd").string()});
  CHECK(d["bags"].get<int>() >= 1);
  CHECK(fs::exists(dir / "cli.wtd"));

  // identical command + seed => byte-identical outputs
  std::string pts2 = (dir / "cli2.points").string();
  cli_json({"gen-points", "--kind", "uniform_ball", "--n", "400", "--R", "3.5", "--seed",
            "21", "--out", pts2});
  CHECK(slurp(pts) == slurp(pts2));

  // error paths: missing subcommand, unknown problem, seed required
  CHECK(cli_rc({}) != 0);
  CHECK(cli_rc({"solve", "--problem", "foo", "--graph", grf, "--points", pts, "--seed",
                "1"}) != 0);
  CHECK(cli_rc({"separator", "--graph", grf, "--points", pts}) != 0);
  std::string msg;
  CHECK(cli_rc({"build-graph", "--points", pts, "--rho", "0.5", "--policy", "bernoulli",
                "--out", grf + ".b"},
               &msg) != 0);
  CHECK(msg.find("seed") != std::string::npos);
}

TEST_CASE("solve on the bundled ten-vertex fixture gives the known answers") {
  std::string grf = std::string(DATA_DIR) + "/is10.graph";
  std::string pts = std::string(DATA_DIR) + "/is10.points";
  NubgInstance inst = read_nubg_file(grf);
  inst.points = read_points_file(pts);
  REQUIRE(inst.g.n == 10);

  json is = cli_json({"solve", "--problem", "is", "--graph", grf, "--points", pts, "--seed",
                      "3"});
  CHECK(is["answer"] == 4);
  std::vector<int> wit;
  for (int v : is["witness"]) wit.push_back(v - 1);
  CHECK(is_independent_set(inst.g, wit));
  CHECK(brute_force(Problem::is, inst.g) == 4);

  json vc = cli_json({"solve", "--problem", "vc", "--graph", grf, "--points", pts, "--seed",
                      "3"});
  CHECK(vc["answer"].get<int>() == brute_force(Problem::vc, inst.g));
  json ds = cli_json({"solve", "--problem", "ds", "--graph", grf, "--points", pts, "--seed",
                      "3"});
  CHECK(ds["answer"].get<int>() == brute_force(Problem::ds, inst.g));
  json qc = cli_json({"solve", "--problem", "qcol", "--graph", grf, "--points", pts,
                      "--seed", "3", "--q", "3"});
  CHECK(qc["colorable"].get<bool>() == (brute_force(Problem::qcol, inst.g, 3) == 1));
}

TEST_CASE("experiment harness: schema, reproducibility, oracle column, round trip") {
  fs::path dir = tmp_dir();

  // empty schedule -> header-only CSV
  spit(dir / "empty.json", R"({"exp":"separator-scaling","n":[],"seeds":[]})");
  json e0 = cli_json({"experiment", "--config", (dir / "empty.json").string(), "--out",
                      (dir / "empty.csv").string()});
  CHECK(e0["rows"] == 0);
  CHECK(slurp(dir / "empty.csv") == "exp,n,d,seed,trial,stage,metric,value,status\n");

  // invalid configs
  CHECK_THROWS_AS(parse_experiment_config(R"({"exp":"separator-scaling","n":[512,256],"seeds":[1]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config(R"({"exp":"nope","n":[4],"seeds":[1]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config(R"({"exp":"separator-scaling","n":[4],"seeds":[]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config("{oops"), std::invalid_argument);

  // solver-equivalence on the fixture's generation cell
  spit(dir / "solver.json",
       R"({"exp":"solver-equivalence","n":[8,10],"seeds":[131],"trials":2,"rho":0.5})");
  cli_json({"experiment", "--config", (dir / "solver.json").string(), "--out",
            (dir / "solver.csv").string()});
  std::string csv = slurp(dir / "solver.csv");

  // byte-identical on a second run
  cli_json({"experiment", "--config", (dir / "solver.json").string(), "--out",
            (dir / "solver2.csv").string()});
  CHECK(csv == slurp(dir / "solver2.csv"));

  // parse rows: 9 columns, all ok, oracle all 1, and n=10/seed=131/trial=0 is_size
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "exp,n,d,seed,trial,stage,metric,value,status");
  int oracle_rows = 0, is_size_10 = -1;
  while (std::getline(lines, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(tok);
    REQUIRE(f.size() == 9);
    CHECK(f[0] == "solver-equivalence");
    CHECK(f[8] == "ok");
    if (f[6] == "matches_oracle") {
      ++oracle_rows;
      CHECK(f[7] == "1");
    }
    if (f[1] == "10" && f[4] == "0" && f[6] == "is_size") is_size_10 = std::stoi(f[7]);
  }
  CHECK(oracle_rows == 4);  // two n values x two trials
  REQUIRE(is_size_10 >= 0);

  // decompose-then-solve round trip on the same cell equals the experiment row
  std::string grf = std::string(DATA_DIR) + "/is10.graph";
  std::string pts = std::string(DATA_DIR) + "/is10.points";
  cli_json({"decompose", "--graph", grf, "--points", pts, "--seed", "131", "--out",
            (dir / "rtrip.wtd").string()});
  json is = cli_json({"solve", "--problem", "is", "--graph", grf, "--points", pts, "--seed",
                      "131"});
  CHECK(is["answer"].get<int>() == is_size_10);

  // separator-scaling: stage rows present and the bundled fit script accepts them
  spit(dir / "sep.json", R"({"exp":"separator-scaling","n":[256,512],"seeds":[2]})");
  json es = cli_json({"experiment", "--config", (dir / "sep.json").string(), "--out",
                      (dir / "sep.csv").string()});
  CHECK(es["rows"].get<int>() > 0);
  std::string sepcsv = slurp(dir / "sep.csv");
  CHECK(sepcsv.find("separator,weight") != std::string::npos);
  CHECK(sepcsv.find("separator,size") != std::string::npos);
  CHECK(sepcsv.find("separator,balance") != std::string::npos);
  std::string cmd = std::string("python3 ") + SCRIPTS_DIR + "/fit_scaling.py " +
                    (dir / "sep.csv").string() +
                    " --stage separator --metric weight --x log2n > " +
                    (dir / "fit.out").string();
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(slurp(dir / "fit.out").find("slope") != std::string::npos);
}

TEST_CASE("lowerbound command emits a coherent embedded instance") {
  fs::path dir = tmp_dir();
  std::string prefix = (dir / "lb").string();
  json rep = cli_json({"lowerbound", "--k", "2", "--N", "3", "--seed", "7", "--out", prefix});
  CHECK(rep["k"] == 2);
  CHECK(rep["N"] == 3);

  GridTilingInstance gt = read_gt_json(slurp(prefix + ".gt.json"));
  CHECK(gt.k == 2);
  CHECK(gt.N == 3);
  CHECK(gt.mode == GridTilingInstance::leq);

  // vertex count formula: one copy per cell element plus N copies per arc
  // interior vertex of the embedding
  GridEmbedding emb = build_grid_embedding(4, 2);
  long long expect = 0;
  for (const auto& row : gt.sets)
    for (const auto& cell : row) expect += static_cast<long long>(cell.size());
  for (const auto& arc : emb.arcs)
    expect += static_cast<long long>(gt.N) * static_cast<long long>(arc.seq.size() - 2);
  CHECK(rep["vertices"].get<long long>() == expect);

  NubgInstance inst = read_nubg_file(prefix + ".graph");
  inst.points = read_points_file(prefix + ".points");
  CHECK(inst.g.n == expect);
  CHECK(static_cast<long long>(inst.points.size()) == expect);
  CHECK(inst.rho == doctest::Approx(emb.rho));
  CHECK(rep["r0"].get<double>() ==
        doctest::Approx(std::asinh(std::sinh(4.0 * emb.delta) * 4.0)));
  CHECK(rep["beta"].get<double>() == doctest::Approx(std::numbers::pi / 2.0));

  // reproduce in-process and compare targets
  IsReduction red = gtleq_to_is(gt, emb);
  CHECK(rep["target"].get<int>() == red.target);
  CHECK(red.inst.g.edges() == inst.g.edges());
}
