#include "hyp/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "hyp/hardness.hpp"
#include "hyp/io.hpp"
#include "hyp/separator.hpp"
#include "hyp/solvers.hpp"
#include "hyp/tiling.hpp"
#include "json.hpp"

namespace hyp {

namespace {

using nlohmann::json;

std::vector<HPoint> gen_uniform_ball(const GenPointsSpec& spec, Rng& rng) {
  if (spec.d < 2) throw std::invalid_argument("gen_points: d must be at least 2");
  if (!(spec.R > 0.0)) throw std::invalid_argument("gen_points: uniform_ball needs R > 0");
  if (spec.R > 34.0)
    throw std::invalid_argument("gen_points: R exceeds the working radius guard (34)");
  std::vector<HPoint> pts;
  pts.reserve(static_cast<size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) pts.push_back(random_ball_point(spec.d, spec.R, rng));
  return pts;
}

std::vector<HPoint> gen_per_tile(const GenPointsSpec& spec, Rng& rng) {
  if (spec.d != 2) throw std::invalid_argument("gen_points: per_tile is planar (d = 2)");
  int count = spec.count;
  double R = spec.R;
  if (count <= 0 || R <= 0.0) {
    if (spec.n <= 0)
      throw std::invalid_argument("gen_points: per_tile needs n > 0 or explicit count and R");
    double sq = std::sqrt(static_cast<double>(spec.n));
    if (count <= 0) count = std::max(1, static_cast<int>(std::llround(sq)));
    if (R <= 0.0) R = std::log(std::max(2.0, sq));
  }
  if (R > 34.0)
    throw std::invalid_argument("gen_points: R exceeds the working radius guard (34)");
  SquareTilingSpec st = square_tiling(2, spec.delta);

  // every tile whose center lies in B(o, R), in (level, lateral) order
  std::vector<TileId> tiles;
  double ls = std::log(st.s + 1.0);
  long long levels = static_cast<long long>(std::ceil(R / ls)) + 2;
  for (long long b = -levels; b <= levels; ++b) {
    double span = st.s * std::pow(st.s + 1.0, static_cast<double>(b));
    long long lat = static_cast<long long>(std::ceil(std::sinh(R) / span)) + 2;
    for (long long a = -lat; a <= lat; ++a) {
      TileId t{{a}, b};
      if (radius(tile_center(st, t)) <= R) tiles.push_back(t);
    }
  }

  std::vector<HPoint> pts;
  pts.reserve(tiles.size() * static_cast<size_t>(count));
  for (const TileId& t : tiles) {
    TileBox box = tile_box(st, t);
    for (int i = 0; i < count; ++i) {
      Vec c(static_cast<size_t>(spec.d));
      for (int j = 0; j < spec.d; ++j)
        c[static_cast<size_t>(j)] =
            std::uniform_real_distribution<double>(box.lo[static_cast<size_t>(j)],
                                                   box.hi[static_cast<size_t>(j)])(rng);
      pts.push_back(from_model(Model::halfspace, c));
    }
  }
  return pts;
}

std::vector<HPoint> gen_horosphere_grid(const GenPointsSpec& spec) {
  if (spec.d < 2) throw std::invalid_argument("gen_points: d must be at least 2");
  if (spec.side < 1) throw std::invalid_argument("gen_points: horosphere_grid needs side >= 1");
  int axes = spec.d - 1;
  std::vector<HPoint> pts;
  std::vector<int> idx(static_cast<size_t>(axes), 0);
  for (;;) {
    Vec x(static_cast<size_t>(axes));
    for (int j = 0; j < axes; ++j) x[static_cast<size_t>(j)] = idx[static_cast<size_t>(j)];
    pts.push_back(horosphere_embed(x, 1.0));
    int j = 0;
    while (j < axes && ++idx[static_cast<size_t>(j)] == spec.side) idx[static_cast<size_t>(j++)] = 0;
    if (j == axes) break;
  }
  return pts;
}

WeightedTreeDecomposition quotient_wtd(const NubgInstance& inst) {
  Partition part = tiling_partition(inst);
  QuotientGraph q = contract(inst.g, part);
  TreeDecomposition td = heuristic_decompose(q.g);
  WeightedTreeDecomposition w;
  w.bags = td.bags;
  w.tree = td.tree;
  for (const auto& b : td.bags) {
    double s = 0.0;
    for (int c : b) s += q.weight[static_cast<size_t>(c)];
    w.bag_weights.push_back(s);
    w.weighted_width = std::max(w.weighted_width, s);
  }
  w.partition = std::move(part);
  return w;
}

NubgInstance load_instance(const std::string& graph_path, const std::string& points_path) {
  NubgInstance inst = read_nubg_file(graph_path);
  inst.points = read_points_file(points_path);
  if (static_cast<int>(inst.points.size()) != inst.g.n)
    throw std::runtime_error("point file has " + std::to_string(inst.points.size()) +
                             " points but the graph has " + std::to_string(inst.g.n) +
                             " vertices");
  return inst;
}

std::string fmt_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void emit_report(std::ostream& out, const json& rep, bool as_json) {
  if (as_json) {
    out << rep.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : rep.items()) {
    out << k << ": ";
    if (v.is_string())
      out << v.get<std::string>();
    else
      out << v.dump();
    out << "\n";
  }
}

// ----- experiment harness -----

struct CellContext {
  const ExperimentConfig& cfg;
  std::ostream& csv;
  int n = 0;
  uint64_t seed = 0;
  int trial = 0;
  bool alive = true;  // false after an error or a ceiling overrun

  void row(const std::string& stage, const std::string& metric, const std::string& value,
           const std::string& status) {
    csv << cfg.exp << "," << n << "," << cfg.d << "," << seed << "," << trial << "," << stage
        << "," << metric << "," << value << "," << status << "\n";
  }

  // Runs one stage, emits its metric rows, and marks errors/overruns.
  template <typename Fn>
  void stage(const std::string& name, Fn&& work) {
    if (!alive) return;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<std::string, std::string>> metrics;
    std::string status = "ok";
    try {
      work(metrics);
    } catch (const std::exception& e) {
      std::string what = e.what();
      for (char& c : what)
        if (c == ',' || c == '\n') c = ';';
      row(name, "error", what, "error");
      alive = false;
      return;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > cfg.stage_ceiling_s) {
      status = "timeout";
      alive = false;  // the stage result is marked and kept, downstream stages are skipped
    }
    if (cfg.report_seconds) row(name, "seconds", fmt_value(secs), status);
    for (const auto& [metric, value] : metrics) row(name, metric, value, status);
  }
};

void run_separator_cell(CellContext& ctx) {
  uint64_t cell_seed = ctx.seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(ctx.trial);
  double R = std::acosh(1.0 + ctx.n / (16.0 * std::numbers::pi));
  std::vector<HPoint> pts;
  NubgInstance inst;
  ctx.stage("gen", [&](auto& m) {
    GenPointsSpec gp;
    gp.kind = GenPointsSpec::uniform_ball;
    gp.n = ctx.n;
    gp.d = ctx.cfg.d;
    gp.seed = cell_seed;
    gp.R = R;
    pts = gen_points(gp);
    m.emplace_back("points", std::to_string(pts.size()));
  });
  ctx.stage("build", [&](auto& m) {
    inst = build_graph(pts, ctx.cfg.rho, ctx.cfg.nu);
    m.emplace_back("edges", std::to_string(inst.g.edge_count()));
  });
  ctx.stage("separator", [&](auto& m) {
    SquareTilingSpec spec = square_tiling(ctx.cfg.d, ctx.cfg.rho * 0.99);
    CliqueSeparator sep = find_separator(inst, spec, 64, cell_seed);
    m.emplace_back("size", std::to_string(sep.size));
    m.emplace_back("weight", fmt_value(sep.weight));
    m.emplace_back("balance", fmt_value(sep.balance));
  });
}

void run_solver_cell(CellContext& ctx) {
  uint64_t cell_seed = ctx.seed + 0x9e3779b97f4a7c15ULL * static_cast<uint64_t>(ctx.trial);
  std::vector<HPoint> pts;
  NubgInstance inst;
  WeightedTreeDecomposition wtd;
  int answer = -1;
  ctx.stage("gen", [&](auto& m) {
    GenPointsSpec gp;
    gp.kind = GenPointsSpec::uniform_ball;
    gp.n = ctx.n;
    gp.d = ctx.cfg.d;
    gp.seed = cell_seed;
    gp.R = 2.0;
    pts = gen_points(gp);
    m.emplace_back("points", std::to_string(pts.size()));
  });
  ctx.stage("build", [&](auto& m) {
    inst = build_graph(pts, ctx.cfg.rho, ctx.cfg.nu);
    m.emplace_back("edges", std::to_string(inst.g.edge_count()));
  });
  ctx.stage("decompose", [&](auto& m) {
    wtd = pipeline_decompose(inst, cell_seed);
    m.emplace_back("width", fmt_value(wtd.weighted_width));
  });
  ctx.stage("solve", [&](auto& m) {
    SolveResult r = solve_is(inst.g, wtd, wtd.partition);
    answer = r.size;
    m.emplace_back("is_size", std::to_string(answer));
  });
  ctx.stage("oracle", [&](auto& m) {
    if (inst.g.n > 20) {
      m.emplace_back("matches_oracle", "skipped");
      return;
    }
    int want = brute_force(Problem::is, inst.g);
    m.emplace_back("matches_oracle", answer == want ? "1" : "0");
  });
}

}  // namespace

std::vector<HPoint> gen_points(const GenPointsSpec& spec) {
  if (spec.n < 0) throw std::invalid_argument("gen_points: n must be nonnegative");
  Rng rng(spec.seed);
  switch (spec.kind) {
    case GenPointsSpec::uniform_ball:
      return gen_uniform_ball(spec, rng);
    case GenPointsSpec::per_tile:
      return gen_per_tile(spec, rng);
    case GenPointsSpec::horosphere_grid:
      return gen_horosphere_grid(spec);
  }
  throw std::invalid_argument("gen_points: unknown kind");
}

WeightedTreeDecomposition pipeline_decompose(const NubgInstance& inst, uint64_t seed) {
  int d = inst.points.empty() ? 2 : inst.points.front().dim();
  try {
    return decompose_by_separators(inst, square_tiling(d, inst.rho * 0.99), 8, seed);
  } catch (const SeparatorError&) {
  } catch (const std::invalid_argument&) {
  }
  return quotient_wtd(inst);
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("experiment config: ") + e.what());
  }
  ExperimentConfig cfg;
  if (!j.contains("exp") || !j["exp"].is_string())
    throw std::invalid_argument("experiment config: missing string field 'exp'");
  cfg.exp = j["exp"].get<std::string>();
  if (cfg.exp != "separator-scaling" && cfg.exp != "solver-equivalence")
    throw std::invalid_argument("experiment config: unknown exp '" + cfg.exp + "'");
  if (!j.contains("n") || !j["n"].is_array())
    throw std::invalid_argument("experiment config: missing array field 'n'");
  for (const auto& v : j["n"]) cfg.n_schedule.push_back(v.get<int>());
  for (size_t i = 0; i + 1 < cfg.n_schedule.size(); ++i)
    if (cfg.n_schedule[i] >= cfg.n_schedule[i + 1])
      throw std::invalid_argument("experiment config: n schedule must be strictly increasing");
  if (!j.contains("seeds") || !j["seeds"].is_array())
    throw std::invalid_argument("experiment config: missing array field 'seeds'");
  for (const auto& v : j["seeds"]) cfg.seeds.push_back(v.get<uint64_t>());
  if (!cfg.n_schedule.empty() && cfg.seeds.empty())
    throw std::invalid_argument("experiment config: seeds must be explicit");
  cfg.d = j.value("d", 2);
  cfg.rho = j.value("rho", 0.5);
  cfg.nu = j.value("nu", 1.0);
  cfg.trials = j.value("trials", 1);
  cfg.stage_ceiling_s = j.value("stage_ceiling_s", 120.0);
  cfg.report_seconds = j.value("report_seconds", false);
  if (cfg.trials < 1) throw std::invalid_argument("experiment config: trials must be positive");
  return cfg;
}

void run_experiment(const ExperimentConfig& cfg, std::ostream& csv) {
  csv << "exp,n,d,seed,trial,stage,metric,value,status\n";
  for (int n : cfg.n_schedule)
    for (uint64_t seed : cfg.seeds)
      for (int trial = 0; trial < cfg.trials; ++trial) {
        CellContext ctx{cfg, csv, n, seed, trial};
        if (cfg.exp == "separator-scaling")
          run_separator_cell(ctx);
        else
          run_solver_cell(ctx);
      }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"hyperbolic ball-graph toolkit"};
  app.require_subcommand(1);

  // gen-points
  auto* gen = app.add_subcommand("gen-points", "generate a point cloud");
  std::string g_kind, g_out, g_model = "hyperboloid";
  GenPointsSpec gspec;
  bool g_json = false;
  gen->add_option("--kind", g_kind, "uniform_ball | per_tile | horosphere_grid")->required();
  gen->add_option("--n", gspec.n, "point count / per-tile budget");
  gen->add_option("--d", gspec.d, "dimension")->default_val(2);
  gen->add_option("--seed", gspec.seed, "rng seed")->required();
  gen->add_option("--R", gspec.R, "ball radius");
  gen->add_option("--count", gspec.count, "per_tile: points per tile");
  gen->add_option("--delta", gspec.delta, "per_tile: tile diameter")->default_val(1.0);
  gen->add_option("--side", gspec.side, "horosphere_grid: lattice side");
  gen->add_option("--model", g_model, "output coordinate model");
  gen->add_option("--out", g_out, "output point file")->required();
  gen->add_flag("--json", g_json, "machine-readable report");
  gen->callback([&] {
    if (g_kind == "uniform_ball")
      gspec.kind = GenPointsSpec::uniform_ball;
    else if (g_kind == "per_tile")
      gspec.kind = GenPointsSpec::per_tile;
    else if (g_kind == "horosphere_grid")
      gspec.kind = GenPointsSpec::horosphere_grid;
    else
      throw std::invalid_argument("unknown kind: " + g_kind);
    std::vector<HPoint> pts = gen_points(gspec);
    write_points_file(g_out, pts, model_from_string(g_model));
    emit_report(out, json{{"points", pts.size()}, {"out", g_out}}, g_json);
  });

  // build-graph
  auto* bg = app.add_subcommand("build-graph", "ball graph from a point file");
  std::string b_points, b_out, b_policy = "none";
  double b_rho = 0.0, b_nu = 1.0, b_p = 0.5;
  uint64_t b_seed = 0;
  bool b_json = false, b_have_seed = false;
  bg->add_option("--points", b_points, "input point file")->required();
  bg->add_option("--rho", b_rho, "ball radius")->required();
  bg->add_option("--nu", b_nu, "noise stretch")->default_val(1.0);
  bg->add_option("--policy", b_policy, "gray-zone policy: none | all | bernoulli");
  bg->add_option("--p", b_p, "bernoulli edge probability")->default_val(0.5);
  bg->add_option("--seed", b_seed, "rng seed (required for bernoulli)")
      ->each([&](const std::string&) { b_have_seed = true; });
  bg->add_option("--out", b_out, "output graph file")->required();
  bg->add_flag("--json", b_json, "machine-readable report");
  bg->callback([&] {
    NoisePolicy pol;
    if (b_policy == "none")
      pol = NoisePolicy::none_policy();
    else if (b_policy == "all")
      pol = NoisePolicy::all_policy();
    else if (b_policy == "bernoulli") {
      if (!b_have_seed)
        throw std::invalid_argument("--seed is required for the bernoulli policy");
      pol = NoisePolicy::bernoulli_policy(b_p, b_seed);
    } else {
      throw std::invalid_argument("unknown policy: " + b_policy);
    }
    std::vector<HPoint> pts = read_points_file(b_points);
    NubgInstance inst = build_graph(pts, b_rho, b_nu, pol);
    write_nubg_file(b_out, inst);
    emit_report(out, json{{"n", inst.g.n}, {"m", inst.g.edge_count()}, {"out", b_out}}, b_json);
  });

  // partition
  auto* pa = app.add_subcommand("partition", "clique / greedy partition of an instance");
  std::string p_graph, p_points, p_out, p_mode = "tiling";
  uint64_t p_seed = 0;
  bool p_json = false;
  pa->add_option("--graph", p_graph, "input graph file")->required();
  pa->add_option("--points", p_points, "companion point file")->required();
  pa->add_option("--mode", p_mode, "tiling | greedy");
  pa->add_option("--seed", p_seed, "rng seed (greedy mode)")->required();
  pa->add_option("--out", p_out, "output partition file")->required();
  pa->add_flag("--json", p_json, "machine-readable report");
  pa->callback([&] {
    NubgInstance inst = load_instance(p_graph, p_points);
    Partition part;
    if (p_mode == "tiling")
      part = tiling_partition(inst);
    else if (p_mode == "greedy")
      part = greedy_partition(inst.g, p_seed);
    else
      throw std::invalid_argument("unknown mode: " + p_mode);
    write_partition_file(p_out, part);
    emit_report(out, json{{"classes", part.classes.size()}, {"out", p_out}}, p_json);
  });

  // separator
  auto* se = app.add_subcommand("separator", "balanced clique separator");
  std::string s_graph, s_points, s_out;
  uint64_t s_seed = 0;
  int s_trials = 64;
  double s_eps = 0.05;
  bool s_json = false;
  se->add_option("--graph", s_graph, "input graph file")->required();
  se->add_option("--points", s_points, "companion point file")->required();
  se->add_option("--seed", s_seed, "rng seed")->required();
  se->add_option("--trials", s_trials, "hyperplane trials")->default_val(64);
  se->add_option("--eps", s_eps, "balance slack")->default_val(0.05);
  se->add_option("--out", s_out, "separator classes as a partition file");
  se->add_flag("--json", s_json, "machine-readable report");
  se->callback([&] {
    NubgInstance inst = load_instance(s_graph, s_points);
    int d = inst.points.front().dim();
    CliqueSeparator sep = find_separator(inst, square_tiling(d, inst.rho * 0.99), s_trials,
                                         s_seed, s_eps);
    if (!s_out.empty()) {
      Partition sel;
      sel.class_of.assign(static_cast<size_t>(inst.g.n), -1);
      for (int c : sep.classes) {
        for (int v : sep.partition.classes[static_cast<size_t>(c)])
          sel.class_of[static_cast<size_t>(v)] = static_cast<int>(sel.classes.size());
        sel.classes.push_back(sep.partition.classes[static_cast<size_t>(c)]);
      }
      write_partition_file(s_out, sel);
    }
    SeparatorReport rep = validate_separator(inst, sep, s_eps);
    emit_report(out,
                json{{"size", sep.size},
                     {"vertices", sep.vertices.size()},
                     {"weight", sep.weight},
                     {"balance", rep.balance},
                     {"balanced", rep.balanced},
                     {"trials_used", sep.trials_used}},
                s_json);
  });

  // decompose
  auto* de = app.add_subcommand("decompose", "tree decomposition of an instance");
  std::string d_graph, d_points, d_out, d_mode = "separators";
  uint64_t d_seed = 0;
  bool d_json = false;
  de->add_option("--graph", d_graph, "input graph file")->required();
  de->add_option("--points", d_points, "companion point file")->required();
  de->add_option("--mode", d_mode, "separators | shallow | heuristic");
  de->add_option("--seed", d_seed, "rng seed")->required();
  de->add_option("--out", d_out, "output decomposition file")->required();
  de->add_flag("--json", d_json, "machine-readable report");
  de->callback([&] {
    NubgInstance inst = load_instance(d_graph, d_points);
    json rep;
    if (d_mode == "separators") {
      WeightedTreeDecomposition wtd = pipeline_decompose(inst, d_seed);
      write_wtd_file(d_out, wtd, static_cast<int>(wtd.partition.classes.size()));
      rep = json{{"bags", wtd.bags.size()},
                 {"weighted_width", wtd.weighted_width},
                 {"depth", wtd.depth},
                 {"out", d_out}};
    } else if (d_mode == "shallow") {
      TreeDecomposition td = shallow_decompose(inst, regular_tiling(0));
      write_td_file(d_out, td, inst.g.n);
      rep = json{{"bags", td.bags.size()}, {"width", td.width()}, {"out", d_out}};
    } else if (d_mode == "heuristic") {
      TreeDecomposition td = heuristic_decompose(inst.g);
      write_td_file(d_out, td, inst.g.n);
      rep = json{{"bags", td.bags.size()}, {"width", td.width()}, {"out", d_out}};
    } else {
      throw std::invalid_argument("unknown mode: " + d_mode);
    }
    emit_report(out, rep, d_json);
  });

  // solve
  auto* so = app.add_subcommand("solve", "solve a problem on an instance");
  std::string v_problem, v_graph, v_points;
  uint64_t v_seed = 0;
  int v_q = 3;
  bool v_json = false;
  so->add_option("--problem", v_problem, "is | vc | ds | qcol | hc")->required();
  so->add_option("--graph", v_graph, "input graph file")->required();
  so->add_option("--points", v_points, "companion point file")->required();
  so->add_option("--seed", v_seed, "rng seed")->required();
  so->add_option("--q", v_q, "color count for qcol")->default_val(3);
  so->add_flag("--json", v_json, "machine-readable report");
  so->callback([&] {
    NubgInstance inst = load_instance(v_graph, v_points);
    json rep{{"problem", v_problem}, {"n", inst.g.n}};
    if (v_problem == "is" || v_problem == "vc" || v_problem == "ds") {
      WeightedTreeDecomposition wtd = pipeline_decompose(inst, v_seed);
      SolveResult r;
      if (v_problem == "is")
        r = solve_is(inst.g, wtd, wtd.partition);
      else if (v_problem == "vc")
        r = solve_vc(inst.g, wtd, wtd.partition);
      else
        r = solve_ds(inst.g, wtd, wtd.partition);
      std::vector<int> witness;
      for (int v : r.witness) witness.push_back(v + 1);
      rep["answer"] = r.size;
      rep["witness"] = witness;
    } else if (v_problem == "qcol") {
      Partition part = tiling_partition(inst);
      auto col = solve_qcoloring(inst.g, v_q, part);
      rep["q"] = v_q;
      rep["colorable"] = col.has_value();
      if (col) rep["coloring"] = *col;
    } else if (v_problem == "hc") {
      Partition part = tiling_partition(inst);
      auto cyc = solve_hamiltonian(inst.g, part);
      rep["hamiltonian"] = cyc.has_value();
      if (cyc) {
        std::vector<int> order;
        for (int v : *cyc) order.push_back(v + 1);
        rep["cycle"] = order;
      }
    } else {
      throw std::invalid_argument("unknown problem: " + v_problem);
    }
    emit_report(out, rep, v_json);
  });

  // lowerbound
  auto* lb = app.add_subcommand("lowerbound",
                                "random grid-tiling instance embedded as an IS target instance");
  int l_k = 2, l_N = 3, l_nparam = 4;
  uint64_t l_seed = 0;
  std::string l_out;
  bool l_json = false;
  lb->add_option("--k", l_k, "grid side")->required();
  lb->add_option("--N", l_N, "universe side")->required();
  lb->add_option("--seed", l_seed, "rng seed")->required();
  lb->add_option("--n-param", l_nparam, "reported half-line count")->default_val(4);
  lb->add_option("--out", l_out, "output path prefix")->required();
  lb->add_flag("--json", l_json, "machine-readable report");
  lb->callback([&] {
    if (l_N < 1) throw std::invalid_argument("--N must be positive");
    Rng rng(l_seed);
    GridTilingInstance gt;
    gt.k = l_k;
    gt.N = l_N;
    gt.mode = GridTilingInstance::leq;
    gt.sets.assign(static_cast<size_t>(l_k),
                   std::vector<std::vector<std::pair<int, int>>>(static_cast<size_t>(l_k)));
    for (auto& row : gt.sets)
      for (auto& cell : row) {
        std::set<std::pair<int, int>> s;
        int want = 1 + static_cast<int>(rng() % 3);
        while (static_cast<int>(s.size()) < want)
          s.insert({1 + static_cast<int>(rng() % static_cast<uint64_t>(l_N)),
                    1 + static_cast<int>(rng() % static_cast<uint64_t>(l_N))});
        cell.assign(s.begin(), s.end());
      }
    GridEmbedding emb = build_grid_embedding(l_nparam, l_k);
    IsReduction red = gtleq_to_is(gt, emb);
    std::ofstream gtf(l_out + ".gt.json");
    if (!gtf) throw std::runtime_error("cannot open for writing: " + l_out + ".gt.json");
    gtf << write_gt_json(gt) << "\n";
    write_points_file(l_out + ".points", red.inst.points);
    write_nubg_file(l_out + ".graph", red.inst);
    emit_report(out,
                json{{"k", l_k},
                     {"N", l_N},
                     {"target", red.target},
                     {"vertices", red.inst.g.n},
                     {"edges", red.inst.g.edge_count()},
                     {"arcs", emb.arcs.size()},
                     {"r0", emb.r0},
                     {"beta", emb.beta},
                     {"out", l_out}},
                l_json);
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "run a CSV experiment schedule");
  std::string e_config, e_out;
  bool e_json = false;
  ex->add_option("--config", e_config, "experiment config (json)")->required();
  ex->add_option("--out", e_out, "output CSV path")->required();
  ex->add_flag("--json", e_json, "machine-readable report");
  ex->callback([&] {
    std::ifstream in(e_config);
    if (!in) throw std::runtime_error("cannot open for reading: " + e_config);
    std::stringstream buf;
    buf << in.rdbuf();
    ExperimentConfig cfg = parse_experiment_config(buf.str());
    std::ostringstream csv;
    run_experiment(cfg, csv);
    std::ofstream of(e_out);
    if (!of) throw std::runtime_error("cannot open for writing: " + e_out);
    of << csv.str();
    size_t rows = 0;
    for (char c : csv.str()) rows += c == '\n';
    emit_report(out, json{{"exp", cfg.exp}, {"rows", rows - 1}, {"out", e_out}}, e_json);
  });

  std::vector<const char*> argv;
  argv.push_back("hyptw");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace hyp
