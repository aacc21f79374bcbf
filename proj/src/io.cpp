#include "hyp/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hyp {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

[[noreturn]] void parse_fail(long long lineno, const std::string& msg) {
  throw std::runtime_error("parse error at line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

void write_points(std::ostream& out, const std::vector<HPoint>& points, Model m) {
  out << std::setprecision(17);
  for (const HPoint& p : points) {
    out << model_to_string(m) << "," << p.dim();
    for (double c : convert(p, m)) out << "," << c;
    out << "\n";
  }
}

std::vector<HPoint> read_points(std::istream& in) {
  std::vector<HPoint> points;
  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      std::stringstream ss(line);
      std::string tok;
      std::getline(ss, tok, ',');
      Model m = model_from_string(tok);
      std::getline(ss, tok, ',');
      int d = std::stoi(tok);
      Vec c;
      while (std::getline(ss, tok, ',')) c.push_back(std::stod(tok));
      int want = (m == Model::hyperboloid) ? d + 1 : d;
      if (static_cast<int>(c.size()) != want)
        throw std::runtime_error("wrong coordinate count");
      points.push_back(from_model(m, c));
    } catch (const std::exception& e) {
      parse_fail(lineno, std::string(e.what()) + ": " + line);
    }
  }
  return points;
}

void write_nubg(std::ostream& out, const NubgInstance& inst) {
  out << std::setprecision(17);
  out << "p nubg " << inst.g.n << " " << inst.g.edge_count() << " " << inst.rho << " "
      << inst.nu << "\n";
  for (auto [u, v] : inst.g.edges()) out << "e " << u + 1 << " " << v + 1 << "\n";
}

NubgInstance read_nubg(std::istream& in) {
  NubgInstance inst;
  std::string line;
  bool have_header = false;
  long long m = 0;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c' || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "p") {
      std::string fmt;
      int n;
      ss >> fmt >> n >> m >> inst.rho >> inst.nu;
      if (!ss || fmt != "nubg") parse_fail(lineno, "bad graph header: " + line);
      inst.g = Graph(n);
      have_header = true;
    } else if (kind == "e") {
      if (!have_header) parse_fail(lineno, "edge before header");
      int u, v;
      ss >> u >> v;
      if (!ss || u < 1 || v < 1 || u > inst.g.n || v > inst.g.n)
        parse_fail(lineno, "bad edge line: " + line);
      inst.g.add_edge(u - 1, v - 1);
    } else {
      parse_fail(lineno, "unrecognized graph line: " + line);
    }
  }
  if (!have_header) throw std::runtime_error("missing graph header");
  if (inst.g.edge_count() != m)
    throw std::runtime_error("edge count does not match header");
  return inst;
}

namespace {

void write_td_body(std::ostream& out, const std::vector<std::vector<int>>& bags,
                   const Graph& tree, int n) {
  size_t maxbag = 0;
  for (const auto& b : bags) maxbag = std::max(maxbag, b.size());
  out << "s td " << bags.size() << " " << maxbag << " " << n << "\n";
  for (size_t b = 0; b < bags.size(); ++b) {
    out << "b " << b + 1;
    for (int v : bags[b]) out << " " << v + 1;
    out << "\n";
  }
  for (auto [u, v] : tree.edges()) out << u + 1 << " " << v + 1 << "\n";
}

struct TdLines {
  std::vector<std::vector<int>> bags;
  Graph tree;
  std::vector<double> weights;
  bool any_weight = false;
};

TdLines read_td_body(std::istream& in) {
  TdLines td;
  std::string line;
  bool have_header = false;
  long long nb = 0, n = 0, maxbag = 0;
  std::vector<char> seen;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == 'c' || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string kind;
    ss >> kind;
    if (kind == "s") {
      std::string fmt;
      ss >> fmt >> nb >> maxbag >> n;
      if (!ss || fmt != "td") parse_fail(lineno, "bad decomposition header: " + line);
      td.bags.assign(nb, {});
      td.weights.assign(nb, 0.0);
      td.tree = Graph(static_cast<int>(nb));
      seen.assign(nb, 0);
      have_header = true;
    } else if (kind == "b") {
      if (!have_header) parse_fail(lineno, "bag before header");
      long long id;
      ss >> id;
      if (!ss || id < 1 || id > nb) parse_fail(lineno, "bad bag line: " + line);
      if (seen[id - 1]) parse_fail(lineno, "duplicate bag id: " + line);
      seen[id - 1] = 1;
      int v;
      while (ss >> v) {
        if (v < 1 || v > n) parse_fail(lineno, "bag vertex out of range: " + line);
        td.bags[id - 1].push_back(v - 1);
      }
      if (static_cast<long long>(td.bags[id - 1].size()) > maxbag)
        parse_fail(lineno, "bag exceeds declared max size: " + line);
    } else if (kind == "w") {
      if (!have_header) parse_fail(lineno, "weight before header");
      long long id;
      double w;
      ss >> id >> w;
      if (!ss || id < 1 || id > nb) parse_fail(lineno, "bad weight line: " + line);
      td.weights[id - 1] = w;
      td.any_weight = true;
    } else {
      if (!have_header) parse_fail(lineno, "edge before header");
      long long u, v;
      std::stringstream es(line);
      es >> u >> v;
      if (!es || u < 1 || v < 1 || u > nb || v > nb)
        parse_fail(lineno, "bad tree edge line: " + line);
      td.tree.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
    }
  }
  if (!have_header) throw std::runtime_error("missing decomposition header");
  if (nb > 0 && td.tree.edge_count() != nb - 1)
    throw std::runtime_error("decomposition tree edge count is not bags-1");
  return td;
}

}  // namespace

void write_td(std::ostream& out, const TreeDecomposition& td, int n) {
  write_td_body(out, td.bags, td.tree, n);
}

TreeDecomposition read_td(std::istream& in) {
  TdLines raw = read_td_body(in);
  return {std::move(raw.bags), std::move(raw.tree)};
}

void write_wtd(std::ostream& out, const WeightedTreeDecomposition& wtd, int n) {
  write_td_body(out, wtd.bags, wtd.tree, n);
  out << std::setprecision(17);
  for (size_t b = 0; b < wtd.bag_weights.size(); ++b)
    out << "w " << b + 1 << " " << wtd.bag_weights[b] << "\n";
}

WeightedTreeDecomposition read_wtd(std::istream& in) {
  TdLines raw = read_td_body(in);
  WeightedTreeDecomposition wtd;
  wtd.bags = std::move(raw.bags);
  wtd.tree = std::move(raw.tree);
  wtd.bag_weights = std::move(raw.weights);
  for (double w : wtd.bag_weights) wtd.weighted_width = std::max(wtd.weighted_width, w);
  return wtd;
}

void write_td_file(const std::string& path, const TreeDecomposition& td, int n) {
  auto out = open_out(path);
  write_td(out, td, n);
}

TreeDecomposition read_td_file(const std::string& path) {
  auto in = open_in(path);
  return read_td(in);
}

void write_wtd_file(const std::string& path, const WeightedTreeDecomposition& wtd, int n) {
  auto out = open_out(path);
  write_wtd(out, wtd, n);
}

WeightedTreeDecomposition read_wtd_file(const std::string& path) {
  auto in = open_in(path);
  return read_wtd(in);
}

void write_partition(std::ostream& out, const Partition& part) {
  for (size_t c = 0; c < part.classes.size(); ++c) {
    out << "c " << c + 1;
    for (int v : part.classes[c]) out << " " << v + 1;
    out << "\n";
  }
}

Partition read_partition(std::istream& in, int n) {
  Partition part;
  part.class_of.assign(n, -1);
  std::string line;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string kind;
    int id;
    ss >> kind >> id;
    if (kind != "c" || !ss) parse_fail(lineno, "bad partition line: " + line);
    std::vector<int> cls;
    int v;
    while (ss >> v) {
      if (v < 1 || v > n) parse_fail(lineno, "partition vertex out of range: " + line);
      cls.push_back(v - 1);
    }
    for (int u : cls) {
      if (part.class_of[u] != -1) parse_fail(lineno, "vertex in two classes");
      part.class_of[u] = static_cast<int>(part.classes.size());
    }
    part.classes.push_back(cls);
  }
  return part;
}

void write_points_file(const std::string& path, const std::vector<HPoint>& points, Model m) {
  auto out = open_out(path);
  write_points(out, points, m);
}

std::vector<HPoint> read_points_file(const std::string& path) {
  auto in = open_in(path);
  return read_points(in);
}

void write_nubg_file(const std::string& path, const NubgInstance& inst) {
  auto out = open_out(path);
  write_nubg(out, inst);
}

NubgInstance read_nubg_file(const std::string& path) {
  auto in = open_in(path);
  return read_nubg(in);
}

void write_partition_file(const std::string& path, const Partition& part) {
  auto out = open_out(path);
  write_partition(out, part);
}

Partition read_partition_file(const std::string& path, int n) {
  auto in = open_in(path);
  return read_partition(in, n);
}

}  // namespace hyp
