#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyp/decomp.hpp"
#include "hyp/geom.hpp"
#include "hyp/nubg.hpp"

namespace hyp {

// Point files: one point per line, `model,d,c1,...`; readers normalize to the
// hyperboloid.
void write_points(std::ostream& out, const std::vector<HPoint>& points,
                  Model m = Model::hyperboloid);
std::vector<HPoint> read_points(std::istream& in);
void write_points_file(const std::string& path, const std::vector<HPoint>& points,
                       Model m = Model::hyperboloid);
std::vector<HPoint> read_points_file(const std::string& path);

// Graph files: `p nubg <n> <m> <rho> <nu>` header, `e u v` lines (1-indexed),
// `c` comment lines ignored. Points travel in a companion point file.
void write_nubg(std::ostream& out, const NubgInstance& inst);
NubgInstance read_nubg(std::istream& in);
void write_nubg_file(const std::string& path, const NubgInstance& inst);
NubgInstance read_nubg_file(const std::string& path);

// Tree-decomposition files in the PACE-2017 layout: `s td <#bags>
// <max-bag-size> <n>` header, `b <id> v1 v2 ...` bag lines, and one `u v`
// line per tree edge, all 1-indexed. Weighted decompositions append one
// `w <bag-id> <weight>` line per bag.
void write_td(std::ostream& out, const TreeDecomposition& td, int n);
TreeDecomposition read_td(std::istream& in);
void write_td_file(const std::string& path, const TreeDecomposition& td, int n);
TreeDecomposition read_td_file(const std::string& path);
void write_wtd(std::ostream& out, const WeightedTreeDecomposition& wtd, int n);
WeightedTreeDecomposition read_wtd(std::istream& in);
void write_wtd_file(const std::string& path, const WeightedTreeDecomposition& wtd, int n);
WeightedTreeDecomposition read_wtd_file(const std::string& path);

// Partition files: `c <class-id> v1 v2 ...` with 1-indexed vertices.
void write_partition(std::ostream& out, const Partition& part);
Partition read_partition(std::istream& in, int n);
void write_partition_file(const std::string& path, const Partition& part);
Partition read_partition_file(const std::string& path, int n);

}  // namespace hyp
