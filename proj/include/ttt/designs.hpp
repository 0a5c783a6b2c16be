#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ttt/hypergraph.hpp"

namespace ttt {

/// (v, k, lambda) with the derived counts b and r.
struct DesignParams {
  long long v = 0;
  int k = 0;
  long long lambda = 0;

  bool admissible() const;
  long long block_count() const;  // lambda v(v-1) / k(k-1)
  long long replication() const;  // lambda (v-1) / (k-1)
};

bool admissible(long long v, int k, long long lambda);

struct ValidationReport {
  std::vector<std::string> issues;
  bool valid() const { return issues.empty(); }
  std::string str() const;
};

/// A balanced incomplete block design: every point pair in exactly lambda
/// blocks. Blocks form a multiset; order is stable.
struct Design {
  DesignParams params;
  std::vector<std::vector<int>> blocks;
  int point_count() const { return static_cast<int>(params.v); }
};

/// k groups of n points; blocks hit every group once; cross-group pairs are
/// covered exactly once, in-group pairs never.
struct TransversalDesign {
  int k = 0;
  int n = 0;
  std::vector<std::vector<int>> groups;
  std::vector<std::vector<int>> blocks;
  int point_count() const { return k * n; }
  int group_of(int point) const;
};

ValidationReport validate_bibd(const std::vector<std::vector<int>>& blocks, long long v, int k,
                               long long lambda);
ValidationReport validate_td(const TransversalDesign& td);

/// Steiner triple system on v points; v = 3 mod 6 uses the idempotent
/// quasigroup construction, v = 1 mod 6 the half-idempotent one.
Design make_sts(int v);

/// Triple system TS(v, lambda). Supports lambda-fold Steiner systems, and the
/// small non-Steiner orders: v=4 (all triples, lambda even), v=5 (all
/// triples, lambda divisible by 3), v=6 (lambda even; the 10-block system
/// whose blocks through point 0 are 012, 013, 024, 035, 045).
Design make_ts(int v, int lambda);

/// Transversal design TD(k, n) for n = 1, n prime with k <= n+1, or n = 4
/// with k <= 5 (GF(4) tables). TD(4,4) is the fixed 16-block instance on
/// points r1..r4, c1..c4, a1..a4, b1..b4 (indices 0..15 in that order).
TransversalDesign make_td(int k, int n);

/// Point names for the TD(4,4) fixture ("r1".."b4"), index-aligned.
std::vector<std::string> td44_point_names();

using Resolution = std::vector<std::vector<int>>;  // block indices per parallel class

/// Partition of the blocks into n classes, each partitioning the points.
std::optional<Resolution> find_resolution(const TransversalDesign& td);

/// Projective plane from a TD(n+1, n): one new point joined to every group.
Design td_to_projective(const TransversalDesign& td);
/// Affine plane from a resolvable TD(n, n): lines are the groups plus blocks.
Design rtd_to_affine(const TransversalDesign& td, const Resolution& resolution);
/// TD(k+1, n) from a resolvable TD(k, n): one new point per parallel class.
TransversalDesign rtd_extend(const TransversalDesign& td, const Resolution& resolution);

/// Multigraph on X \ {x} with an edge {y,z} for every block {x,y,z}.
struct PointMultigraph {
  int point_count = 0;  // of the underlying design
  int center = -1;
  std::vector<std::pair<int, int>> edges;  // multiset

  int degree(int y) const;
  int multiplicity(int y, int z) const;
  bool regular_of_degree(int d) const;  // over vertices incident to any edge
  /// Connected components over vertices of positive degree.
  std::vector<std::vector<int>> components() const;
  /// True when the positive-degree vertices form one cycle of the given length.
  bool single_cycle(int length) const;
  /// Cycle vertex order when the graph is a union of cycles (for diagnostics).
  std::vector<std::vector<int>> cycles() const;
};

PointMultigraph point_multigraph(const Design& design, int x);
PointMultigraph union_multigraph(const PointMultigraph& a, const PointMultigraph& b);

bool is_hamiltonian_pair(const TransversalDesign& td, int group_index, int x, int y);
bool is_pan_hamiltonian(const TransversalDesign& td, int group_index);
bool is_atomic(const TransversalDesign& td);

Hypergraph to_hypergraph(const Design& design);
/// Blocks as edges, plus the named groups appended as extra edges.
Hypergraph to_hypergraph(const TransversalDesign& td,
                         const std::vector<int>& include_groups = {});

// ---- Design file format ----------------------------------------------------
// Header `design v=<v> k=<k> lambda=<l>` or `td k=<k> n=<n>`, optional
// `group <tokens...>` lines, then `block <tokens...>` lines. Point names are
// arbitrary tokens mapped to dense indices in first-appearance order.

struct DesignFile {
  enum class Kind { Bibd, Td } kind = Kind::Bibd;
  long long v = 0;
  int k = 0;
  long long lambda = 0;
  int n = 0;
  std::vector<std::string> point_names;
  std::vector<std::vector<int>> groups;
  std::vector<std::vector<int>> blocks;

  Design as_design() const;
  TransversalDesign as_td() const;
  std::optional<int> index_of(const std::string& token) const;
};

DesignFile design_file_from(const Design& d);
DesignFile design_file_from(const TransversalDesign& td,
                            std::vector<std::string> names = {});

DesignFile parse_design(std::istream& in);
DesignFile parse_design_string(const std::string& text);
std::string format_design(const DesignFile& f);

ValidationReport validate_design_file(const DesignFile& f);

}  // namespace ttt
