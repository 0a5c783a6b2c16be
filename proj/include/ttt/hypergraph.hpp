#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ttt {

// Occupancy sets are 64-bit masks; vertex indices are dense and 0-based.
using Mask = std::uint64_t;

inline Mask bit(int v) { return Mask{1} << v; }

enum class Side { First, Second };

inline Side other(Side s) { return s == Side::First ? Side::Second : Side::First; }

enum class GameVariant { Strong, MakerBreaker };

/// A game board: vertices 0..vertex_count-1 plus a stable, position-addressed
/// edge list. Duplicate edges are allowed (multisets of blocks occur in
/// lambda-fold triple systems); empty edges only arise from deletion.
struct Hypergraph {
  int vertex_count = 0;
  std::vector<std::vector<int>> edges;
  std::vector<Mask> edge_masks;  // derived, kept in sync with edges

  Hypergraph() = default;
  Hypergraph(int vertex_count, std::vector<std::vector<int>> edge_list);

  int edge_count() const { return static_cast<int>(edges.size()); }
  Mask vertex_mask() const;
  int max_edge_size() const;
};

/// Move sets of the two players. First = Xeno/Maker, Second = Ophelia/Breaker.
struct GameState {
  Mask maker = 0;
  Mask breaker = 0;
  Side to_move = Side::First;

  Mask occupied() const { return maker | breaker; }
  Mask side_mask(Side s) const { return s == Side::First ? maker : breaker; }
  int move_count() const;
  GameState after(Side s, int v) const;  // play v for s, flip to_move
};

struct Permutation {
  std::vector<int> image;

  static Permutation identity(int n);
  int size() const { return static_cast<int>(image.size()); }
  int operator()(int v) const { return image[v]; }
  bool is_bijection() const;
  Permutation compose(const Permutation& inner) const;  // this after inner
  Permutation inverse() const;
  Mask apply(Mask m) const;
};

/// Who moves at each point of the game. The prefix lists explicit turns;
/// afterwards play alternates starting from tail_start.
struct TurnSchedule {
  std::vector<Side> prefix;
  Side tail_start = Side::First;

  static TurnSchedule standard() { return {}; }
  /// Parse a string like "XOO": the string is the prefix, and alternation
  /// resumes with the side opposite the last prefix entry ("X" if empty).
  static TurnSchedule parse(const std::string& s);
  std::string str() const;
  bool is_standard() const { return prefix.empty() && tail_start == Side::First; }
  Side side_at(int move_index) const;
  int first_count(int moves) const;  // # of First turns among the first `moves` slots
};

/// Schedule for "Ophelia gets one extra move on her first turn": X,O,O, then
/// normal alternation.
TurnSchedule handicap_schedule();

/// Throws std::invalid_argument if the state is not reachable under the
/// schedule (overlap, out-of-range vertices, wrong move counts or to_move).
void check_state(const Hypergraph& h, const GameState& state,
                 const TurnSchedule& schedule = TurnSchedule::standard());

// ---- Core operations ------------------------------------------------------

/// Lowest-index edge fully contained in `occupied`, if any.
std::optional<int> completed_edge(const Hypergraph& h, Mask occupied);

/// Result of a vertex-deleting reduction; indices are compacted and the
/// relabeling is recorded so certificates can be translated back.
struct Reduction {
  Hypergraph hypergraph;
  std::vector<int> old_to_new;  // -1 for deleted vertices
  std::vector<int> new_to_old;
};

/// One round of deletion semantics: Maker played `maker_move`, Breaker played
/// `breaker_move`. Edges containing the Breaker vertex are dropped; the Maker
/// vertex is removed from the surviving edges. An edge reduced to size 0 is
/// kept: it marks the position as already Maker-won.
Reduction restrict_after_moves(const Hypergraph& h, int maker_move, int breaker_move);

/// Same deletion semantics folded over whole move sets.
Reduction residual(const Hypergraph& h, Mask maker, Mask breaker);

/// Drop vertices that lie in no edge (compacting indices).
Reduction remove_isolated_vertices(const Hypergraph& h);

Hypergraph disjoint_union(const Hypergraph& h1, const Hypergraph& h2);

Hypergraph apply_permutation(const Hypergraph& h, const Permutation& p);
GameState apply_permutation(const GameState& s, const Permutation& p);

bool is_automorphism(const Hypergraph& h, const Permutation& p);

/// All automorphisms of h, found by backtracking over block-preserving vertex
/// maps. The returned set generates (indeed, is) the full group. Throws if
/// vertex_count exceeds `bound`. `cap` stops runaway enumeration; any prefix
/// of the group is still a sound set of symmetries.
std::vector<Permutation> automorphism_generators(const Hypergraph& h, int bound = 24,
                                                 std::size_t cap = 1u << 20);

/// Size of the group generated by `gens`, or nullopt if it exceeds `limit`.
std::optional<std::size_t> group_closure_size(const std::vector<Permutation>& gens,
                                              std::size_t limit = 1000000);

/// Orbit partition of the unplayed vertices under the given generators.
/// Every generator must stabilize the state (maker set to maker set, breaker
/// set to breaker set); otherwise throws.
std::vector<std::vector<int>> vertex_orbits(const Hypergraph& h, const GameState& state,
                                            const std::vector<Permutation>& gens);

/// A vertex bijection carrying the edge multiset of h1 onto that of h2, or
/// nullopt. Intended for small instances; throws above 12 vertices.
std::optional<Permutation> is_isomorphic(const Hypergraph& h1, const Hypergraph& h2);

// ---- Fixtures --------------------------------------------------------------

/// The seven small Breaker-win hypergraphs used to close out reductions.
/// 1: {x1,x3,x4},{x3,x5,u},{x1,x2,v},{u,v}   (x1..x5,u,v = 0..6)
/// 2: {x1,x2,x3},{x3,x4,u},{x5,x6,v},{u,v}
/// 3: {x1,x2,x3},{x3,x4,x5},{x5,x6,u},{u,x7}
/// 4: {x1,x2,x3},{x3,x4,x5},{x5,x6}
/// 5: {x1,x2,x3},{x3,x4}
/// 6: {x1,x2,x3}
/// 7: {x1,x2}
Hypergraph fixture_h(int i);

/// The classic 3x3 board: cells 0..8 (row major), 8 winning lines.
Hypergraph tic_tac_toe_3x3();

// ---- Text format -----------------------------------------------------------

/// One edge per line of whitespace-separated vertex indices, `#` comments,
/// first non-comment line `v <count>`. A lone `-` denotes an empty edge.
Hypergraph parse_hypergraph(std::istream& in);
Hypergraph parse_hypergraph_string(const std::string& text);
std::string format_hypergraph(const Hypergraph& h);

std::string mask_to_string(Mask m);

}  // namespace ttt
