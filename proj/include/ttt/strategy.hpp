#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttt/designs.hpp"
#include "ttt/hypergraph.hpp"
#include "ttt/scoring.hpp"
#include "ttt/solver.hpp"

namespace ttt {

/// A double threat: playing `pivot` leaves two blocks each one move from
/// completion, with distinct completion squares the opponent cannot cover at
/// once.
struct Scissor {
  int pivot = -1;
  int edge1 = -1, edge2 = -1;        // witness block indices
  int owned1 = -1, owned2 = -1;      // the already-owned vertex in each block
  int completion1 = -1, completion2 = -1;
};

/// Lowest-pivot scissor for `side`, or none. Only size-3 edges participate.
/// A witness block holds exactly one owned vertex besides the pivot, no
/// opponent vertex, and an unplayed completion square; the two completion
/// squares differ.
std::optional<Scissor> find_scissor(const Hypergraph& h, const GameState& state, Side side);

/// Deterministic preference used to break ties among candidate moves:
/// smallest rank first, lowest index within a rank. An empty rank vector
/// means plain lowest-index.
struct TieBreak {
  std::vector<int> rank;
  int pick(const std::vector<int>& candidates) const;
};

/// A deterministic move-selection rule. `choose` must return an unplayed
/// vertex and be a pure function of (hypergraph, state, side).
struct Strategy {
  std::string name;
  std::string applicability;
  std::function<int(const Hypergraph&, const GameState&, Side)> choose;
};

/// Moves that immediately finish the game for `side` (edge completion; for
/// the weak game's Breaker, a move that touches every remaining edge).
std::vector<int> winning_moves(const Hypergraph& h, const GameState& state, Side side,
                               GameVariant variant);
/// Squares where the opponent would complete an edge on their next move.
std::vector<int> blocking_moves(const Hypergraph& h, const GameState& state, Side side,
                                GameVariant variant);

/// Checks move `v` against the three-tier rule (win, else block, else
/// maximum weight); returns the tier it satisfies, or nullopt.
std::optional<int> move_tier(const Hypergraph& h, const GameState& state, Side side, int v,
                             GameVariant variant);

/// Win if possible, else block an immediate loss, else take a vertex of
/// maximum weight; ties resolved by `tiebreak`.
Strategy score_optimizing_strategy(TieBreak tiebreak = {},
                                   GameVariant variant = GameVariant::Strong);

/// First-player strategy for Steiner triple systems with v >= 7 (lambda-fold
/// repetitions accepted): second move off the block through the first
/// exchange, forced blocks, then a scissor.
Strategy sts_xeno_strategy(const Design& design);

/// First-player strategies for transversal designs with 2 and 3 groups.
Strategy td2_xeno_strategy(const TransversalDesign& td);
Strategy td3_xeno_strategy(const TransversalDesign& td);

/// Second-player attack under the X,O,O,... schedule on a TD(3,n): two
/// opening moves in different groups avoiding a block, then a scissor in the
/// first player's group.
Strategy ophelia_handicap_attack(const TransversalDesign& td);

/// Plays a fixed move list for one side (replay harness).
Strategy scripted_strategy(std::string name, std::vector<int> moves);
/// Uniform-random legal move, deterministic per (seed, state).
Strategy uniform_random_strategy(std::uint64_t seed);
/// Plays solve()'s best move. The schedule must match the game it is used in.
Strategy solver_strategy(GameVariant variant,
                         const TurnSchedule& schedule = TurnSchedule::standard(),
                         SolveOptions options = {});

struct MoveRecord {
  int index = 0;
  Side side = Side::First;
  int vertex = -1;
  Dyadic score_before, score_after;
  int tier = 0;           // 1 win, 2 block, 3 weight; 0 = violates the rule
  bool max_weight = false;
  bool forced = false;    // unique choice within tier 1 or 2
};

struct Transcript {
  GameVariant variant = GameVariant::Strong;
  TurnSchedule schedule;
  std::vector<MoveRecord> moves;
  std::optional<Outcome> result;  // empty on fault
  std::optional<int> winning_edge;
  std::string fault;

  int moves_by(Side s) const;
  std::string str() const;
};

/// Deterministic playout to termination with per-move score annotations.
/// A strategy fault (illegal move or exception) ends the game and is
/// recorded on the transcript.
Transcript simulate(const Hypergraph& h, GameVariant variant, const Strategy& first,
                    const Strategy& second,
                    const TurnSchedule& schedule = TurnSchedule::standard());

struct VerifyOutcome {
  bool ok = false;
  std::uint64_t lines = 0;
  std::uint64_t states = 0;
  int max_own_moves = 0;  // stones the strategy side had at any terminal
  std::string counterexample;
};

/// Branches over every adversary reply while `side` follows the strategy;
/// ok iff no line ends worse for `side` than `claimed`. Throws if the
/// strategy raises or moves illegally.
VerifyOutcome verify_strategy_exhaustive(const Hypergraph& h, GameVariant variant,
                                         const Strategy& strategy, Side side, Outcome claimed,
                                         const TurnSchedule& schedule = TurnSchedule::standard());

}  // namespace ttt
