#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "ttt/hypergraph.hpp"

namespace ttt {

/// Strong values are relative to the side to move; Maker-Breaker values are
/// absolute (the weak game has no draws). Unknown only ever means a budget
/// ran out, never a guess.
enum class GameValue {
  WinForToMove,
  Draw,
  LossForToMove,
  MakerWin,
  BreakerWin,
  Unknown,
};

std::string game_value_name(GameValue v);

/// Outcome in absolute terms (First = Xeno/Maker).
enum class Outcome { FirstWin, SecondWin, Draw };

std::string outcome_name(Outcome o, GameVariant variant);

/// Absolute outcome of a solved state (to_move taken from the state).
Outcome outcome_of(GameValue v, Side to_move);

struct Budget {
  std::uint64_t max_nodes = 0;  // 0 = unlimited
  double max_seconds = 0;       // 0 = unlimited
};

struct SolveOptions {
  Budget budget;
  bool use_memo = true;
  bool use_orbit_pruning = true;
  int orbit_depth = 2;     // prune orbits at depths strictly below this
  int threads = 1;         // >1 evaluates root moves on a worker pool
  int table_bits = 20;     // bounded memo table, replace-on-collision
};

struct SolveResult {
  GameValue value = GameValue::Unknown;
  std::optional<int> best_move;
  std::optional<int> ply_bound;  // distance to the end when cheaply known
  std::uint64_t nodes_expanded = 0;
  std::uint64_t table_hits = 0;
  std::chrono::duration<double> elapsed{0};
};

/// Finished-position check: a completed edge, every edge Breaker-touched
/// (weak game), or a full board. Returns the result or nullopt when play
/// continues.
std::optional<Outcome> game_over(const Hypergraph& h, GameVariant variant,
                                 const GameState& state);

/// Exact value of the position under the stated termination rules.
/// Strong: completing an edge wins immediately; all vertices played without a
/// completion is a draw. Maker-Breaker: Maker wins on completion; Breaker wins
/// as soon as every edge contains one of her vertices.
SolveResult solve(const Hypergraph& h, GameVariant variant, const GameState& state = {},
                  const TurnSchedule& schedule = TurnSchedule::standard(),
                  const SolveOptions& options = {});

/// A move realizing solve's value: an immediate completion when one exists,
/// otherwise the lowest-index move whose resulting value matches. Throws on
/// terminal states.
int best_move(const Hypergraph& h, GameVariant variant, const GameState& state = {},
              const TurnSchedule& schedule = TurnSchedule::standard(),
              const SolveOptions& options = {});

/// Prescribed moves for one side on every state reachable while that side
/// follows the map and the adversary plays arbitrarily.
struct StrategyCertificate {
  GameVariant variant;
  Side side;
  Outcome claimed;
  TurnSchedule schedule;
  std::map<std::pair<Mask, Mask>, int> moves;

  std::string serialize() const;
  static StrategyCertificate deserialize(const std::string& text);
};

/// Builds a certificate realizing the solved value for `side` from `state`.
StrategyCertificate extract_certificate(const Hypergraph& h, GameVariant variant, Side side,
                                        const GameState& state = {},
                                        const TurnSchedule& schedule = TurnSchedule::standard(),
                                        const SolveOptions& options = {});

/// Replays the certificate against every adversary line; true iff every line
/// ends with the claimed outcome. Throws if the certificate is missing a
/// reachable state or prescribes an illegal move.
bool verify_certificate(const Hypergraph& h, const StrategyCertificate& cert,
                        const GameState& state = {});

}  // namespace ttt
