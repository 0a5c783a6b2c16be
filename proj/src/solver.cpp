#include "ttt/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ttt/scoring.hpp"

namespace ttt {

std::string game_value_name(GameValue v) {
  switch (v) {
    case GameValue::WinForToMove: return "win-for-to-move";
    case GameValue::Draw: return "draw";
    case GameValue::LossForToMove: return "loss-for-to-move";
    case GameValue::MakerWin: return "maker-win";
    case GameValue::BreakerWin: return "breaker-win";
    case GameValue::Unknown: return "unknown";
  }
  return "?";
}

std::string outcome_name(Outcome o, GameVariant variant) {
  bool strong = variant == GameVariant::Strong;
  switch (o) {
    case Outcome::FirstWin: return strong ? "xeno-win" : "maker-win";
    case Outcome::SecondWin: return strong ? "ophelia-win" : "breaker-win";
    case Outcome::Draw: return "draw";
  }
  return "?";
}

Outcome outcome_of(GameValue v, Side to_move) {
  switch (v) {
    case GameValue::MakerWin: return Outcome::FirstWin;
    case GameValue::BreakerWin: return Outcome::SecondWin;
    case GameValue::Draw: return Outcome::Draw;
    case GameValue::WinForToMove:
      return to_move == Side::First ? Outcome::FirstWin : Outcome::SecondWin;
    case GameValue::LossForToMove:
      return to_move == Side::First ? Outcome::SecondWin : Outcome::FirstWin;
    case GameValue::Unknown: throw std::invalid_argument("no outcome for Unknown");
  }
  throw std::invalid_argument("bad value");
}

namespace {

using Clock = std::chrono::steady_clock;

struct BudgetExceeded {};

// win = 2, draw = 1, loss = 0 from `side`'s point of view.
int outcome_rank(Outcome o, Side side) {
  if (o == Outcome::Draw) return 1;
  bool side_won = (o == Outcome::FirstWin) == (side == Side::First);
  return side_won ? 2 : 0;
}

}  // namespace

std::optional<Outcome> game_over(const Hypergraph& h, GameVariant variant,
                                 const GameState& s) {
  bool all_touched = true;
  for (Mask e : h.edge_masks) {
    if ((e & ~s.maker) == 0) return Outcome::FirstWin;
    if (variant == GameVariant::Strong && (e & ~s.breaker) == 0) return Outcome::SecondWin;
    if (!(e & s.breaker)) all_touched = false;
  }
  if (variant == GameVariant::MakerBreaker && all_touched) return Outcome::SecondWin;
  if (s.occupied() == h.vertex_mask())
    return variant == GameVariant::MakerBreaker ? Outcome::SecondWin : Outcome::Draw;
  return std::nullopt;
}

namespace {

// Internal value encoding: Maker-Breaker is absolute (+1 Maker, -1 Breaker);
// Strong is relative to the side to move (+1 win, 0 draw, -1 loss).
struct Searcher {
  const Hypergraph& h;
  GameVariant variant;
  const TurnSchedule& schedule;
  SolveOptions opts;

  int n;
  int scale_exp;
  Mask all_vertices;
  std::vector<Mask> edges;
  std::vector<int> edge_size;

  std::uint64_t nodes = 0;
  std::uint64_t hits = 0;
  std::uint64_t node_limit = 0;
  Clock::time_point deadline{};
  bool has_deadline = false;

  struct Entry {
    Mask maker = 0;
    Mask breaker = 0;
    std::int8_t value = 0;
    bool used = false;
  };
  std::vector<Entry> table;
  std::uint64_t table_mask = 0;

  std::vector<Permutation> automorphisms;  // empty when pruning is off

  Searcher(const Hypergraph& h_, GameVariant variant_, const TurnSchedule& schedule_,
           const SolveOptions& opts_)
      : h(h_), variant(variant_), schedule(schedule_), opts(opts_) {
    n = h.vertex_count;
    scale_exp = h.edge_count() ? scale_exponent(h) : 0;
    all_vertices = h.vertex_mask();
    edges = h.edge_masks;
    edge_size.reserve(edges.size());
    for (const auto& e : h.edges) edge_size.push_back(static_cast<int>(e.size()));
    if (opts.use_memo) {
      table.resize(std::size_t{1} << opts.table_bits);
      table_mask = (std::uint64_t{1} << opts.table_bits) - 1;
    }
    if (opts.budget.max_nodes > 0) node_limit = opts.budget.max_nodes;
    if (opts.budget.max_seconds > 0) {
      deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(opts.budget.max_seconds));
      has_deadline = true;
    }
    if (opts.use_orbit_pruning && n <= 24) {
      try {
        automorphisms = automorphism_generators(h, 24, std::size_t{1} << 14);
      } catch (const std::exception&) {
        automorphisms.clear();
      }
      if (automorphisms.size() <= 1) automorphisms.clear();  // identity only
    }
  }

  void tick() {
    ++nodes;
    if (node_limit && nodes > node_limit) throw BudgetExceeded{};
    if (has_deadline && (nodes & 0xFFF) == 0 && Clock::now() > deadline) throw BudgetExceeded{};
  }

  static std::uint64_t mix(Mask maker, Mask breaker) {
    std::uint64_t x = maker * 0x9E3779B97F4A7C15ull ^ (breaker + 0xD1B54A32D192ED03ull);
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDull;
    x ^= x >> 29;
    return x;
  }

  std::optional<int> probe(Mask maker, Mask breaker) {
    if (table.empty()) return std::nullopt;
    const Entry& e = table[mix(maker, breaker) & table_mask];
    if (e.used && e.maker == maker && e.breaker == breaker) {
      ++hits;
      return e.value;
    }
    return std::nullopt;
  }

  void store(Mask maker, Mask breaker, int value) {
    if (table.empty()) return;
    Entry& e = table[mix(maker, breaker) & table_mask];
    e.maker = maker;
    e.breaker = breaker;
    e.value = static_cast<std::int8_t>(value);
    e.used = true;
  }

  long long move_weight(Mask maker, Mask breaker, int v) const {
    long long total = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      Mask e = edges[i];
      if (!(e & bit(v)) || (e & breaker)) continue;
      total += 1LL << (scale_exp - edge_size[i] + std::popcount(e & maker));
    }
    return total;
  }

  std::vector<int> ordered_moves(Mask maker, Mask breaker, Mask candidates) const {
    std::vector<std::pair<long long, int>> scored;
    Mask m = candidates;
    while (m) {
      int v = std::countr_zero(m);
      m &= m - 1;
      scored.emplace_back(-move_weight(maker, breaker, v), v);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<int> out;
    out.reserve(scored.size());
    for (auto& [w, v] : scored) out.push_back(v);
    return out;
  }

  // Collapses the candidate list to orbit representatives under the
  // automorphisms that stabilize the position. Only applied near the root.
  std::vector<int> prune_orbits(Mask maker, Mask breaker, const std::vector<int>& moves,
                                int depth) const {
    if (automorphisms.empty() || depth >= opts.orbit_depth || moves.size() <= 1) return moves;
    std::vector<const Permutation*> stab;
    for (const auto& p : automorphisms)
      if (p.apply(maker) == maker && p.apply(breaker) == breaker) stab.push_back(&p);
    if (stab.size() <= 1) return moves;
    std::vector<int> parent(n);
    for (int v = 0; v < n; ++v) parent[v] = v;
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (const auto* p : stab)
      for (int v = 0; v < n; ++v) {
        int a = find(v), b = find((*p)(v));
        if (a != b) parent[a] = b;
      }
    std::set<int> seen;
    std::vector<int> reps;
    for (int v : moves)
      if (seen.insert(find(v)).second) reps.push_back(v);
    return reps;
  }

  int search_mb(Mask maker, Mask breaker, int depth) {
    tick();
    bool any_live = false;
    Mask live_union = 0;
    Mask threat_vertices = 0;
    for (Mask e : edges) {
      if (e & breaker) continue;
      Mask free = e & ~maker;
      if (free == 0) return +1;  // Maker completed (empty edges count)
      any_live = true;
      live_union |= free;
      if ((free & (free - 1)) == 0) threat_vertices |= free;
    }
    if (!any_live) return -1;  // every edge touched by Breaker

    if (auto v = probe(maker, breaker)) return *v;

    int idx = std::popcount(maker) + std::popcount(breaker);
    Side side = schedule.side_at(idx);
    bool opponent_next = schedule.side_at(idx + 1) != side;

    int value;
    if (side == Side::First) {
      if (threat_vertices) return +1;  // Maker completes an edge now
      std::vector<int> moves =
          prune_orbits(maker, breaker, ordered_moves(maker, breaker, live_union), depth);
      value = -1;
      for (int v : moves) {
        if (search_mb(maker | bit(v), breaker, depth + 1) == +1) {
          value = +1;
          break;
        }
      }
    } else {
      if (threat_vertices && opponent_next) {
        // blocking the completion square is the only non-losing reply
        if (threat_vertices & (threat_vertices - 1)) return +1;
        int forced = std::countr_zero(threat_vertices);
        value = search_mb(maker, breaker | bit(forced), depth + 1);
        store(maker, breaker, value);
        return value;
      }
      std::vector<int> moves =
          prune_orbits(maker, breaker, ordered_moves(maker, breaker, live_union), depth);
      value = +1;
      for (int v : moves) {
        if (search_mb(maker, breaker | bit(v), depth + 1) == -1) {
          value = -1;
          break;
        }
      }
    }
    store(maker, breaker, value);
    return value;
  }

  int search_strong(Mask maker, Mask breaker, int depth) {
    tick();
    int idx = std::popcount(maker) + std::popcount(breaker);
    Side side = schedule.side_at(idx);
    Mask own = side == Side::First ? maker : breaker;
    Mask opp = side == Side::First ? breaker : maker;

    Mask candidates = 0;
    Mask own_wins = 0;
    Mask opp_threats = 0;
    bool any_winnable = false;
    for (Mask e : edges) {
      if ((e & opp) == 0) {
        Mask free = e & ~own;
        any_winnable = true;
        candidates |= free;
        if ((free & (free - 1)) == 0) own_wins |= free;
      }
      if ((e & own) == 0) {
        Mask free = e & ~opp;
        any_winnable = true;
        candidates |= free;
        if ((free & (free - 1)) == 0) opp_threats |= free;
      }
    }
    if (!any_winnable) return 0;  // nothing is completable by anyone
    if (own_wins) return +1;

    if (auto v = probe(maker, breaker)) return *v;

    bool opponent_next = schedule.side_at(idx + 1) != side;
    auto child = [&](int v) {
      Mask nm = side == Side::First ? maker | bit(v) : maker;
      Mask nb = side == Side::Second ? breaker | bit(v) : breaker;
      int val = search_strong(nm, nb, depth + 1);
      return opponent_next ? -val : val;
    };

    int value;
    if (opp_threats && opponent_next) {
      if (opp_threats & (opp_threats - 1)) {
        value = -1;  // two distinct completion squares cannot both be blocked
      } else {
        value = child(std::countr_zero(opp_threats));
      }
      store(maker, breaker, value);
      return value;
    }

    std::vector<int> moves =
        prune_orbits(maker, breaker, ordered_moves(maker, breaker, candidates), depth);
    value = -1;
    for (int v : moves) {
      value = std::max(value, child(v));
      if (value == +1) break;
    }
    store(maker, breaker, value);
    return value;
  }

  int search(Mask maker, Mask breaker, int depth) {
    return variant == GameVariant::MakerBreaker ? search_mb(maker, breaker, depth)
                                                : search_strong(maker, breaker, depth);
  }

  // Value of the position after `side` plays v, folded to `side`'s (or for
  // Maker-Breaker, the absolute) convention.
  int child_value(const GameState& s, Side side, int v) {
    GameState c = s.after(side, v);
    if (variant == GameVariant::Strong) {
      Mask own = c.side_mask(side);
      for (Mask e : edges)
        if ((e & bit(v)) && (e & ~own) == 0 && !(e & c.side_mask(other(side))))
          return +1;  // the move completes an edge
      int idx = s.move_count();
      bool opponent_next = schedule.side_at(idx + 1) != side;
      int val = search_strong(c.maker, c.breaker, 1);
      return opponent_next ? -val : val;
    }
    return search_mb(c.maker, c.breaker, 1);
  }
};

GameValue to_game_value(int internal, GameVariant variant) {
  if (variant == GameVariant::MakerBreaker)
    return internal > 0 ? GameValue::MakerWin : GameValue::BreakerWin;
  if (internal > 0) return GameValue::WinForToMove;
  if (internal < 0) return GameValue::LossForToMove;
  return GameValue::Draw;
}

// The mover's immediate completing moves, if any.
Mask immediate_wins(const Hypergraph& h, const GameState& state, Side side,
                    GameVariant variant) {
  if (variant == GameVariant::MakerBreaker && side == Side::Second) return 0;
  Mask own = state.side_mask(side);
  Mask opp = state.side_mask(other(side));
  Mask wins = 0;
  for (Mask e : h.edge_masks) {
    if (e & opp) continue;
    Mask free = e & ~own;
    if (free != 0 && (free & (free - 1)) == 0) wins |= free;
  }
  return wins;
}

}  // namespace

SolveResult solve(const Hypergraph& h, GameVariant variant, const GameState& state,
                  const TurnSchedule& schedule, const SolveOptions& options) {
  check_state(h, state, schedule);
  if (variant == GameVariant::Strong) {
    for (Mask e : h.edge_masks)
      if ((e & ~state.maker) == 0 || (e & ~state.breaker) == 0)
        throw std::invalid_argument("strong-game state already contains a completed edge");
  }
  auto t0 = Clock::now();
  SolveResult result;
  Searcher searcher(h, variant, schedule, options);

  int root = 0;
  bool exhausted = false;
  try {
    if (options.threads > 1) {
      Mask unplayed = h.vertex_mask() & ~state.occupied();
      int idx = state.move_count();
      Side side = unplayed ? schedule.side_at(idx) : Side::First;
      if (!unplayed || immediate_wins(h, state, side, variant) ||
          game_over(h, variant, state)) {
        root = searcher.search(state.maker, state.breaker, 0);
      } else {
        std::vector<int> moves;
        for (int v = 0; v < h.vertex_count; ++v)
          if (unplayed & bit(v)) moves.push_back(v);
        moves = searcher.prune_orbits(state.maker, state.breaker, moves, 0);
        std::vector<int> values(moves.size());
        std::vector<std::uint64_t> node_counts(moves.size(), 0);
        std::exception_ptr error;
        std::mutex err_mu;
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
          Searcher ws(h, variant, schedule, options);
          while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= moves.size()) break;
            try {
              values[i] = ws.child_value(state, side, moves[i]);
              node_counts[i] += ws.nodes;
            } catch (...) {
              std::lock_guard<std::mutex> lk(err_mu);
              if (!error) error = std::current_exception();
              return;
            }
          }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < options.threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
        for (auto c : node_counts) searcher.nodes += c;
        if (variant == GameVariant::MakerBreaker && side == Side::Second) {
          root = +1;
          for (int v : values) root = std::min(root, v);
        } else {
          root = -1;
          for (int v : values) root = std::max(root, v);
        }
      }
    } else {
      root = searcher.search(state.maker, state.breaker, 0);
    }
  } catch (const BudgetExceeded&) {
    exhausted = true;
  }

  if (exhausted) {
    result.value = GameValue::Unknown;
    result.nodes_expanded = searcher.nodes;
    result.table_hits = searcher.hits;
    result.elapsed = Clock::now() - t0;
    return result;
  }

  result.value = to_game_value(root, variant);

  // Best move: an immediate completion when one exists, otherwise the
  // lowest-index move whose resulting value matches the root value.
  Mask unplayed = h.vertex_mask() & ~state.occupied();
  if (unplayed && !game_over(h, variant, state)) {
    int idx = state.move_count();
    Side side = schedule.side_at(idx);
    Mask wins = immediate_wins(h, state, side, variant);
    try {
      if (wins) {
        result.best_move = std::countr_zero(wins);
        result.ply_bound = 1;
      } else {
        for (int v = 0; v < h.vertex_count; ++v) {
          if (!(unplayed & bit(v))) continue;
          if (searcher.child_value(state, side, v) == root) {
            result.best_move = v;
            break;
          }
        }
      }
    } catch (const BudgetExceeded&) {
      result.best_move = std::nullopt;
    }
  }
  result.nodes_expanded = searcher.nodes;
  result.table_hits = searcher.hits;
  result.elapsed = Clock::now() - t0;

  // Strategy stealing: from the empty state under standard alternation the
  // second player can never win the strong game.
  if (variant == GameVariant::Strong && state.occupied() == 0 && schedule.is_standard() &&
      result.value == GameValue::LossForToMove)
    throw std::logic_error("solver returned a second-player strong win from the empty state");
  return result;
}

int best_move(const Hypergraph& h, GameVariant variant, const GameState& state,
              const TurnSchedule& schedule, const SolveOptions& options) {
  if ((h.vertex_mask() & ~state.occupied()) == 0)
    throw std::invalid_argument("no unplayed vertices");
  if (game_over(h, variant, state))
    throw std::invalid_argument("state is terminal");
  SolveResult r = solve(h, variant, state, schedule, options);
  if (!r.best_move) throw std::runtime_error("budget exhausted before a move was certified");
  return *r.best_move;
}

std::string StrategyCertificate::serialize() const {
  std::ostringstream out;
  out << "certificate variant=" << (variant == GameVariant::Strong ? "strong" : "mb")
      << " side=" << (side == Side::First ? "first" : "second")
      << " claimed=" << outcome_name(claimed, variant) << " schedule=" << schedule.str() << "\n";
  for (const auto& [key, move] : moves)
    out << std::hex << key.first << " " << key.second << std::dec << " " << move << "\n";
  return out.str();
}

StrategyCertificate StrategyCertificate::deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  std::getline(in, header);
  StrategyCertificate cert{GameVariant::Strong, Side::First, Outcome::FirstWin,
                           TurnSchedule::standard(), {}};
  std::istringstream hs(header);
  std::string tok;
  hs >> tok;
  if (tok != "certificate") throw std::invalid_argument("bad certificate header");
  while (hs >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "variant") {
      cert.variant = val == "strong" ? GameVariant::Strong : GameVariant::MakerBreaker;
    } else if (key == "side") {
      cert.side = val == "first" ? Side::First : Side::Second;
    } else if (key == "claimed") {
      if (val == "draw") cert.claimed = Outcome::Draw;
      else if (val == "xeno-win" || val == "maker-win") cert.claimed = Outcome::FirstWin;
      else cert.claimed = Outcome::SecondWin;
    } else if (key == "schedule") {
      auto bar = val.find('|');
      cert.schedule = TurnSchedule::parse(val.substr(0, bar));
      if (bar != std::string::npos && bar + 1 < val.size())
        cert.schedule.tail_start = val[bar + 1] == 'X' ? Side::First : Side::Second;
    }
  }
  Mask a, b;
  int mv;
  while (in >> std::hex >> a >> b >> std::dec >> mv) cert.moves[{a, b}] = mv;
  return cert;
}

StrategyCertificate extract_certificate(const Hypergraph& h, GameVariant variant, Side side,
                                        const GameState& state, const TurnSchedule& schedule,
                                        const SolveOptions& options) {
  SolveResult root = solve(h, variant, state, schedule, options);
  if (root.value == GameValue::Unknown)
    throw std::runtime_error("cannot certify: solve ran out of budget");
  Outcome claimed = outcome_of(root.value, state.to_move);
  StrategyCertificate cert{variant, side, claimed, schedule, {}};
  int want = outcome_rank(claimed, side);

  Searcher searcher(h, variant, schedule, options);
  std::set<std::pair<Mask, Mask>> visited;

  std::function<void(GameState)> walk = [&](GameState s) {
    if (!visited.insert({s.maker, s.breaker}).second) return;
    if (game_over(h, variant, s)) return;
    int idx = s.move_count();
    Side mover = schedule.side_at(idx);
    Mask unplayed = h.vertex_mask() & ~s.occupied();
    if (mover == side) {
      int chosen = -1;
      Mask wins = immediate_wins(h, s, mover, variant);
      if (wins) {
        chosen = std::countr_zero(wins);
      } else {
        for (int v = 0; v < h.vertex_count && chosen < 0; ++v) {
          if (!(unplayed & bit(v))) continue;
          int val = searcher.child_value(s, mover, v);
          GameValue gv = to_game_value(val, variant);
          Side next_side = schedule.side_at(idx + 1);
          Outcome oc = variant == GameVariant::MakerBreaker ? outcome_of(gv, next_side)
                       : outcome_of(gv, mover);  // strong values were folded to the mover
          if (outcome_rank(oc, side) >= want) chosen = v;
        }
      }
      if (chosen < 0) throw std::logic_error("certificate extraction found no preserving move");
      cert.moves[{s.maker, s.breaker}] = chosen;
      walk(s.after(mover, chosen));
    } else {
      for (int v = 0; v < h.vertex_count; ++v)
        if (unplayed & bit(v)) walk(s.after(mover, v));
    }
  };
  walk(state);
  return cert;
}

bool verify_certificate(const Hypergraph& h, const StrategyCertificate& cert,
                        const GameState& state) {
  std::set<std::pair<Mask, Mask>> visited;
  int want = outcome_rank(cert.claimed, cert.side);
  bool ok = true;

  std::function<void(GameState)> walk = [&](GameState s) {
    if (!ok || !visited.insert({s.maker, s.breaker}).second) return;
    if (auto result = game_over(h, cert.variant, s)) {
      // a line may end better for the certified side than claimed, never worse
      if (outcome_rank(*result, cert.side) < want) ok = false;
      return;
    }
    int idx = s.move_count();
    Side mover = cert.schedule.side_at(idx);
    Mask unplayed = h.vertex_mask() & ~s.occupied();
    if (mover == cert.side) {
      auto it = cert.moves.find({s.maker, s.breaker});
      if (it == cert.moves.end())
        throw std::invalid_argument("certificate missing a reachable state");
      int v = it->second;
      if (v < 0 || v >= h.vertex_count || !(unplayed & bit(v)))
        throw std::invalid_argument("certificate prescribes an illegal move");
      walk(s.after(mover, v));
    } else {
      for (int v = 0; v < h.vertex_count; ++v) {
        if (!(unplayed & bit(v))) continue;
        walk(s.after(mover, v));
        if (!ok) return;
      }
    }
  };
  walk(state);
  return ok;
}

}  // namespace ttt
