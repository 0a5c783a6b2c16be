#include "ttt/strategy.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ttt {

namespace {

std::vector<int> unplayed_vertices(const Hypergraph& h, const GameState& state) {
  std::vector<int> out;
  Mask free = h.vertex_mask() & ~state.occupied();
  while (free) {
    out.push_back(std::countr_zero(free));
    free &= free - 1;
  }
  return out;
}

int outcome_rank(Outcome o, Side side) {
  if (o == Outcome::Draw) return 1;
  bool side_won = (o == Outcome::FirstWin) == (side == Side::First);
  return side_won ? 2 : 0;
}

}  // namespace

std::optional<Scissor> find_scissor(const Hypergraph& h, const GameState& state, Side side) {
  Mask own = state.side_mask(side);
  Mask opp = state.side_mask(other(side));
  Mask played = own | opp;
  for (int pivot = 0; pivot < h.vertex_count; ++pivot) {
    if (played & bit(pivot)) continue;
    // witness blocks: size 3, through the pivot, opponent-free, exactly one
    // owned vertex, completion square unplayed
    std::vector<std::tuple<int, int, int>> witnesses;  // (edge, owned, completion)
    for (int i = 0; i < h.edge_count(); ++i) {
      Mask e = h.edge_masks[i];
      if (h.edges[i].size() != 3 || !(e & bit(pivot)) || (e & opp)) continue;
      Mask owned_in = e & own;
      if (std::popcount(owned_in) != 1) continue;
      Mask completion = e & ~own & ~bit(pivot);
      if (std::popcount(completion) != 1) continue;
      witnesses.emplace_back(i, std::countr_zero(owned_in), std::countr_zero(completion));
    }
    for (std::size_t a = 0; a < witnesses.size(); ++a)
      for (std::size_t b = a + 1; b < witnesses.size(); ++b) {
        auto [e1, o1, c1] = witnesses[a];
        auto [e2, o2, c2] = witnesses[b];
        if (c1 == c2) continue;
        if (h.edge_masks[e1] == h.edge_masks[e2]) continue;  // repeated block
        return Scissor{pivot, e1, e2, o1, o2, c1, c2};
      }
  }
  return std::nullopt;
}

int TieBreak::pick(const std::vector<int>& candidates) const {
  if (candidates.empty()) throw std::invalid_argument("no candidates");
  int best = candidates.front();
  for (int v : candidates) {
    int rv = v < static_cast<int>(rank.size()) ? rank[v] : 0;
    int rb = best < static_cast<int>(rank.size()) ? rank[best] : 0;
    if (rv < rb || (rv == rb && v < best)) best = v;
  }
  return best;
}

std::vector<int> winning_moves(const Hypergraph& h, const GameState& state, Side side,
                               GameVariant variant) {
  Mask own = state.side_mask(side);
  Mask opp = state.side_mask(other(side));
  Mask unplayed = h.vertex_mask() & ~state.occupied();
  Mask wins = 0;
  if (variant == GameVariant::Strong || side == Side::First) {
    for (Mask e : h.edge_masks) {
      if (e & opp) continue;
      Mask free = e & ~own;
      if (free != 0 && (free & (free - 1)) == 0) wins |= free;
    }
  } else {
    // Breaker finishes by touching the last untouched edges in one move.
    Mask common = ~Mask{0};
    bool any_untouched = false;
    for (Mask e : h.edge_masks)
      if (!(e & own)) {
        any_untouched = true;
        common &= e;
      }
    if (any_untouched) wins = common & unplayed;
  }
  std::vector<int> out;
  wins &= unplayed;
  while (wins) {
    out.push_back(std::countr_zero(wins));
    wins &= wins - 1;
  }
  return out;
}

std::vector<int> blocking_moves(const Hypergraph& h, const GameState& state, Side side,
                                GameVariant variant) {
  Side opp_side = other(side);
  if (variant == GameVariant::MakerBreaker && opp_side == Side::Second) return {};
  GameState mirrored = state;
  mirrored.to_move = opp_side;
  return winning_moves(h, mirrored, opp_side, variant);
}

namespace {

std::vector<int> max_weight_moves(const Hypergraph& h, const GameState& state) {
  int se = scale_exponent(h);
  long long best = -1;
  std::vector<int> out;
  for (int v : unplayed_vertices(h, state)) {
    long long w = scaled_vertex_weight(h, state.maker, state.breaker, v, se);
    if (w > best) {
      best = w;
      out.clear();
    }
    if (w == best) out.push_back(v);
  }
  return out;
}

}  // namespace

std::optional<int> move_tier(const Hypergraph& h, const GameState& state, Side side, int v,
                             GameVariant variant) {
  auto contains = [v](const std::vector<int>& xs) {
    return std::find(xs.begin(), xs.end(), v) != xs.end();
  };
  auto wins = winning_moves(h, state, side, variant);
  if (!wins.empty()) return contains(wins) ? std::optional<int>(1) : std::nullopt;
  auto blocks = blocking_moves(h, state, side, variant);
  if (!blocks.empty()) return contains(blocks) ? std::optional<int>(2) : std::nullopt;
  return contains(max_weight_moves(h, state)) ? std::optional<int>(3) : std::nullopt;
}

Strategy score_optimizing_strategy(TieBreak tiebreak, GameVariant variant) {
  Strategy s;
  s.name = "score-opt";
  s.applicability = "any hypergraph";
  s.choose = [tiebreak, variant](const Hypergraph& h, const GameState& state, Side side) {
    auto wins = winning_moves(h, state, side, variant);
    if (!wins.empty()) return tiebreak.pick(wins);
    auto blocks = blocking_moves(h, state, side, variant);
    if (!blocks.empty()) return tiebreak.pick(blocks);
    auto heavy = max_weight_moves(h, state);
    if (heavy.empty()) throw std::invalid_argument("no legal moves");
    return tiebreak.pick(heavy);
  };
  return s;
}

namespace {

int lowest_unplayed(const Hypergraph& h, const GameState& state) {
  Mask free = h.vertex_mask() & ~state.occupied();
  if (!free) throw std::invalid_argument("no legal moves");
  return std::countr_zero(free);
}

// tier-1 then tier-2, then fall through to the caller's script
std::optional<int> forced_reply(const Hypergraph& h, const GameState& state, Side side,
                                GameVariant variant) {
  auto wins = winning_moves(h, state, side, variant);
  if (!wins.empty()) return wins.front();
  auto blocks = blocking_moves(h, state, side, variant);
  if (!blocks.empty()) return blocks.front();
  return std::nullopt;
}

// Unique block (as a vertex set) through two points of a design with every
// pair covered; returns the third point of the lowest matching edge.
int third_point(const std::vector<std::vector<int>>& blocks, int a, int b) {
  for (const auto& blk : blocks) {
    bool has_a = false, has_b = false;
    for (int p : blk) {
      has_a |= p == a;
      has_b |= p == b;
    }
    if (has_a && has_b)
      for (int p : blk)
        if (p != a && p != b) return p;
  }
  throw std::logic_error("no block through the pair");
}

}  // namespace

Strategy sts_xeno_strategy(const Design& design) {
  if (design.params.k != 3) throw std::invalid_argument("needs a triple system");
  if (design.params.v < 7) throw std::invalid_argument("needs v >= 7");
  // Accept lambda-fold repetitions of a Steiner system: deduplicated blocks
  // must cover every pair exactly once, each with the same multiplicity.
  std::map<std::vector<int>, int> mult;
  for (auto b : design.blocks) {
    std::sort(b.begin(), b.end());
    ++mult[b];
  }
  std::vector<std::vector<int>> base;
  int common = -1;
  for (auto& [blk, m] : mult) {
    if (common == -1) common = m;
    if (m != common) throw std::invalid_argument("not a lambda-fold Steiner system");
    base.push_back(blk);
  }
  auto rep = validate_bibd(base, design.params.v, 3, 1);
  if (!rep.valid()) throw std::invalid_argument("not a lambda-fold Steiner system");

  Strategy s;
  s.name = "sts-xeno";
  s.applicability = "Steiner triple systems, v >= 7 (lambda-fold accepted)";
  auto blocks = base;
  s.choose = [blocks](const Hypergraph& h, const GameState& state, Side side) {
    if (side != Side::First) throw std::invalid_argument("first-player strategy");
    int r = std::popcount(state.maker);
    if (r == 0) return 0;  // arbitrary first move, pinned for determinism
    if (auto forced = forced_reply(h, state, side, GameVariant::Strong)) return *forced;
    if (r == 1) {
      // stay off the block through X1 and O1
      int o1 = std::countr_zero(state.breaker);
      int x1 = std::countr_zero(state.maker);
      int c = third_point(blocks, x1, o1);
      for (int v = 0; v < h.vertex_count; ++v) {
        if ((state.occupied() & bit(v)) || v == c) continue;
        return v;
      }
    }
    return lowest_unplayed(h, state);
  };
  return s;
}

Strategy td2_xeno_strategy(const TransversalDesign& td) {
  if (td.k != 2) throw std::invalid_argument("needs a TD(2,n)");
  if (td.n < 2) throw std::invalid_argument("needs n >= 2");
  Strategy s;
  s.name = "td2-xeno";
  s.applicability = "TD(2,n), n >= 2";
  int first_point = td.groups[0][0];
  s.choose = [first_point](const Hypergraph& h, const GameState& state, Side side) {
    if (side != Side::First) throw std::invalid_argument("first-player strategy");
    if (state.maker == 0) return first_point;
    if (auto forced = forced_reply(h, state, side, GameVariant::Strong)) return *forced;
    return lowest_unplayed(h, state);
  };
  return s;
}

Strategy td3_xeno_strategy(const TransversalDesign& td) {
  if (td.k != 3) throw std::invalid_argument("needs a TD(3,n)");
  if (td.n < 3) throw std::invalid_argument("needs n >= 3");
  Strategy s;
  s.name = "td3-xeno";
  s.applicability = "TD(3,n), n >= 3";
  auto groups = td.groups;
  auto blocks = td.blocks;
  auto group_of = [groups](int p) {
    for (int g = 0; g < static_cast<int>(groups.size()); ++g)
      for (int q : groups[g])
        if (q == p) return g;
    return -1;
  };
  s.choose = [groups, blocks, group_of](const Hypergraph& h, const GameState& state,
                                        Side side) {
    if (side != Side::First) throw std::invalid_argument("first-player strategy");
    int r = std::popcount(state.maker);
    if (r == 0) return groups[0][0];
    if (auto forced = forced_reply(h, state, side, GameVariant::Strong)) return *forced;

    auto lowest_free_in = [&](int g) -> std::optional<int> {
      for (int p : groups[g])
        if (!(state.occupied() & bit(p))) return p;
      return std::nullopt;
    };
    int x1 = groups[0][0];  // pinned first move
    int g1 = group_of(x1);

    if (r == 1) {
      int o1 = std::countr_zero(state.breaker);
      if (group_of(o1) == g1) {
        // play the same group again
        if (auto v = lowest_free_in(g1)) return *v;
      } else {
        // the other group she did not play in, avoiding the block through X1, O1
        int ga = group_of(o1);
        int gb = 3 - g1 - ga;
        int w = third_point(blocks, x1, o1);
        for (int p : groups[gb])
          if (p != w && !(state.occupied() & bit(p))) return p;
      }
      return lowest_unplayed(h, state);
    }
    if (r == 2) {
      int x2 = std::countr_zero(state.maker & ~bit(x1));
      if (group_of(x2) == g1) {
        // both of her moves are in our group: any point of the next group scissors
        int g2 = g1 == 0 ? 1 : 0;
        if (auto v = lowest_free_in(g2)) return *v;
      } else {
        // her stones share a group; any further point of it is a scissor
        int ga = group_of(std::countr_zero(state.breaker));
        if (auto v = lowest_free_in(ga)) return *v;
      }
    }
    return lowest_unplayed(h, state);
  };
  return s;
}

Strategy ophelia_handicap_attack(const TransversalDesign& td) {
  if (td.k != 3) throw std::invalid_argument("needs a TD(3,n)");
  if (td.n < 2) throw std::invalid_argument("needs n >= 2");
  Strategy s;
  s.name = "ophelia-handicap";
  s.applicability = "TD(3,n), n >= 2, under the X,O,O,... schedule";
  auto groups = td.groups;
  auto blocks = td.blocks;
  auto group_of = [groups](int p) {
    for (int g = 0; g < static_cast<int>(groups.size()); ++g)
      for (int q : groups[g])
        if (q == p) return g;
    return -1;
  };
  s.choose = [groups, blocks, group_of](const Hypergraph& h, const GameState& state,
                                        Side side) {
    if (side != Side::Second) throw std::invalid_argument("second-player strategy");
    int own = std::popcount(state.breaker);
    int theirs = std::popcount(state.maker);
    // under X,O,O and alternation the first player holds max(1, own) stones
    // whenever it is our turn
    if (theirs != std::max(1, own))
      throw std::invalid_argument("this attack needs the double-move opening schedule");
    if (auto forced = forced_reply(h, state, side, GameVariant::Strong)) return *forced;
    auto lowest_free_in = [&](int g) -> std::optional<int> {
      for (int p : groups[g])
        if (!(state.occupied() & bit(p))) return p;
      return std::nullopt;
    };
    if (own == 0) {
      int x1 = std::countr_zero(state.maker);
      int g1 = group_of(x1);
      int ga = g1 == 0 ? 1 : 0;
      if (auto v = lowest_free_in(ga)) return *v;
    } else if (own == 1) {
      int o1 = std::countr_zero(state.breaker);
      int x1 = std::countr_zero(state.maker);
      int g1 = group_of(x1);
      int ga = group_of(o1);
      int gb = 3 - g1 - ga;
      int w = third_point(blocks, x1, o1);  // completing {X1,O1,w} would invite a block
      for (int p : groups[gb])
        if (p != w && !(state.occupied() & bit(p))) return p;
    } else if (own == 2) {
      // he blocked our pair; a free point of his group is a scissor
      Mask xeno = state.maker;
      int xa = std::countr_zero(xeno);
      int g1 = group_of(xa);
      if (auto v = lowest_free_in(g1)) return *v;
    }
    return lowest_unplayed(h, state);
  };
  return s;
}

Strategy scripted_strategy(std::string name, std::vector<int> moves) {
  Strategy s;
  s.name = std::move(name);
  s.applicability = "replay";
  s.choose = [moves](const Hypergraph&, const GameState& state, Side side) {
    std::size_t own = std::popcount(state.side_mask(side));
    if (own >= moves.size()) throw std::out_of_range("script exhausted");
    return moves[own];
  };
  return s;
}

Strategy uniform_random_strategy(std::uint64_t seed) {
  Strategy s;
  s.name = "random";
  s.applicability = "any hypergraph";
  s.choose = [seed](const Hypergraph& h, const GameState& state, Side) {
    auto free = unplayed_vertices(h, state);
    if (free.empty()) throw std::invalid_argument("no legal moves");
    std::mt19937_64 rng(seed ^ (state.maker * 0x9E3779B97F4A7C15ull) ^
                        (state.breaker + 0xD1B54A32D192ED03ull));
    return free[rng() % free.size()];
  };
  return s;
}

Strategy solver_strategy(GameVariant variant, const TurnSchedule& schedule,
                         SolveOptions options) {
  Strategy s;
  s.name = "solver";
  s.applicability = "any hypergraph within solver bounds";
  s.choose = [variant, schedule, options](const Hypergraph& h, const GameState& state, Side) {
    GameState st = state;
    st.to_move = schedule.side_at(st.move_count());
    return best_move(h, variant, st, schedule, options);
  };
  return s;
}

int Transcript::moves_by(Side s) const {
  int c = 0;
  for (const auto& m : moves) c += m.side == s;
  return c;
}

std::string Transcript::str() const {
  std::ostringstream out;
  out << "game variant=" << (variant == GameVariant::Strong ? "strong" : "mb")
      << " schedule=" << schedule.str();
  if (result)
    out << " result=" << outcome_name(*result, variant);
  else
    out << " result=fault fault=\"" << fault << "\"";
  if (winning_edge) out << " winning_edge=" << *winning_edge;
  out << " moves=" << moves.size() << "\n";
  for (const auto& m : moves) {
    out << "move idx=" << m.index << " side=" << (m.side == Side::First ? "X" : "O")
        << " vertex=" << m.vertex << " tier=" << m.tier << " forced=" << (m.forced ? 1 : 0)
        << " max_weight=" << (m.max_weight ? 1 : 0) << " score_before=" << m.score_before.str()
        << " score_after=" << m.score_after.str() << "\n";
  }
  return out.str();
}

Transcript simulate(const Hypergraph& h, GameVariant variant, const Strategy& first,
                    const Strategy& second, const TurnSchedule& schedule) {
  Transcript t;
  t.variant = variant;
  t.schedule = schedule;
  GameState state;
  state.to_move = schedule.side_at(0);
  int idx = 0;
  while (true) {
    if (auto over = game_over(h, variant, state)) {
      t.result = over;
      if (*over == Outcome::FirstWin) t.winning_edge = completed_edge(h, state.maker);
      if (*over == Outcome::SecondWin && variant == GameVariant::Strong)
        t.winning_edge = completed_edge(h, state.breaker);
      return t;
    }
    Side side = schedule.side_at(idx);
    const Strategy& strat = side == Side::First ? first : second;
    int v;
    try {
      GameState view = state;
      view.to_move = side;
      v = strat.choose(h, view, side);
    } catch (const std::exception& e) {
      t.fault = strat.name + std::string(": ") + e.what();
      return t;
    }
    if (v < 0 || v >= h.vertex_count || (state.occupied() & bit(v))) {
      t.fault = strat.name + ": illegal move " + std::to_string(v);
      return t;
    }
    MoveRecord rec;
    rec.index = idx;
    rec.side = side;
    rec.vertex = v;
    rec.score_before = total_score(h, state);
    GameState view = state;
    view.to_move = side;
    auto tier = move_tier(h, view, side, v, variant);
    rec.tier = tier.value_or(0);
    auto heavy = max_weight_moves(h, state);
    rec.max_weight = std::find(heavy.begin(), heavy.end(), v) != heavy.end();
    if (tier && *tier <= 2) {
      auto set = *tier == 1 ? winning_moves(h, view, side, variant)
                            : blocking_moves(h, view, side, variant);
      rec.forced = set.size() == 1;
    }
    state = state.after(side, v);
    state.to_move = schedule.side_at(idx + 1);
    rec.score_after = total_score(h, state);
    t.moves.push_back(rec);
    ++idx;
  }
}

VerifyOutcome verify_strategy_exhaustive(const Hypergraph& h, GameVariant variant,
                                         const Strategy& strategy, Side side, Outcome claimed,
                                         const TurnSchedule& schedule) {
  VerifyOutcome out;
  out.ok = true;
  int want = outcome_rank(claimed, side);
  std::set<std::pair<Mask, Mask>> visited;

  std::function<void(GameState, std::string)> walk = [&](GameState s, std::string path) {
    if (!out.ok) return;
    if (!visited.insert({s.maker, s.breaker}).second) return;
    ++out.states;
    if (auto over = game_over(h, variant, s)) {
      ++out.lines;
      out.max_own_moves =
          std::max(out.max_own_moves, std::popcount(s.side_mask(side)));
      if (outcome_rank(*over, side) < want) {
        out.ok = false;
        out.counterexample = path + " -> " + outcome_name(*over, variant);
      }
      return;
    }
    int idx = s.move_count();
    Side mover = schedule.side_at(idx);
    s.to_move = mover;
    if (mover == side) {
      int v = strategy.choose(h, s, side);  // exceptions propagate: inapplicable state
      if (v < 0 || v >= h.vertex_count || (s.occupied() & bit(v))) {
        out.ok = false;
        out.counterexample = path + " -> illegal move " + std::to_string(v);
        return;
      }
      walk(s.after(mover, v), path + (path.empty() ? "" : " ") +
                                  (mover == Side::First ? "X" : "O") + std::to_string(v));
    } else {
      Mask free = h.vertex_mask() & ~s.occupied();
      while (free) {
        int v = std::countr_zero(free);
        free &= free - 1;
        walk(s.after(mover, v), path + (path.empty() ? "" : " ") +
                                    (mover == Side::First ? "X" : "O") + std::to_string(v));
        if (!out.ok) return;
      }
    }
  };
  walk(GameState{}, "");
  return out;
}

}  // namespace ttt
