#include <doctest.h>

#include <random>
#include <set>

#include "ttt/designs.hpp"
#include "ttt/scoring.hpp"

using namespace ttt;

namespace {

GameState state_of(Mask maker, Mask breaker) {
  GameState s;
  s.maker = maker;
  s.breaker = breaker;
  return s;
}

// k-uniform linear hypergraphs for criterion property tests: grow random
// k-subsets rejecting any repeated pair.
Hypergraph random_linear_uniform(std::mt19937_64& rng, int n, int k, int want_edges) {
  std::set<std::pair<int, int>> used;
  std::vector<std::vector<int>> edges;
  for (int attempts = 0; attempts < 200 && static_cast<int>(edges.size()) < want_edges;
       ++attempts) {
    std::set<int> e;
    while (static_cast<int>(e.size()) < k) e.insert(static_cast<int>(rng() % n));
    std::vector<int> edge(e.begin(), e.end());
    bool fresh = true;
    for (std::size_t i = 0; i < edge.size() && fresh; ++i)
      for (std::size_t j = i + 1; j < edge.size(); ++j)
        if (used.count({edge[i], edge[j]})) {
          fresh = false;
          break;
        }
    if (!fresh) continue;
    for (std::size_t i = 0; i < edge.size(); ++i)
      for (std::size_t j = i + 1; j < edge.size(); ++j) used.insert({edge[i], edge[j]});
    edges.push_back(edge);
  }
  return Hypergraph(n, edges);
}

}  // namespace

TEST_CASE("dyadic arithmetic is exact and normalized") {
  Dyadic half = Dyadic::make(4, 3);
  CHECK(half.num == 1);
  CHECK(half.exp == 1);
  CHECK(half.str() == "1/2");
  CHECK((half + half).str() == "1");
  CHECK(Dyadic::make(0, 5).str() == "0");
  CHECK(Dyadic::make(7, 3) < Dyadic::make(1, 0));
  CHECK(Dyadic::make(7, 3) + Dyadic::make(1, 3) == Dyadic::make(1, 0));
}

TEST_CASE("edge, vertex, and total weights follow the occupancy rule") {
  Hypergraph sts7 = to_hypergraph(make_sts(7));
  GameState empty;
  CHECK(total_score(sts7, empty) == Dyadic::make(7, 3));  // 7 blocks of size 3

  Hypergraph board = tic_tac_toe_3x3();
  // the finished game of the worked 3x3 example: X on 1,9,7,4; O on 5,3,8
  GameState fig = state_of(bit(0) | bit(8) | bit(6) | bit(3), bit(4) | bit(2) | bit(7));
  CHECK(total_score(board, fig) == Dyadic::make(1, 0));

  // any edge containing a second-player vertex weighs nothing
  for (int i = 0; i < board.edge_count(); ++i)
    if (board.edge_masks[i] & fig.breaker) CHECK(edge_weight(board, fig, i) == Dyadic::zero());

  // the four fixtures without heavy vertices score 1/2, 3/8, 1/8, 1/4
  CHECK(total_score(fixture_h(4), empty) == Dyadic::make(1, 1));
  CHECK(total_score(fixture_h(5), empty) == Dyadic::make(3, 3));
  CHECK(total_score(fixture_h(6), empty) == Dyadic::make(1, 3));
  CHECK(total_score(fixture_h(7), empty) == Dyadic::make(1, 2));
  // and the three with a double threat all start at 5/8
  for (int i : {1, 2, 3}) CHECK(total_score(fixture_h(i), empty) == Dyadic::make(5, 3));

  // vertex weight sums the incident edges: u and v of the first fixture carry 3/8
  Hypergraph h1 = fixture_h(1);
  CHECK(vertex_weight(h1, empty, 5) == Dyadic::make(3, 3));
  CHECK(vertex_weight(h1, empty, 6) == Dyadic::make(3, 3));
  CHECK(vertex_weight(h1, empty, 2) == Dyadic::make(1, 2));
}

TEST_CASE("weights double on first-player moves and vanish on second-player moves") {
  std::mt19937_64 rng(2024);
  int transitions = 0;
  while (transitions < 1000) {
    int n = 4 + static_cast<int>(rng() % 6);
    int m = 1 + static_cast<int>(rng() % 8);
    std::vector<std::vector<int>> edges;
    for (int i = 0; i < m; ++i) {
      std::set<int> e;
      int k = 2 + static_cast<int>(rng() % 3);
      while (static_cast<int>(e.size()) < std::min(k, n)) e.insert(static_cast<int>(rng() % n));
      edges.emplace_back(e.begin(), e.end());
    }
    Hypergraph h(n, edges);
    // a random consistent position
    GameState s;
    for (int v = 0; v < n; ++v) {
      int roll = static_cast<int>(rng() % 3);
      if (roll == 1) s.maker |= bit(v);
      if (roll == 2) s.breaker |= bit(v);
    }
    Mask free = h.vertex_mask() & ~s.occupied();
    if (!free) continue;
    int v = std::countr_zero(free);
    int se = scale_exponent(h);
    Side side = rng() % 2 ? Side::First : Side::Second;
    GameState after = s.after(side, v);
    for (int i = 0; i < h.edge_count(); ++i) {
      long long before = scaled_edge_weight(h, s.maker, s.breaker, i, se);
      long long now = scaled_edge_weight(h, after.maker, after.breaker, i, se);
      if (!(h.edge_masks[i] & bit(v))) {
        CHECK(now == before);
      } else if (side == Side::First) {
        CHECK((now == before || now == 2 * before));
        if (before != 0) CHECK(now == 2 * before);
      } else {
        CHECK(now == 0);
      }
      ++transitions;
    }
  }
}

TEST_CASE("initial score of a uniform hypergraph and the first-move bound") {
  for (auto make : {+[] { return to_hypergraph(make_sts(7)); },
                    +[] { return to_hypergraph(make_sts(9)); },
                    +[] { return to_hypergraph(make_td(4, 3)); }}) {
    Hypergraph h = make();
    int k = static_cast<int>(h.edges.front().size());
    GameState empty;
    CHECK(total_score(h, empty) == Dyadic::make(h.edge_count(), k));

    int se = scale_exponent(h);
    long long maxdeg = 0;
    for (int u = 0; u < h.vertex_count; ++u) {
      long long d = 0;
      for (Mask e : h.edge_masks)
        if (e & bit(u)) ++d;
      maxdeg = std::max(maxdeg, d);
    }
    for (int u = 0; u < h.vertex_count; ++u) {
      GameState s;
      s.maker = bit(u);
      long long scaled = scaled_total_score(h, s.maker, s.breaker, se);
      long long base = scaled_total_score(h, 0, 0, se);
      CHECK(scaled == base + scaled_vertex_weight(h, 0, 0, u, se));
      CHECK(Dyadic::make(scaled, se) <=
            Dyadic::make(h.edge_count() + maxdeg, k));
    }
  }
}

TEST_CASE("a heaviest second-player reply keeps the score from rising") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    Hypergraph h = random_linear_uniform(rng, 6 + static_cast<int>(rng() % 4), 3, 6);
    if (h.edge_count() == 0) continue;
    int se = scale_exponent(h);
    // random position with Breaker to move
    GameState s;
    int stones = static_cast<int>(rng() % 3);
    for (int i = 0; i < stones; ++i) {
      Mask free = h.vertex_mask() & ~s.occupied();
      if (!free) break;
      s.maker |= bit(std::countr_zero(free));
      free = h.vertex_mask() & ~s.occupied();
      if (!free) break;
      if (i + 1 < stones) s.breaker |= bit(std::countr_zero(free));
    }
    // Maker has one extra stone: Breaker to move
    Mask free = h.vertex_mask() & ~s.occupied();
    if (!free) continue;
    long long before = scaled_total_score(h, s.maker, s.breaker, se);
    // Breaker takes an unplayed vertex of maximum weight
    int pick = -1;
    long long heaviest = -1;
    for (Mask f = free; f; f &= f - 1) {
      int v = std::countr_zero(f);
      long long w = scaled_vertex_weight(h, s.maker, s.breaker, v, se);
      if (w > heaviest) {
        heaviest = w;
        pick = v;
      }
    }
    GameState after_breaker = s.after(Side::Second, pick);
    for (Mask f = h.vertex_mask() & ~after_breaker.occupied(); f; f &= f - 1) {
      int reply = std::countr_zero(f);
      GameState after_maker = after_breaker.after(Side::First, reply);
      long long now = scaled_total_score(h, after_maker.maker, after_maker.breaker, se);
      CHECK(now <= before);
    }
  }
}

TEST_CASE("incremental scores equal fresh recomputation") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    Hypergraph h = random_linear_uniform(rng, 7, 3, 5);
    if (h.edge_count() == 0) continue;
    IncrementalScore inc(h);
    GameState s;
    std::vector<std::pair<Side, int>> played;
    Side side = Side::First;
    while (true) {
      Mask free = h.vertex_mask() & ~s.occupied();
      if (!free) break;
      std::vector<int> fs;
      for (Mask f = free; f; f &= f - 1) fs.push_back(std::countr_zero(f));
      int v = fs[rng() % fs.size()];
      inc.play(side, v);
      s = s.after(side, v);
      played.emplace_back(side, v);
      CHECK(inc.scaled() == scaled_total_score(h, s.maker, s.breaker, scale_exponent(h)));
      side = other(side);
    }
    while (!played.empty()) {
      auto [ps, pv] = played.back();
      played.pop_back();
      inc.undo(ps, pv);
      if (ps == Side::First)
        s.maker &= ~bit(pv);
      else
        s.breaker &= ~bit(pv);
      CHECK(inc.scaled() == scaled_total_score(h, s.maker, s.breaker, scale_exponent(h)));
    }
  }
}

TEST_CASE("second-player criterion instances") {
  auto sts7 = to_hypergraph(make_sts(7));
  CHECK(es_breaker_criterion(sts7).winner == PredictedWinner::Inconclusive);  // 8 <= 7+3

  auto td43 = to_hypergraph(make_td(4, 3));
  auto v43 = es_breaker_criterion(td43);
  CHECK(v43.winner == PredictedWinner::Breaker);  // 16 > 9+3
  CHECK(v43.inequality.find("16") != std::string::npos);

  auto pi3 = to_hypergraph(td_to_projective(make_td(4, 3)));
  CHECK(es_breaker_criterion(pi3).winner == PredictedWinner::Inconclusive);  // 16 <= 13+4

  // non-linear inputs refuse rather than extrapolate
  auto doubled = to_hypergraph(make_ts(7, 2));
  auto verdict = es_breaker_criterion(doubled);
  CHECK(verdict.winner == PredictedWinner::Inconclusive);
  CHECK(verdict.reason.find("linear") != std::string::npos);
}

TEST_CASE("first-player criterion instances") {
  CHECK(beck_maker_criterion(to_hypergraph(make_sts(9))).winner == PredictedWinner::Maker);
  CHECK(beck_maker_criterion(to_hypergraph(make_sts(7))).winner ==
        PredictedWinner::Inconclusive);  // 7 is not below 7
  // 4 groups of 9: 2 * 36 = 72 < 81
  CHECK(td_mb_bounds(4, 9).winner == PredictedWinner::Maker);
}

TEST_CASE("block-design bounds in exact integers") {
  // block size 4: the second player is favored up to v = 12...
  CHECK(bibd_mb_bounds(4, 4).winner == PredictedWinner::Breaker);
  // ...but 13, 16, and 25 are out of the lemma's reach
  CHECK(bibd_mb_bounds(13, 4).winner == PredictedWinner::Inconclusive);
  CHECK(bibd_mb_bounds(16, 4).winner == PredictedWinner::Inconclusive);
  CHECK(bibd_mb_bounds(25, 4).winner == PredictedWinner::Inconclusive);
  CHECK(bibd_mb_bounds(28, 4).winner == PredictedWinner::Maker);
  CHECK(bibd_mb_bounds(9, 3).winner == PredictedWinner::Maker);  // 9 > 7
  CHECK(bibd_mb_bounds(3, 3).winner == PredictedWinner::Breaker);
  CHECK_THROWS(bibd_mb_bounds(14, 4));  // inadmissible
}

TEST_CASE("transversal-design bounds in exact integers") {
  CHECK(td_mb_bounds(4, 3).winner == PredictedWinner::Breaker);   // 16 > 12
  CHECK(td_mb_bounds(4, 4).winner == PredictedWinner::Inconclusive);
  CHECK(td_mb_bounds(3, 4).winner == PredictedWinner::Maker);     // 4 > 3
  CHECK(td_mb_bounds(2, 1).winner == PredictedWinner::Breaker);   // 4 > 2
  CHECK(td_mb_bounds(3, 2).winner == PredictedWinner::Breaker);   // 8 > 6
  CHECK(td_mb_bounds(3, 3).winner == PredictedWinner::Inconclusive);

  SUBCASE("never both players at once") {
    for (int k = 2; k <= 8; ++k)
      for (int n = 1; n <= 40; ++n) {
        auto v = td_mb_bounds(k, n);
        CHECK((v.winner == PredictedWinner::Maker) + (v.winner == PredictedWinner::Breaker) <= 1);
      }
  }
}
