#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "ttt/hypergraph.hpp"

using namespace ttt;

namespace {

// Fano plane as the difference family {i, i+1, i+3} mod 7.
Hypergraph fano() {
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < 7; ++i) blocks.push_back({i, (i + 1) % 7, (i + 3) % 7});
  return Hypergraph(7, blocks);
}

// TD(4,4) on r1..r4=0..3, c=4..7, a=8..11, b=12..15 (the 16-block instance).
Hypergraph td44() {
  return Hypergraph(16, {{0, 4, 8, 12},  {3, 5, 10, 15}, {1, 6, 11, 13}, {2, 7, 9, 14},
                         {2, 6, 8, 15},  {0, 5, 9, 13},  {3, 4, 11, 14}, {1, 7, 10, 12},
                         {1, 4, 9, 15},  {2, 5, 11, 12}, {0, 6, 10, 14}, {3, 7, 8, 13},
                         {2, 4, 10, 13}, {1, 5, 8, 14},  {3, 6, 9, 12}, {0, 7, 11, 15}});
}

// Cycle-notation helper, e.g. perm(16, {{4,6},{5,7}}).
Permutation perm(int n, const std::vector<std::vector<int>>& cycles) {
  Permutation p = Permutation::identity(n);
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) p.image[c[i]] = c[(i + 1) % c.size()];
  return p;
}

Permutation phi(int i) {
  // The five symmetries of the TD(4,4) instance used to collapse case analyses.
  switch (i) {
    case 1: return perm(16, {{4, 6}, {5, 7}, {8, 10}, {9, 11}, {12, 14}, {13, 15}});
    case 2: return perm(16, {{4, 5}, {6, 7}, {8, 10}, {9, 11}, {12, 13}, {14, 15}});
    case 3: return perm(16, {{4, 8, 12}, {5, 10, 15}, {6, 11, 13}, {7, 9, 14}});
    case 4: return perm(16, {{1, 2}, {6, 7}, {8, 12}, {9, 13}, {10, 15}, {11, 14}});
    case 5: return perm(16, {{2, 3}, {4, 9}, {5, 8}, {6, 10}, {7, 11}, {12, 13}});
    default: throw std::invalid_argument("phi index");
  }
}

std::map<Mask, int> edge_multiset(const Hypergraph& h) {
  std::map<Mask, int> m;
  for (Mask e : h.edge_masks) ++m[e];
  return m;
}

Hypergraph random_hypergraph(std::mt19937_64& rng, int max_v = 9, int max_e = 8) {
  int n = 2 + static_cast<int>(rng() % (max_v - 1));
  int m = 1 + static_cast<int>(rng() % max_e);
  std::vector<std::vector<int>> edges;
  for (int i = 0; i < m; ++i) {
    int k = 1 + static_cast<int>(rng() % std::min(4, n));
    std::set<int> e;
    while (static_cast<int>(e.size()) < k) e.insert(static_cast<int>(rng() % n));
    edges.emplace_back(e.begin(), e.end());
  }
  return Hypergraph(n, edges);
}

}  // namespace

TEST_CASE("completed_edge finds the lowest fully occupied edge") {
  Hypergraph f = fano();
  // oracle: scan the difference family for the block {1,2,4}
  int expect = -1;
  for (int i = 0; i < f.edge_count(); ++i) {
    std::vector<int> e = f.edges[i];
    std::sort(e.begin(), e.end());
    if (e == std::vector<int>{1, 2, 4}) expect = i;
  }
  REQUIRE(expect >= 0);
  CHECK(completed_edge(f, bit(1) | bit(2) | bit(4)) == expect);

  CHECK(!completed_edge(f, 0));

  Hypergraph board = tic_tac_toe_3x3();
  // cells 1,4,7,9 of the printed board are vertices 0,3,6,8
  auto idx = completed_edge(board, bit(0) | bit(3) | bit(6) | bit(8));
  REQUIRE(idx.has_value());
  CHECK(*idx == 3);  // the 147 line
  std::vector<int> line = board.edges[*idx];
  std::sort(line.begin(), line.end());
  CHECK(line == std::vector<int>{0, 3, 6});
}

TEST_CASE("restrict_after_moves removes the mover vertices by deletion semantics") {
  // {a,b,c},{a,d,e},{b,e,f} with a..f = 0..5; Maker a, Breaker f
  Hypergraph h(6, {{0, 1, 2}, {0, 3, 4}, {1, 4, 5}});
  Reduction r = restrict_after_moves(h, 0, 5);
  CHECK(r.hypergraph.vertex_count == 4);
  REQUIRE(r.hypergraph.edge_count() == 2);
  // surviving edges are {b,c} and {d,e}
  CHECK(r.hypergraph.edges[0] == std::vector<int>{r.old_to_new[1], r.old_to_new[2]});
  CHECK(r.hypergraph.edges[1] == std::vector<int>{r.old_to_new[3], r.old_to_new[4]});

  SUBCASE("moves outside every edge only relabel") {
    Hypergraph g(5, {{0, 1}, {1, 2}});
    Reduction rr = restrict_after_moves(g, 3, 4);
    CHECK(rr.hypergraph.vertex_count == 3);
    CHECK(edge_multiset(rr.hypergraph) == edge_multiset(Hypergraph(3, {{0, 1}, {1, 2}})));
  }

  SUBCASE("errors") {
    CHECK_THROWS(restrict_after_moves(h, 2, 2));
    CHECK_THROWS(restrict_after_moves(h, 0, 17));
  }
}

TEST_CASE("reducing the first fixture at its two labeled vertices leaves the fifth") {
  Hypergraph h1 = fixture_h(1);  // u=5, v=6
  Reduction r = restrict_after_moves(h1, 5, 6);
  Reduction stripped = remove_isolated_vertices(r.hypergraph);
  auto w = is_isomorphic(stripped.hypergraph, fixture_h(5));
  CHECK(w.has_value());
}

TEST_CASE("fixture reductions match their closing patterns") {
  // H2: Maker u, Breaker v leaves H5; Maker v, Breaker u leaves H6 + H7.
  {
    Reduction r = restrict_after_moves(fixture_h(2), 6, 7);
    auto s = remove_isolated_vertices(r.hypergraph);
    CHECK(is_isomorphic(s.hypergraph, fixture_h(5)).has_value());
  }
  {
    Reduction r = restrict_after_moves(fixture_h(2), 7, 6);
    auto s = remove_isolated_vertices(r.hypergraph);
    CHECK(is_isomorphic(s.hypergraph, disjoint_union(fixture_h(6), fixture_h(7))).has_value());
  }
  // H3: Maker u, Breaker x7 leaves H4.
  {
    Reduction r = restrict_after_moves(fixture_h(3), 7, 6);
    auto s = remove_isolated_vertices(r.hypergraph);
    CHECK(is_isomorphic(s.hypergraph, fixture_h(4)).has_value());
  }
}

TEST_CASE("disjoint_union shifts the second part") {
  Hypergraph u = disjoint_union(fixture_h(6), fixture_h(7));
  CHECK(u.vertex_count == 5);
  REQUIRE(u.edge_count() == 2);
  CHECK(u.edges[0] == std::vector<int>{0, 1, 2});
  CHECK(u.edges[1] == std::vector<int>{3, 4});

  Hypergraph two = disjoint_union(fixture_h(5), fixture_h(5));
  CHECK(two.vertex_count == 8);
  CHECK(two.edge_count() == 4);

  Hypergraph h = fixture_h(4);
  Hypergraph same = disjoint_union(h, Hypergraph(0, {}));
  CHECK(edge_multiset(same) == edge_multiset(h));
  CHECK(same.vertex_count == h.vertex_count);
}

TEST_CASE("permutations act on hypergraphs and states") {
  Hypergraph t = td44();
  CHECK(edge_multiset(apply_permutation(t, Permutation::identity(16))) == edge_multiset(t));
  CHECK(edge_multiset(apply_permutation(t, phi(3))) == edge_multiset(t));

  // a transposition breaking a block: r1 <-> c1 maps {r1,c2,a2,b2} off the design
  Permutation swap_rc = perm(16, {{0, 4}});
  CHECK(edge_multiset(apply_permutation(t, swap_rc)) != edge_multiset(t));

  GameState s;
  s.maker = bit(0) | bit(4);
  s.breaker = bit(8);
  GameState mapped = apply_permutation(s, phi(3));
  CHECK(mapped.maker == (bit(0) | bit(8)));
  CHECK(mapped.breaker == bit(12));
}

TEST_CASE("is_automorphism accepts the five tabled symmetries") {
  Hypergraph t = td44();
  for (int i = 1; i <= 5; ++i) CHECK(is_automorphism(t, phi(i)));
  CHECK(is_automorphism(t, Permutation::identity(16)));
  CHECK(!is_automorphism(t, perm(16, {{0, 4}})));
}

TEST_CASE("automorphism composition stays in the group") {
  Hypergraph t = td44();
  std::mt19937_64 rng(7);
  std::vector<Permutation> ps = {phi(1), phi(2), phi(3), phi(4), phi(5)};
  for (int trial = 0; trial < 20; ++trial) {
    const Permutation& p = ps[rng() % ps.size()];
    const Permutation& q = ps[rng() % ps.size()];
    CHECK(is_automorphism(t, p.compose(q)));
  }
}

TEST_CASE("automorphism enumeration and closure sizes") {
  auto gens = automorphism_generators(fano());
  auto size = group_closure_size(gens);
  REQUIRE(size.has_value());
  CHECK(*size == 168);

  Hypergraph pair(2, {{0, 1}});
  CHECK(automorphism_generators(pair).size() == 2);

  // the TD(4,4) group contains each tabled symmetry
  auto tgens = automorphism_generators(td44());
  for (int i = 1; i <= 5; ++i) {
    bool found = false;
    for (const auto& g : tgens) found |= g.image == phi(i).image;
    CHECK(found);
  }

  Hypergraph big(25, {});
  CHECK_THROWS(automorphism_generators(big));
}

TEST_CASE("vertex orbits under stabilizing generators") {
  Hypergraph t = td44();
  auto gens = automorphism_generators(t);
  GameState empty;
  auto orbits = vertex_orbits(t, empty, gens);
  REQUIRE(orbits.size() == 1);
  CHECK(orbits[0].size() == 16);

  SUBCASE("no generators give singleton orbits") {
    auto singletons = vertex_orbits(t, empty, {});
    CHECK(singletons.size() == 16);
  }

  SUBCASE("the column/alpha/beta symmetries fix the rows") {
    GameState s;
    s.maker = bit(0);  // r1 played
    std::vector<Permutation> a = {phi(1), phi(2), phi(3)};
    auto parts = vertex_orbits(t, s, a);
    // r2, r3, r4 stay put; the twelve other points fuse into one class
    std::size_t big = 0;
    int singles = 0;
    for (const auto& o : parts) {
      if (o.size() == 1) ++singles;
      big = std::max(big, o.size());
    }
    CHECK(big == 12);
    CHECK(singles == 3);
  }

  SUBCASE("non-stabilizing generators are rejected") {
    GameState s;
    s.maker = bit(4);  // c1 is moved by phi(1)
    CHECK_THROWS(vertex_orbits(t, s, {phi(1)}));
  }
}

TEST_CASE("isomorphism finds witnesses and respects multisets") {
  Hypergraph h5 = fixture_h(5);
  Permutation relabel = perm(4, {{0, 3, 1}});
  Hypergraph h5p = apply_permutation(h5, relabel);
  auto w = is_isomorphic(h5, h5p);
  REQUIRE(w.has_value());
  CHECK(edge_multiset(apply_permutation(h5, *w)) == edge_multiset(h5p));

  CHECK(!is_isomorphic(fixture_h(6), fixture_h(7)).has_value());
  CHECK(!is_isomorphic(fixture_h(4), fixture_h(5)).has_value());
}

TEST_CASE("fixtures have the tabled shapes") {
  CHECK(fixture_h(7).edge_count() == 1);
  CHECK(fixture_h(7).edges[0].size() == 2);

  Hypergraph h4 = fixture_h(4);
  REQUIRE(h4.edge_count() == 3);
  CHECK(h4.edges[0] == std::vector<int>{0, 1, 2});
  CHECK(h4.edges[1] == std::vector<int>{2, 3, 4});
  CHECK(h4.edges[2] == std::vector<int>{4, 5});

  Hypergraph h1 = fixture_h(1);
  CHECK(h1.vertex_count == 7);
  CHECK(h1.edge_count() == 4);
}

TEST_CASE("hypergraph text round trip") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    Hypergraph h = random_hypergraph(rng);
    Hypergraph back = parse_hypergraph_string(format_hypergraph(h));
    CHECK(back.vertex_count == h.vertex_count);
    CHECK(back.edges == h.edges);
  }
  Hypergraph commented = parse_hypergraph_string("# a comment\nv 3\n0 1 # trailing\n\n1 2\n");
  CHECK(commented.vertex_count == 3);
  CHECK(commented.edge_count() == 2);
  CHECK_THROWS(parse_hypergraph_string("0 1\n"));
}

TEST_CASE("reductions never grow and drop at most one vertex per edge") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Hypergraph h = random_hypergraph(rng);
    int u = static_cast<int>(rng() % h.vertex_count);
    int v = static_cast<int>(rng() % h.vertex_count);
    if (u == v) continue;
    Reduction r = restrict_after_moves(h, u, v);
    CHECK(r.hypergraph.vertex_count == h.vertex_count - 2);
    CHECK(r.hypergraph.edge_count() <= h.edge_count());
    // match each surviving edge to a source edge that lost at most u
    std::size_t src = 0;
    for (const auto& e : r.hypergraph.edges) {
      while (src < h.edges.size() && (h.edge_masks[src] & bit(v))) ++src;
      REQUIRE(src < h.edges.size());
      std::set<int> original(h.edges[src].begin(), h.edges[src].end());
      original.erase(u);
      std::set<int> mapped;
      for (int x : e) mapped.insert(r.new_to_old[x]);
      CHECK(mapped == original);
      ++src;
    }
  }
}

TEST_CASE("turn schedules") {
  TurnSchedule std_sched = TurnSchedule::standard();
  CHECK(std_sched.side_at(0) == Side::First);
  CHECK(std_sched.side_at(5) == Side::Second);

  TurnSchedule handicap = handicap_schedule();
  CHECK(handicap.side_at(0) == Side::First);
  CHECK(handicap.side_at(1) == Side::Second);
  CHECK(handicap.side_at(2) == Side::Second);
  CHECK(handicap.side_at(3) == Side::First);
  CHECK(handicap.side_at(4) == Side::Second);
  CHECK(handicap.first_count(5) == 2);

  CHECK(TurnSchedule::parse("XO").side_at(2) == Side::First);
  CHECK_THROWS(TurnSchedule::parse("XQ"));

  Hypergraph h(4, {{0, 1, 2}});
  GameState s;
  s.maker = bit(0);
  s.breaker = bit(1) | bit(2);
  s.to_move = Side::First;
  CHECK_THROWS(check_state(h, s));              // two breaker stones under alternation
  CHECK_NOTHROW(check_state(h, s, handicap));   // fine under the extra-move schedule
}
