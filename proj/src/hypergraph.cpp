#include "ttt/hypergraph.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace ttt {

namespace {

std::vector<int> mask_vertices(Mask m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

}  // namespace

Hypergraph::Hypergraph(int n, std::vector<std::vector<int>> edge_list)
    : vertex_count(n), edges(std::move(edge_list)) {
  if (n < 0 || n > 64) throw std::invalid_argument("vertex_count must be in [0,64]");
  edge_masks.reserve(edges.size());
  for (const auto& e : edges) {
    Mask m = 0;
    for (int v : e) {
      if (v < 0 || v >= n) throw std::invalid_argument("edge vertex out of range");
      if (m & bit(v)) throw std::invalid_argument("repeated vertex within an edge");
      m |= bit(v);
    }
    edge_masks.push_back(m);
  }
}

Mask Hypergraph::vertex_mask() const {
  return vertex_count == 64 ? ~Mask{0} : (bit(vertex_count) - 1);
}

int Hypergraph::max_edge_size() const {
  int k = 0;
  for (const auto& e : edges) k = std::max(k, static_cast<int>(e.size()));
  return k;
}

int GameState::move_count() const {
  return std::popcount(maker) + std::popcount(breaker);
}

GameState GameState::after(Side s, int v) const {
  GameState next = *this;
  if (s == Side::First)
    next.maker |= bit(v);
  else
    next.breaker |= bit(v);
  next.to_move = other(to_move);
  return next;
}

Permutation Permutation::identity(int n) {
  Permutation p;
  p.image.resize(n);
  for (int i = 0; i < n; ++i) p.image[i] = i;
  return p;
}

bool Permutation::is_bijection() const {
  std::vector<bool> seen(image.size(), false);
  for (int v : image) {
    if (v < 0 || v >= size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation Permutation::compose(const Permutation& inner) const {
  if (size() != inner.size()) throw std::invalid_argument("permutation size mismatch");
  Permutation out;
  out.image.resize(size());
  for (int i = 0; i < size(); ++i) out.image[i] = image[inner.image[i]];
  return out;
}

Permutation Permutation::inverse() const {
  Permutation out;
  out.image.resize(size());
  for (int i = 0; i < size(); ++i) out.image[image[i]] = i;
  return out;
}

Mask Permutation::apply(Mask m) const {
  Mask out = 0;
  while (m) {
    int v = std::countr_zero(m);
    m &= m - 1;
    out |= bit(image[v]);
  }
  return out;
}

TurnSchedule TurnSchedule::parse(const std::string& s) {
  TurnSchedule sched;
  for (char c : s) {
    if (c == 'X' || c == 'x' || c == 'M' || c == 'm')
      sched.prefix.push_back(Side::First);
    else if (c == 'O' || c == 'o' || c == 'B' || c == 'b')
      sched.prefix.push_back(Side::Second);
    else
      throw std::invalid_argument("schedule characters must be X or O");
  }
  sched.tail_start = sched.prefix.empty() ? Side::First : other(sched.prefix.back());
  return sched;
}

std::string TurnSchedule::str() const {
  std::string out;
  for (Side s : prefix) out += (s == Side::First ? 'X' : 'O');
  out += (tail_start == Side::First ? "|X" : "|O");
  return out;
}

Side TurnSchedule::side_at(int move_index) const {
  if (move_index < static_cast<int>(prefix.size())) return prefix[move_index];
  int off = move_index - static_cast<int>(prefix.size());
  return off % 2 == 0 ? tail_start : other(tail_start);
}

int TurnSchedule::first_count(int moves) const {
  int c = 0;
  for (int i = 0; i < moves; ++i)
    if (side_at(i) == Side::First) ++c;
  return c;
}

TurnSchedule handicap_schedule() { return TurnSchedule::parse("XOO"); }

void check_state(const Hypergraph& h, const GameState& state, const TurnSchedule& schedule) {
  if ((state.maker | state.breaker) & ~h.vertex_mask())
    throw std::invalid_argument("state uses vertices outside the hypergraph");
  if (state.maker & state.breaker)
    throw std::invalid_argument("maker and breaker sets overlap");
  int t = state.move_count();
  if (static_cast<int>(schedule.prefix.size()) > h.vertex_count)
    throw std::invalid_argument("schedule prefix longer than vertex count");
  if (schedule.first_count(t) != std::popcount(state.maker))
    throw std::invalid_argument("move counts do not match the turn schedule");
  if (t < h.vertex_count && schedule.side_at(t) != state.to_move)
    throw std::invalid_argument("to_move does not match the turn schedule");
}

std::optional<int> completed_edge(const Hypergraph& h, Mask occupied) {
  for (int i = 0; i < h.edge_count(); ++i)
    if ((h.edge_masks[i] & ~occupied) == 0) return i;
  return std::nullopt;
}

namespace {

Reduction drop_vertices(const Hypergraph& h, Mask deleted, Mask edge_killers,
                        Mask strip_from_edges) {
  // Deletes vertices in `deleted`; drops every edge meeting `edge_killers`;
  // removes `strip_from_edges` vertices from the surviving edges.
  Reduction r;
  r.old_to_new.assign(h.vertex_count, -1);
  int next = 0;
  for (int v = 0; v < h.vertex_count; ++v) {
    if (deleted & bit(v)) continue;
    r.old_to_new[v] = next++;
    r.new_to_old.push_back(v);
  }
  std::vector<std::vector<int>> new_edges;
  for (int i = 0; i < h.edge_count(); ++i) {
    if (h.edge_masks[i] & edge_killers) continue;
    std::vector<int> e;
    for (int v : h.edges[i])
      if (!(strip_from_edges & bit(v))) e.push_back(r.old_to_new[v]);
    new_edges.push_back(std::move(e));
  }
  r.hypergraph = Hypergraph(next, std::move(new_edges));
  return r;
}

}  // namespace

Reduction restrict_after_moves(const Hypergraph& h, int maker_move, int breaker_move) {
  if (maker_move == breaker_move) throw std::invalid_argument("moves must be distinct");
  if (maker_move < 0 || maker_move >= h.vertex_count || breaker_move < 0 ||
      breaker_move >= h.vertex_count)
    throw std::invalid_argument("move out of range");
  return drop_vertices(h, bit(maker_move) | bit(breaker_move), bit(breaker_move),
                       bit(maker_move));
}

Reduction residual(const Hypergraph& h, Mask maker, Mask breaker) {
  if (maker & breaker) throw std::invalid_argument("maker and breaker sets overlap");
  if ((maker | breaker) & ~h.vertex_mask())
    throw std::invalid_argument("state uses vertices outside the hypergraph");
  return drop_vertices(h, maker | breaker, breaker, maker);
}

Reduction remove_isolated_vertices(const Hypergraph& h) {
  Mask used = 0;
  for (Mask m : h.edge_masks) used |= m;
  return drop_vertices(h, h.vertex_mask() & ~used, 0, 0);
}

Hypergraph disjoint_union(const Hypergraph& h1, const Hypergraph& h2) {
  if (h1.vertex_count + h2.vertex_count > 64)
    throw std::invalid_argument("union exceeds 64 vertices");
  std::vector<std::vector<int>> edges = h1.edges;
  for (const auto& e : h2.edges) {
    std::vector<int> shifted;
    for (int v : e) shifted.push_back(v + h1.vertex_count);
    edges.push_back(std::move(shifted));
  }
  return Hypergraph(h1.vertex_count + h2.vertex_count, std::move(edges));
}

Hypergraph apply_permutation(const Hypergraph& h, const Permutation& p) {
  if (p.size() != h.vertex_count) throw std::invalid_argument("permutation length mismatch");
  if (!p.is_bijection()) throw std::invalid_argument("not a bijection");
  std::vector<std::vector<int>> edges;
  edges.reserve(h.edges.size());
  for (const auto& e : h.edges) {
    std::vector<int> mapped;
    mapped.reserve(e.size());
    for (int v : e) mapped.push_back(p(v));
    edges.push_back(std::move(mapped));
  }
  return Hypergraph(h.vertex_count, std::move(edges));
}

GameState apply_permutation(const GameState& s, const Permutation& p) {
  GameState out = s;
  out.maker = p.apply(s.maker);
  out.breaker = p.apply(s.breaker);
  return out;
}

namespace {

std::map<Mask, int> edge_multiset(const Hypergraph& h) {
  std::map<Mask, int> counts;
  for (Mask m : h.edge_masks) ++counts[m];
  return counts;
}

}  // namespace

bool is_automorphism(const Hypergraph& h, const Permutation& p) {
  if (p.size() != h.vertex_count || !p.is_bijection()) return false;
  std::map<Mask, int> counts = edge_multiset(h);
  for (Mask m : h.edge_masks) {
    auto it = counts.find(p.apply(m));
    if (it == counts.end() || it->second == 0) return false;
    --it->second;
  }
  return true;
}

namespace {

// Backtracking search for edge-multiset-preserving vertex bijections from
// `from` onto `to`. Prunes on per-vertex signatures (degree + incident edge
// sizes) and per-pair co-degrees; fully-mapped edges are checked against the
// target multiset as soon as they close.
struct IsoSearch {
  const Hypergraph& from;
  const Hypergraph& to;
  std::size_t cap;
  bool collect_all;

  int n;
  std::vector<std::vector<int>> sig_from, sig_to;  // vertex signatures
  std::vector<std::vector<int>> codeg_from, codeg_to;
  std::map<Mask, int> to_counts;
  std::vector<int> image;
  std::vector<bool> used;
  std::vector<std::vector<int>> incident;  // from-edge indices per from-vertex
  std::vector<int> unmapped_in_edge;
  std::vector<Permutation> found;

  IsoSearch(const Hypergraph& f, const Hypergraph& t, std::size_t cap_, bool all)
      : from(f), to(t), cap(cap_), collect_all(all), n(f.vertex_count) {
    sig_from = signatures(from);
    sig_to = signatures(to);
    codeg_from = codegrees(from);
    codeg_to = codegrees(to);
    to_counts = edge_multiset(to);
    image.assign(n, -1);
    used.assign(n, false);
    incident.resize(n);
    for (int i = 0; i < from.edge_count(); ++i)
      for (int v : from.edges[i]) incident[v].push_back(i);
    unmapped_in_edge.resize(from.edge_count());
    for (int i = 0; i < from.edge_count(); ++i)
      unmapped_in_edge[i] = static_cast<int>(from.edges[i].size());
  }

  static std::vector<std::vector<int>> signatures(const Hypergraph& h) {
    std::vector<std::vector<int>> sig(h.vertex_count);
    for (const auto& e : h.edges)
      for (int v : e) sig[v].push_back(static_cast<int>(e.size()));
    for (auto& s : sig) std::sort(s.begin(), s.end());
    return sig;
  }

  static std::vector<std::vector<int>> codegrees(const Hypergraph& h) {
    std::vector<std::vector<int>> cd(h.vertex_count, std::vector<int>(h.vertex_count, 0));
    for (Mask m : h.edge_masks)
      for (int u : mask_vertices(m))
        for (int v : mask_vertices(m))
          if (u != v) ++cd[u][v];
    return cd;
  }

  Mask edge_image(int ei) const {
    Mask target = 0;
    for (int u : from.edges[ei]) target |= bit(image[u]);
    return target;
  }

  // Rolls back the first `done` incident edges of v (image[v] must still hold).
  void rollback(int v, std::size_t done) {
    for (std::size_t j = 0; j < done; ++j) {
      int ei = incident[v][j];
      if (unmapped_in_edge[ei] == 0) ++to_counts[edge_image(ei)];
      ++unmapped_in_edge[ei];
    }
  }

  bool assign(int v, int w) {
    if (sig_from[v] != sig_to[w]) return false;
    for (int u = 0; u < n; ++u)
      if (image[u] >= 0 && codeg_from[v][u] != codeg_to[w][image[u]]) return false;
    image[v] = w;
    used[w] = true;
    for (std::size_t j = 0; j < incident[v].size(); ++j) {
      int ei = incident[v][j];
      --unmapped_in_edge[ei];
      if (unmapped_in_edge[ei] == 0) {
        auto it = to_counts.find(edge_image(ei));
        if (it == to_counts.end() || it->second == 0) {
          ++unmapped_in_edge[ei];
          rollback(v, j);
          used[w] = false;
          image[v] = -1;
          return false;
        }
        --it->second;
      }
    }
    return true;
  }

  void unassign(int v, int w) {
    rollback(v, incident[v].size());
    used[w] = false;
    image[v] = -1;
  }

  bool search(int v) {
    if (found.size() >= cap) return true;
    if (v == n) {
      Permutation p;
      p.image = image;
      found.push_back(p);
      return !collect_all;
    }
    for (int w = 0; w < n; ++w) {
      if (used[w]) continue;
      if (!assign(v, w)) continue;
      if (search(v + 1)) return true;
      unassign(v, w);
    }
    return false;
  }
};

}  // namespace

std::vector<Permutation> automorphism_generators(const Hypergraph& h, int bound,
                                                 std::size_t cap) {
  if (h.vertex_count > bound)
    throw std::invalid_argument("vertex count exceeds the automorphism search bound");
  IsoSearch s(h, h, cap, /*collect_all=*/true);
  s.search(0);
  return s.found;
}

std::optional<std::size_t> group_closure_size(const std::vector<Permutation>& gens,
                                              std::size_t limit) {
  if (gens.empty()) return std::size_t{1};
  int n = gens.front().size();
  std::set<std::vector<int>> elems;
  std::vector<Permutation> frontier;
  elems.insert(Permutation::identity(n).image);
  frontier.push_back(Permutation::identity(n));
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier) {
      for (const auto& g : gens) {
        Permutation q = g.compose(p);
        if (elems.insert(q.image).second) {
          if (elems.size() > limit) return std::nullopt;
          next.push_back(std::move(q));
        }
      }
    }
    frontier = std::move(next);
  }
  return elems.size();
}

std::vector<std::vector<int>> vertex_orbits(const Hypergraph& h, const GameState& state,
                                            const std::vector<Permutation>& gens) {
  for (const auto& g : gens) {
    if (g.size() != h.vertex_count) throw std::invalid_argument("generator length mismatch");
    if (g.apply(state.maker) != state.maker || g.apply(state.breaker) != state.breaker)
      throw std::invalid_argument("generator does not stabilize the state");
  }
  std::vector<int> parent(h.vertex_count);
  for (int v = 0; v < h.vertex_count; ++v) parent[v] = v;
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& g : gens)
    for (int v = 0; v < h.vertex_count; ++v) {
      int a = find(v), b = find(g(v));
      if (a != b) parent[a] = b;
    }
  Mask unplayed = h.vertex_mask() & ~state.occupied();
  std::map<int, std::vector<int>> buckets;
  for (int v = 0; v < h.vertex_count; ++v)
    if (unplayed & bit(v)) buckets[find(v)].push_back(v);
  std::vector<std::vector<int>> orbits;
  for (auto& [root, members] : buckets) orbits.push_back(std::move(members));
  return orbits;
}

std::optional<Permutation> is_isomorphic(const Hypergraph& h1, const Hypergraph& h2) {
  if (h1.vertex_count > 12 || h2.vertex_count > 12)
    throw std::invalid_argument("isomorphism search limited to 12 vertices");
  if (h1.vertex_count != h2.vertex_count || h1.edge_count() != h2.edge_count())
    return std::nullopt;
  IsoSearch s(h1, h2, 1, /*collect_all=*/false);
  if (!s.search(0)) return std::nullopt;
  const Permutation& witness = s.found.front();
  // The witness must carry the edge multiset over exactly.
  if (edge_multiset(apply_permutation(h1, witness)) != edge_multiset(h2))
    throw std::logic_error("isomorphism witness failed verification");
  return witness;
}

Hypergraph fixture_h(int i) {
  switch (i) {
    case 1: return Hypergraph(7, {{0, 2, 3}, {2, 4, 5}, {0, 1, 6}, {5, 6}});
    case 2: return Hypergraph(8, {{0, 1, 2}, {2, 3, 6}, {4, 5, 7}, {6, 7}});
    case 3: return Hypergraph(8, {{0, 1, 2}, {2, 3, 4}, {4, 5, 7}, {7, 6}});
    case 4: return Hypergraph(6, {{0, 1, 2}, {2, 3, 4}, {4, 5}});
    case 5: return Hypergraph(4, {{0, 1, 2}, {2, 3}});
    case 6: return Hypergraph(3, {{0, 1, 2}});
    case 7: return Hypergraph(2, {{0, 1}});
    default: throw std::invalid_argument("fixture index must be 1..7");
  }
}

Hypergraph tic_tac_toe_3x3() {
  return Hypergraph(9, {{0, 1, 2},
                        {3, 4, 5},
                        {6, 7, 8},
                        {0, 3, 6},
                        {1, 4, 7},
                        {2, 5, 8},
                        {0, 4, 8},
                        {6, 4, 2}});
}

Hypergraph parse_hypergraph(std::istream& in) {
  std::string line;
  bool have_header = false;
  int n = 0;
  std::vector<std::vector<int>> edges;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (!have_header) {
      if (tok != "v") throw std::invalid_argument("expected header line 'v <count>'");
      if (!(ls >> n)) throw std::invalid_argument("bad vertex count");
      have_header = true;
      continue;
    }
    std::vector<int> e;
    if (tok == "-") {
      edges.push_back(e);
      continue;
    }
    e.push_back(std::stoi(tok));
    int v;
    while (ls >> v) e.push_back(v);
    edges.push_back(std::move(e));
  }
  if (!have_header) throw std::invalid_argument("missing 'v <count>' header");
  return Hypergraph(n, std::move(edges));
}

Hypergraph parse_hypergraph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_hypergraph(in);
}

std::string format_hypergraph(const Hypergraph& h) {
  std::ostringstream out;
  out << "v " << h.vertex_count << "\n";
  for (const auto& e : h.edges) {
    if (e.empty()) {
      out << "-\n";
      continue;
    }
    for (std::size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
    out << "\n";
  }
  return out.str();
}

std::string mask_to_string(Mask m) {
  std::string out = "{";
  bool first = true;
  while (m) {
    int v = std::countr_zero(m);
    m &= m - 1;
    if (!first) out += ",";
    out += std::to_string(v);
    first = false;
  }
  return out + "}";
}

}  // namespace ttt
