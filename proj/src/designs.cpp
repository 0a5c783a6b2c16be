#include "ttt/designs.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ttt {

bool admissible(long long v, int k, long long lambda) {
  if (v < k || k < 2 || lambda < 1) throw std::invalid_argument("need v >= k >= 2, lambda >= 1");
  if ((lambda * (v - 1)) % (k - 1) != 0) return false;
  if ((lambda * v * (v - 1)) % (static_cast<long long>(k) * (k - 1)) != 0) return false;
  return true;
}

bool DesignParams::admissible() const { return ttt::admissible(v, k, lambda); }

long long DesignParams::block_count() const {
  return lambda * v * (v - 1) / (static_cast<long long>(k) * (k - 1));
}

long long DesignParams::replication() const { return lambda * (v - 1) / (k - 1); }

std::string ValidationReport::str() const {
  std::string out;
  for (const auto& s : issues) out += s + "\n";
  return out;
}

int TransversalDesign::group_of(int point) const {
  for (int g = 0; g < static_cast<int>(groups.size()); ++g)
    for (int p : groups[g])
      if (p == point) return g;
  return -1;
}

ValidationReport validate_bibd(const std::vector<std::vector<int>>& blocks, long long v, int k,
                               long long lambda) {
  ValidationReport rep;
  DesignParams params{v, k, lambda};
  if (!admissible(v, k, lambda))
    rep.issues.push_back("(v,k,lambda) fails the divisibility conditions");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const auto& b = blocks[i];
    if (static_cast<int>(b.size()) != k)
      rep.issues.push_back("block " + std::to_string(i) + " has size " +
                           std::to_string(b.size()) + ", expected " + std::to_string(k));
    std::set<int> uniq(b.begin(), b.end());
    if (uniq.size() != b.size())
      rep.issues.push_back("block " + std::to_string(i) + " repeats a point");
    for (int p : b)
      if (p < 0 || p >= v)
        rep.issues.push_back("block " + std::to_string(i) + " has out-of-range point " +
                             std::to_string(p));
  }
  if (!rep.issues.empty()) return rep;

  std::map<std::pair<int, int>, long long> cover;
  std::vector<long long> rep_count(v, 0);
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      ++rep_count[b[i]];
      for (std::size_t j = i + 1; j < b.size(); ++j) ++cover[std::minmax(b[i], b[j])];
    }
  }
  for (int x = 0; x < v; ++x)
    for (int y = x + 1; y < v; ++y) {
      long long c = cover.count({x, y}) ? cover[{x, y}] : 0;
      if (c != lambda)
        rep.issues.push_back("pair {" + std::to_string(x) + "," + std::to_string(y) +
                             "} covered " + std::to_string(c) + " times, expected " +
                             std::to_string(lambda));
    }
  if (static_cast<long long>(blocks.size()) != params.block_count())
    rep.issues.push_back("block count " + std::to_string(blocks.size()) + ", expected " +
                         std::to_string(params.block_count()));
  for (int x = 0; x < v; ++x)
    if (rep_count[x] != params.replication())
      rep.issues.push_back("point " + std::to_string(x) + " lies in " +
                           std::to_string(rep_count[x]) + " blocks, expected " +
                           std::to_string(params.replication()));
  return rep;
}

ValidationReport validate_td(const TransversalDesign& td) {
  ValidationReport rep;
  int kn = td.k * td.n;
  if (static_cast<int>(td.groups.size()) != td.k)
    rep.issues.push_back("expected " + std::to_string(td.k) + " groups");
  std::vector<int> group_of(kn, -1);
  for (std::size_t g = 0; g < td.groups.size(); ++g) {
    if (static_cast<int>(td.groups[g].size()) != td.n)
      rep.issues.push_back("group " + std::to_string(g) + " has wrong size");
    for (int p : td.groups[g]) {
      if (p < 0 || p >= kn) {
        rep.issues.push_back("group point out of range");
        continue;
      }
      if (group_of[p] != -1) rep.issues.push_back("point in two groups");
      group_of[p] = static_cast<int>(g);
    }
  }
  for (int p = 0; p < kn; ++p)
    if (group_of[p] == -1) rep.issues.push_back("point " + std::to_string(p) + " in no group");
  if (!rep.issues.empty()) return rep;

  for (std::size_t i = 0; i < td.blocks.size(); ++i) {
    const auto& b = td.blocks[i];
    if (static_cast<int>(b.size()) != td.k) {
      rep.issues.push_back("block " + std::to_string(i) + " has wrong size");
      continue;
    }
    std::set<int> gs;
    for (int p : b) gs.insert(group_of[p]);
    if (static_cast<int>(gs.size()) != td.k)
      rep.issues.push_back("block " + std::to_string(i) + " misses a group");
  }
  std::map<std::pair<int, int>, int> cover;
  std::vector<int> rep_count(kn, 0);
  for (const auto& b : td.blocks)
    for (std::size_t i = 0; i < b.size(); ++i) {
      ++rep_count[b[i]];
      for (std::size_t j = i + 1; j < b.size(); ++j) ++cover[std::minmax(b[i], b[j])];
    }
  for (int x = 0; x < kn; ++x)
    for (int y = x + 1; y < kn; ++y) {
      int c = cover.count({x, y}) ? cover[{x, y}] : 0;
      int want = group_of[x] == group_of[y] ? 0 : 1;
      if (c != want)
        rep.issues.push_back("pair {" + std::to_string(x) + "," + std::to_string(y) +
                             "} covered " + std::to_string(c) + " times, expected " +
                             std::to_string(want));
    }
  if (static_cast<int>(td.blocks.size()) != td.n * td.n)
    rep.issues.push_back("block count " + std::to_string(td.blocks.size()) + ", expected " +
                         std::to_string(td.n * td.n));
  for (int p = 0; p < kn; ++p)
    if (rep_count[p] != td.n)
      rep.issues.push_back("point " + std::to_string(p) + " lies in " +
                           std::to_string(rep_count[p]) + " blocks, expected " +
                           std::to_string(td.n));
  return rep;
}

namespace {

void require_valid(const Design& d, const char* what) {
  auto rep = validate_bibd(d.blocks, d.params.v, d.params.k, d.params.lambda);
  if (!rep.valid())
    throw std::logic_error(std::string(what) + " failed validation:\n" + rep.str());
}

void require_valid(const TransversalDesign& td, const char* what) {
  auto rep = validate_td(td);
  if (!rep.valid())
    throw std::logic_error(std::string(what) + " failed validation:\n" + rep.str());
}

}  // namespace

Design make_sts(int v) {
  if (v < 3 || (v % 6 != 1 && v % 6 != 3))
    throw std::invalid_argument("an STS(v) needs v = 1 or 3 mod 6, v >= 3");
  std::vector<std::vector<int>> blocks;
  if (v % 6 == 3) {
    // Idempotent commutative quasigroup on Z_n, n odd: i*j = (i+j)(n+1)/2.
    int n = v / 3;
    auto idx = [n](int i, int j) { return i * 3 + j; };
    auto mul = [n](int i, int j) { return ((i + j) * ((n + 1) / 2)) % n; };
    for (int i = 0; i < n; ++i) blocks.push_back({idx(i, 0), idx(i, 1), idx(i, 2)});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int l = 0; l < 3; ++l)
          blocks.push_back({idx(i, l), idx(j, l), idx(mul(i, j), (l + 1) % 3)});
  } else {
    // Half-idempotent commutative quasigroup on Z_2t via symbol renaming.
    int t = v / 6;
    int n = 2 * t;
    auto idx = [](int i, int j) { return i * 3 + j; };
    int inf = 6 * t;
    auto rename = [t](int s) { return s % 2 == 0 ? s / 2 : t + (s - 1) / 2; };
    auto mul = [&](int i, int j) { return rename((i + j) % (2 * t)); };
    for (int i = 0; i < t; ++i) blocks.push_back({idx(i, 0), idx(i, 1), idx(i, 2)});
    for (int i = 0; i < t; ++i)
      for (int l = 0; l < 3; ++l) blocks.push_back({inf, idx(t + i, l), idx(i, (l + 1) % 3)});
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int l = 0; l < 3; ++l)
          blocks.push_back({idx(i, l), idx(j, l), idx(mul(i, j), (l + 1) % 3)});
  }
  Design d{DesignParams{v, 3, 1}, std::move(blocks)};
  require_valid(d, "make_sts");
  return d;
}

namespace {

std::vector<std::vector<int>> all_triples(int v) {
  std::vector<std::vector<int>> out;
  for (int a = 0; a < v; ++a)
    for (int b = a + 1; b < v; ++b)
      for (int c = b + 1; c < v; ++c) out.push_back({a, b, c});
  return out;
}

// The 10-block triple system on 6 points with lambda = 2. Its blocks through
// point 0 put the remaining points on the 5-cycle (1 2 4 5 3).
const std::vector<std::vector<int>>& ts62_blocks() {
  static const std::vector<std::vector<int>> blocks = {
      {0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 5}, {0, 4, 5},
      {1, 3, 4}, {1, 2, 5}, {1, 4, 5}, {2, 3, 4}, {2, 3, 5}};
  return blocks;
}

}  // namespace

Design make_ts(int v, int lambda) {
  if (!admissible(v, 3, lambda)) throw std::invalid_argument("(v,3,lambda) is not admissible");
  std::vector<std::vector<int>> blocks;
  if (v % 6 == 1 || v % 6 == 3) {
    Design sts = make_sts(v);
    for (int rep = 0; rep < lambda; ++rep)
      blocks.insert(blocks.end(), sts.blocks.begin(), sts.blocks.end());
  } else if (v == 4) {
    for (int rep = 0; rep < lambda / 2; ++rep) {
      auto t = all_triples(4);
      blocks.insert(blocks.end(), t.begin(), t.end());
    }
  } else if (v == 5) {
    for (int rep = 0; rep < lambda / 3; ++rep) {
      auto t = all_triples(5);
      blocks.insert(blocks.end(), t.begin(), t.end());
    }
  } else if (v == 6) {
    for (int rep = 0; rep < lambda / 2; ++rep)
      blocks.insert(blocks.end(), ts62_blocks().begin(), ts62_blocks().end());
  } else {
    throw std::invalid_argument("unsupported (v,lambda) combination");
  }
  Design d{DesignParams{v, 3, lambda}, std::move(blocks)};
  require_valid(d, "make_ts");
  return d;
}

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// GF(4) on {0,1,2,3}: addition is xor, multiplication from x^2 = x + 1.
int gf4_mul(int a, int b) {
  static const int table[4][4] = {
      {0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  return table[a][b];
}

const std::vector<std::vector<int>>& td44_blocks() {
  // r1..r4 = 0..3, c1..c4 = 4..7, a1..a4 = 8..11, b1..b4 = 12..15.
  static const std::vector<std::vector<int>> blocks = {
      {0, 4, 8, 12},  {3, 5, 10, 15}, {1, 6, 11, 13}, {2, 7, 9, 14},
      {2, 6, 8, 15},  {0, 5, 9, 13},  {3, 4, 11, 14}, {1, 7, 10, 12},
      {1, 4, 9, 15},  {2, 5, 11, 12}, {0, 6, 10, 14}, {3, 7, 8, 13},
      {2, 4, 10, 13}, {1, 5, 8, 14},  {3, 6, 9, 12},  {0, 7, 11, 15}};
  return blocks;
}

}  // namespace

std::vector<std::string> td44_point_names() {
  std::vector<std::string> names;
  for (const char* p : {"r", "c", "a", "b"})
    for (int i = 1; i <= 4; ++i) names.push_back(std::string(p) + std::to_string(i));
  return names;
}

TransversalDesign make_td(int k, int n) {
  if (k < 2 || n < 1) throw std::invalid_argument("need k >= 2 and n >= 1");
  TransversalDesign td;
  td.k = k;
  td.n = n;
  auto idx = [n](int group, int a) { return group * n + a; };
  for (int g = 0; g < k; ++g) {
    std::vector<int> grp;
    for (int a = 0; a < n; ++a) grp.push_back(idx(g, a));
    td.groups.push_back(std::move(grp));
  }

  if (k == 4 && n == 4) {
    td.blocks = td44_blocks();
  } else if (n == 1) {
    std::vector<int> b;
    for (int g = 0; g < k; ++g) b.push_back(idx(g, 0));
    td.blocks.push_back(std::move(b));
  } else if (is_prime(n) && k <= n + 1) {
    // Lines of slope m and intercept a over Z_n; when k = n+1 the last group
    // indexes the slopes.
    int plain = std::min(k, n);
    for (int m = 0; m < n; ++m)
      for (int a = 0; a < n; ++a) {
        std::vector<int> b;
        for (int g = 0; g < plain; ++g) b.push_back(idx(g, (a + g * m) % n));
        if (k == n + 1) b.push_back(idx(n, m));
        td.blocks.push_back(std::move(b));
      }
  } else if (n == 4 && k <= 5) {
    int plain = std::min(k, 4);
    for (int m = 0; m < 4; ++m)
      for (int a = 0; a < 4; ++a) {
        std::vector<int> b;
        for (int g = 0; g < plain; ++g) b.push_back(idx(g, a ^ gf4_mul(g, m)));
        if (k == 5) b.push_back(idx(4, m));
        td.blocks.push_back(std::move(b));
      }
  } else {
    throw std::invalid_argument("no TD(" + std::to_string(k) + "," + std::to_string(n) +
                                ") construction available (need n prime with k <= n+1, n=4 "
                                "with k <= 5, or n=1)");
  }
  require_valid(td, "make_td");
  return td;
}

namespace {

Mask points_mask(const std::vector<int>& pts) {
  Mask m = 0;
  for (int p : pts) m |= bit(p);
  return m;
}

}  // namespace

std::optional<Resolution> find_resolution(const TransversalDesign& td) {
  int kn = td.point_count();
  if (kn > 64) return std::nullopt;
  int per_class = kn / td.k;  // blocks needed to partition the points
  if (static_cast<int>(td.blocks.size()) % per_class != 0) return std::nullopt;
  int num_classes = static_cast<int>(td.blocks.size()) / per_class;
  std::vector<Mask> block_masks;
  for (const auto& b : td.blocks) block_masks.push_back(points_mask(b));
  Mask full = kn == 64 ? ~Mask{0} : (bit(kn) - 1);

  std::vector<Mask> class_cover(num_classes, 0);
  std::vector<int> assignment(td.blocks.size(), -1);
  int opened = 0;

  std::function<bool(std::size_t)> go = [&](std::size_t bi) -> bool {
    if (bi == td.blocks.size()) {
      for (Mask c : class_cover)
        if (c != full) return false;
      return true;
    }
    int limit = std::min(opened + 1, num_classes);  // first block of a class: lowest open slot
    for (int c = 0; c < limit; ++c) {
      if (class_cover[c] & block_masks[bi]) continue;
      bool fresh = class_cover[c] == 0;
      class_cover[c] |= block_masks[bi];
      assignment[bi] = c;
      if (fresh) ++opened;
      if (go(bi + 1)) return true;
      if (fresh) --opened;
      class_cover[c] &= ~block_masks[bi];
      assignment[bi] = -1;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  Resolution res(num_classes);
  for (std::size_t bi = 0; bi < td.blocks.size(); ++bi) res[assignment[bi]].push_back(bi);
  return res;
}

namespace {

void check_resolution(const TransversalDesign& td, const Resolution& res, const char* what) {
  Mask full = td.point_count() == 64 ? ~Mask{0} : (bit(td.point_count()) - 1);
  std::vector<bool> seen(td.blocks.size(), false);
  for (const auto& cls : res) {
    Mask cover = 0;
    for (int bi : cls) {
      if (bi < 0 || bi >= static_cast<int>(td.blocks.size()) || seen[bi])
        throw std::invalid_argument(std::string(what) + ": bad block index in resolution");
      seen[bi] = true;
      Mask bm = points_mask(td.blocks[bi]);
      if (cover & bm)
        throw std::invalid_argument(std::string(what) + ": class blocks overlap");
      cover |= bm;
    }
    if (cover != full)
      throw std::invalid_argument(std::string(what) + ": class does not partition the points");
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument(std::string(what) + ": resolution misses a block");
}

}  // namespace

Design td_to_projective(const TransversalDesign& td) {
  if (td.k != td.n + 1) throw std::invalid_argument("projective completion needs k = n+1");
  int u = td.point_count();
  std::vector<std::vector<int>> lines = td.blocks;
  for (const auto& g : td.groups) {
    std::vector<int> line = g;
    line.push_back(u);
    lines.push_back(std::move(line));
  }
  Design d{DesignParams{static_cast<long long>(td.n) * td.n + td.n + 1, td.n + 1, 1},
           std::move(lines)};
  require_valid(d, "td_to_projective");
  return d;
}

Design rtd_to_affine(const TransversalDesign& td, const Resolution& resolution) {
  if (td.k != td.n) throw std::invalid_argument("affine conversion needs k = n");
  check_resolution(td, resolution, "rtd_to_affine");
  std::vector<std::vector<int>> lines = td.blocks;
  lines.insert(lines.end(), td.groups.begin(), td.groups.end());
  Design d{DesignParams{static_cast<long long>(td.n) * td.n, td.n, 1}, std::move(lines)};
  require_valid(d, "rtd_to_affine");
  return d;
}

TransversalDesign rtd_extend(const TransversalDesign& td, const Resolution& resolution) {
  check_resolution(td, resolution, "rtd_extend");
  if (static_cast<int>(resolution.size()) != td.n)
    throw std::invalid_argument("rtd_extend: need exactly n parallel classes");
  TransversalDesign out;
  out.k = td.k + 1;
  out.n = td.n;
  out.groups = td.groups;
  std::vector<int> new_group;
  int base = td.point_count();
  for (int c = 0; c < td.n; ++c) new_group.push_back(base + c);
  out.groups.push_back(new_group);
  out.blocks = td.blocks;
  for (int c = 0; c < static_cast<int>(resolution.size()); ++c)
    for (int bi : resolution[c]) out.blocks[bi].push_back(base + c);
  require_valid(out, "rtd_extend");
  return out;
}

int PointMultigraph::degree(int y) const {
  int d = 0;
  for (const auto& [a, b] : edges) d += (a == y) + (b == y);
  return d;
}

int PointMultigraph::multiplicity(int y, int z) const {
  int m = 0;
  for (const auto& [a, b] : edges)
    if ((a == y && b == z) || (a == z && b == y)) ++m;
  return m;
}

bool PointMultigraph::regular_of_degree(int d) const {
  for (int v = 0; v < point_count; ++v)
    if (v != center && degree(v) != d) return false;
  return true;
}

std::vector<std::vector<int>> PointMultigraph::components() const {
  std::map<int, std::vector<int>> adj;
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::set<int> unseen;
  for (const auto& [v, _] : adj) unseen.insert(v);
  std::vector<std::vector<int>> comps;
  while (!unseen.empty()) {
    int start = *unseen.begin();
    std::vector<int> stack{start}, comp;
    unseen.erase(start);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : adj[v])
        if (unseen.erase(w)) stack.push_back(w);
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::vector<std::vector<int>> PointMultigraph::cycles() const {
  // Valid for 2-regular multigraphs: walk each component.
  std::multimap<int, std::pair<int, std::size_t>> adj;  // vertex -> (neighbor, edge id)
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj.insert({edges[i].first, {edges[i].second, i}});
    adj.insert({edges[i].second, {edges[i].first, i}});
  }
  std::vector<bool> used(edges.size(), false);
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (used[i]) continue;
    std::vector<int> cycle;
    int v = edges[i].first;
    std::size_t cur = i;
    while (true) {
      used[cur] = true;
      cycle.push_back(v);
      int w = edges[cur].first == v ? edges[cur].second : edges[cur].first;
      bool advanced = false;
      auto [lo, hi] = adj.equal_range(w);
      for (auto it = lo; it != hi; ++it) {
        if (!used[it->second.second]) {
          v = w;
          cur = it->second.second;
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        cycle.push_back(w);
        break;
      }
    }
    // closed cycle repeats the start vertex; drop the duplicate
    if (cycle.size() > 1 && cycle.back() == cycle.front()) cycle.pop_back();
    out.push_back(std::move(cycle));
  }
  return out;
}

bool PointMultigraph::single_cycle(int length) const {
  for (const auto& [a, b] : edges)
    if (degree(a) != 2 || degree(b) != 2) return false;
  auto comps = components();
  if (comps.size() != 1) return false;
  return static_cast<int>(comps.front().size()) == length &&
         static_cast<int>(edges.size()) == length;
}

PointMultigraph point_multigraph(const Design& design, int x) {
  if (design.params.k != 3) throw std::invalid_argument("point multigraph needs a triple system");
  if (x < 0 || x >= design.point_count()) throw std::invalid_argument("point out of range");
  PointMultigraph g;
  g.point_count = design.point_count();
  g.center = x;
  for (const auto& b : design.blocks) {
    if (std::find(b.begin(), b.end(), x) == b.end()) continue;
    std::vector<int> rest;
    for (int p : b)
      if (p != x) rest.push_back(p);
    g.edges.emplace_back(rest[0], rest[1]);
  }
  return g;
}

PointMultigraph union_multigraph(const PointMultigraph& a, const PointMultigraph& b) {
  PointMultigraph g;
  g.point_count = a.point_count;
  g.center = -1;
  g.edges = a.edges;
  g.edges.insert(g.edges.end(), b.edges.begin(), b.edges.end());
  return g;
}

namespace {

PointMultigraph td_point_graph(const TransversalDesign& td, int x) {
  PointMultigraph g;
  g.point_count = td.point_count();
  g.center = x;
  for (const auto& b : td.blocks) {
    if (std::find(b.begin(), b.end(), x) == b.end()) continue;
    std::vector<int> rest;
    for (int p : b)
      if (p != x) rest.push_back(p);
    g.edges.emplace_back(rest[0], rest[1]);
  }
  return g;
}

}  // namespace

bool is_hamiltonian_pair(const TransversalDesign& td, int group_index, int x, int y) {
  if (td.k != 3) throw std::invalid_argument("hamiltonian tests need k = 3");
  if (x == y) throw std::invalid_argument("points must be distinct");
  const auto& grp = td.groups.at(group_index);
  if (std::find(grp.begin(), grp.end(), x) == grp.end() ||
      std::find(grp.begin(), grp.end(), y) == grp.end())
    throw std::invalid_argument("points must lie in the named group");
  PointMultigraph u = union_multigraph(td_point_graph(td, x), td_point_graph(td, y));
  return u.single_cycle(2 * td.n);
}

bool is_pan_hamiltonian(const TransversalDesign& td, int group_index) {
  const auto& grp = td.groups.at(group_index);
  for (std::size_t i = 0; i < grp.size(); ++i)
    for (std::size_t j = i + 1; j < grp.size(); ++j)
      if (!is_hamiltonian_pair(td, group_index, grp[i], grp[j])) return false;
  return true;
}

bool is_atomic(const TransversalDesign& td) {
  for (int g = 0; g < td.k; ++g)
    if (!is_pan_hamiltonian(td, g)) return false;
  return true;
}

Hypergraph to_hypergraph(const Design& design) {
  return Hypergraph(design.point_count(), design.blocks);
}

Hypergraph to_hypergraph(const TransversalDesign& td, const std::vector<int>& include_groups) {
  std::vector<std::vector<int>> edges = td.blocks;
  for (int g : include_groups) {
    if (g < 0 || g >= td.k) throw std::invalid_argument("group index out of range");
    edges.push_back(td.groups[g]);
  }
  return Hypergraph(td.point_count(), std::move(edges));
}

// ---- Design file format -----------------------------------------------------

Design DesignFile::as_design() const {
  if (kind != Kind::Bibd) throw std::invalid_argument("file does not hold a block design");
  return Design{DesignParams{v, k, lambda}, blocks};
}

TransversalDesign DesignFile::as_td() const {
  if (kind != Kind::Td) throw std::invalid_argument("file does not hold a transversal design");
  TransversalDesign td;
  td.k = k;
  td.n = n;
  td.groups = groups;
  td.blocks = blocks;
  return td;
}

std::optional<int> DesignFile::index_of(const std::string& token) const {
  for (std::size_t i = 0; i < point_names.size(); ++i)
    if (point_names[i] == token) return static_cast<int>(i);
  return std::nullopt;
}

DesignFile design_file_from(const Design& d) {
  DesignFile f;
  f.kind = DesignFile::Kind::Bibd;
  f.v = d.params.v;
  f.k = d.params.k;
  f.lambda = d.params.lambda;
  for (int p = 0; p < d.point_count(); ++p) f.point_names.push_back(std::to_string(p));
  f.blocks = d.blocks;
  return f;
}

DesignFile design_file_from(const TransversalDesign& td, std::vector<std::string> names) {
  DesignFile f;
  f.kind = DesignFile::Kind::Td;
  f.k = td.k;
  f.n = td.n;
  f.v = td.point_count();
  if (names.empty())
    for (int p = 0; p < td.point_count(); ++p) names.push_back(std::to_string(p));
  if (static_cast<int>(names.size()) != td.point_count())
    throw std::invalid_argument("point name count mismatch");
  f.point_names = std::move(names);
  f.groups = td.groups;
  f.blocks = td.blocks;
  return f;
}

DesignFile parse_design(std::istream& in) {
  DesignFile f;
  std::string line;
  bool have_header = false;
  std::map<std::string, int> name_index;
  auto intern = [&](const std::string& tok) {
    auto it = name_index.find(tok);
    if (it != name_index.end()) return it->second;
    int id = static_cast<int>(f.point_names.size());
    f.point_names.push_back(tok);
    name_index[tok] = id;
    return id;
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (!have_header) {
      if (tok == "design") {
        f.kind = DesignFile::Kind::Bibd;
      } else if (tok == "td") {
        f.kind = DesignFile::Kind::Td;
      } else {
        throw std::invalid_argument("expected 'design' or 'td' header");
      }
      std::string kv;
      while (ls >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad header field: " + kv);
        std::string key = kv.substr(0, eq);
        long long val = std::stoll(kv.substr(eq + 1));
        if (key == "v") f.v = val;
        else if (key == "k") f.k = static_cast<int>(val);
        else if (key == "lambda") f.lambda = val;
        else if (key == "n") f.n = static_cast<int>(val);
        else throw std::invalid_argument("unknown header field: " + key);
      }
      have_header = true;
      continue;
    }
    std::vector<int> pts;
    std::string p;
    while (ls >> p) pts.push_back(intern(p));
    if (tok == "group")
      f.groups.push_back(std::move(pts));
    else if (tok == "block")
      f.blocks.push_back(std::move(pts));
    else
      throw std::invalid_argument("expected 'group' or 'block' line, got: " + tok);
  }
  if (!have_header) throw std::invalid_argument("missing design header");
  if (f.kind == DesignFile::Kind::Td && f.v == 0) f.v = static_cast<long long>(f.k) * f.n;
  return f;
}

DesignFile parse_design_string(const std::string& text) {
  std::istringstream in(text);
  return parse_design(in);
}

std::string format_design(const DesignFile& f) {
  std::ostringstream out;
  if (f.kind == DesignFile::Kind::Bibd) {
    out << "design v=" << f.v << " k=" << f.k << " lambda=" << f.lambda << "\n";
  } else {
    out << "td k=" << f.k << " n=" << f.n << "\n";
  }
  auto emit = [&](const char* tag, const std::vector<std::vector<int>>& rows) {
    for (const auto& row : rows) {
      out << tag;
      for (int p : row) out << " " << f.point_names.at(p);
      out << "\n";
    }
  };
  emit("group", f.groups);
  emit("block", f.blocks);
  return out.str();
}

ValidationReport validate_design_file(const DesignFile& f) {
  if (f.kind == DesignFile::Kind::Bibd) {
    ValidationReport rep;
    if (static_cast<long long>(f.point_names.size()) > f.v) {
      rep.issues.push_back("more point names than v");
      return rep;
    }
    auto inner = validate_bibd(f.blocks, f.v, f.k, f.lambda);
    return inner;
  }
  return validate_td(f.as_td());
}

}  // namespace ttt
