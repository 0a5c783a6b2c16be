#include "ttt/scoring.hpp"

#include <bit>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ttt {

Dyadic Dyadic::make(long long numerator, int exponent) {
  if (exponent < 0) {
    numerator <<= -exponent;
    exponent = 0;
  }
  while (numerator != 0 && numerator % 2 == 0 && exponent > 0) {
    numerator /= 2;
    --exponent;
  }
  if (numerator == 0) exponent = 0;
  return Dyadic{numerator, exponent};
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
  int e = std::max(exp, o.exp);
  long long a = num << (e - exp);
  long long b = o.num << (e - o.exp);
  return make(a + b, e);
}

bool Dyadic::operator<(const Dyadic& o) const {
  int e = std::max(exp, o.exp);
  return (num << (e - exp)) < (o.num << (e - o.exp));
}

std::string Dyadic::str() const {
  if (exp == 0) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(1LL << exp);
}

double Dyadic::approx() const { return static_cast<double>(num) / static_cast<double>(1LL << exp); }

int scale_exponent(const Hypergraph& h) {
  int k = h.max_edge_size();
  if (k > 40) throw std::invalid_argument("edge size too large for exact dyadic weights");
  return k;
}

long long scaled_edge_weight(const Hypergraph& h, Mask maker, Mask breaker, int edge_index,
                             int scale_exp) {
  Mask e = h.edge_masks[edge_index];
  if (e & breaker) return 0;
  int filled = std::popcount(e & maker);
  int size = static_cast<int>(h.edges[edge_index].size());
  return 1LL << (scale_exp - size + filled);
}

long long scaled_vertex_weight(const Hypergraph& h, Mask maker, Mask breaker, int v,
                               int scale_exp) {
  long long total = 0;
  for (int i = 0; i < h.edge_count(); ++i)
    if (h.edge_masks[i] & bit(v)) total += scaled_edge_weight(h, maker, breaker, i, scale_exp);
  return total;
}

long long scaled_total_score(const Hypergraph& h, Mask maker, Mask breaker, int scale_exp) {
  long long total = 0;
  for (int i = 0; i < h.edge_count(); ++i)
    total += scaled_edge_weight(h, maker, breaker, i, scale_exp);
  return total;
}

Dyadic edge_weight(const Hypergraph& h, const GameState& state, int edge_index) {
  int se = scale_exponent(h);
  return Dyadic::make(scaled_edge_weight(h, state.maker, state.breaker, edge_index, se), se);
}

Dyadic vertex_weight(const Hypergraph& h, const GameState& state, int v) {
  int se = scale_exponent(h);
  return Dyadic::make(scaled_vertex_weight(h, state.maker, state.breaker, v, se), se);
}

Dyadic total_score(const Hypergraph& h, const GameState& state) {
  int se = scale_exponent(h);
  return Dyadic::make(scaled_total_score(h, state.maker, state.breaker, se), se);
}

IncrementalScore::IncrementalScore(const Hypergraph& h, const GameState& initial)
    : h_(h), scale_exp_(scale_exponent(h)), state_(initial) {
  total_ = scaled_total_score(h_, state_.maker, state_.breaker, scale_exp_);
}

void IncrementalScore::play(Side side, int v) {
  Mask vb = bit(v);
  if (state_.occupied() & vb) throw std::invalid_argument("vertex already played");
  for (int i = 0; i < h_.edge_count(); ++i) {
    if (!(h_.edge_masks[i] & vb)) continue;
    long long before = scaled_edge_weight(h_, state_.maker, state_.breaker, i, scale_exp_);
    // Maker doubles an untouched edge; Breaker zeroes it.
    total_ += (side == Side::First) ? before : -before;
  }
  if (side == Side::First)
    state_.maker |= vb;
  else
    state_.breaker |= vb;
  state_.to_move = other(state_.to_move);
}

void IncrementalScore::undo(Side side, int v) {
  Mask vb = bit(v);
  if (!(state_.side_mask(side) & vb)) throw std::invalid_argument("vertex not played by side");
  if (side == Side::First)
    state_.maker &= ~vb;
  else
    state_.breaker &= ~vb;
  state_.to_move = other(state_.to_move);
  for (int i = 0; i < h_.edge_count(); ++i) {
    if (!(h_.edge_masks[i] & vb)) continue;
    long long before = scaled_edge_weight(h_, state_.maker, state_.breaker, i, scale_exp_);
    total_ -= (side == Side::First) ? before : -before;
  }
}

Dyadic IncrementalScore::score() const { return Dyadic::make(total_, scale_exp_); }

std::optional<int> uniform_edge_size(const Hypergraph& h) {
  if (h.edges.empty()) return std::nullopt;
  std::size_t k = h.edges.front().size();
  for (const auto& e : h.edges)
    if (e.size() != k) return std::nullopt;
  return static_cast<int>(k);
}

bool is_linear(const Hypergraph& h) {
  std::map<std::pair<int, int>, int> pair_count;
  for (const auto& e : h.edges)
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = i + 1; j < e.size(); ++j) {
        auto key = std::minmax(e[i], e[j]);
        if (++pair_count[key] > 1) return false;
      }
  return true;
}

namespace {

std::optional<int> qualify_uniform_linear(const Hypergraph& h, CriterionVerdict& verdict) {
  auto k = uniform_edge_size(h);
  if (!k) {
    verdict.reason = "hypergraph is not uniform";
    return std::nullopt;
  }
  if (!is_linear(h)) {
    verdict.reason = "hypergraph is not linear";
    return std::nullopt;
  }
  return k;
}

}  // namespace

CriterionVerdict es_breaker_criterion(const Hypergraph& h) {
  CriterionVerdict v;
  v.name = "erdos-selfridge-breaker";
  auto k = qualify_uniform_linear(h, v);
  if (!k) return v;
  if (*k > 60) {
    v.reason = "edge size too large";
    return v;
  }
  long long lhs = 1LL << *k;
  long long edges = h.edge_count();
  long long maxdeg = 0;
  for (int u = 0; u < h.vertex_count; ++u) {
    long long d = 0;
    for (Mask m : h.edge_masks)
      if (m & bit(u)) ++d;
    maxdeg = std::max(maxdeg, d);
  }
  std::ostringstream os;
  os << "2^" << *k << " = " << lhs << (lhs > edges + maxdeg ? " > " : " <= ") << edges << " + "
     << maxdeg << " = " << edges + maxdeg;
  v.inequality = os.str();
  if (lhs > edges + maxdeg) v.winner = PredictedWinner::Breaker;
  return v;
}

CriterionVerdict beck_maker_criterion(const Hypergraph& h) {
  CriterionVerdict v;
  v.name = "beck-maker";
  auto k = qualify_uniform_linear(h, v);
  if (!k) return v;
  if (*k > 56) {
    v.reason = "edge size too large";
    return v;
  }
  // 2^(k-3) |V| < |E|, compared as 2^k |V| < 8 |E| to stay in integers for k < 3.
  long long lhs = (1LL << *k) * h.vertex_count;
  long long rhs = 8LL * h.edge_count();
  std::ostringstream os;
  os << "2^(" << *k << "-3) * " << h.vertex_count << (lhs < rhs ? " < " : " >= ") << h.edge_count()
     << "  [scaled: " << lhs << (lhs < rhs ? " < " : " >= ") << rhs << "]";
  v.inequality = os.str();
  if (lhs < rhs) v.winner = PredictedWinner::Maker;
  return v;
}

CriterionVerdict bibd_mb_bounds(long long v, int k) {
  CriterionVerdict out;
  out.name = "bibd-lambda1-bounds";
  if (k < 2 || v < k) throw std::invalid_argument("need v >= k >= 2");
  if ((v - 1) % (k - 1) != 0 ||
      (v * (v - 1)) % (static_cast<long long>(k) * (k - 1)) != 0)
    throw std::invalid_argument("(v,k,1) is not admissible");
  if (k > 40) throw std::invalid_argument("block size too large");
  // Maker when v > k(k-1) 2^(k-3) + 1, i.e. 8(v-1) > k(k-1) 2^k.
  long long maker_lhs = 8 * (v - 1);
  long long maker_rhs = static_cast<long long>(k) * (k - 1) * (1LL << k);
  // Breaker when v is below the root of v^2 + (k-1)v - k - k(k-1)2^k = 0;
  // equivalently (v-1)(v+k) < k(k-1) 2^k, which avoids the square root.
  long long breaker_lhs = (v - 1) * (v + k);
  long long breaker_rhs = maker_rhs;
  std::ostringstream os;
  if (maker_lhs > maker_rhs) {
    out.winner = PredictedWinner::Maker;
    os << "v = " << v << " > k(k-1)2^(k-3)+1 = " << maker_rhs / 8 + 1;
  } else if (breaker_lhs < breaker_rhs) {
    out.winner = PredictedWinner::Breaker;
    os << "(v-1)(v+k) = " << breaker_lhs << " < k(k-1)2^k = " << breaker_rhs;
  } else {
    os << "v = " << v << ": " << maker_lhs << " <= " << maker_rhs << " and " << breaker_lhs
       << " >= " << breaker_rhs;
  }
  out.inequality = os.str();
  return out;
}

CriterionVerdict td_mb_bounds(int k, long long n) {
  CriterionVerdict out;
  out.name = "td-bounds";
  if (k < 2 || n < 1) throw std::invalid_argument("need k >= 2 and n >= 1");
  if (k > 40) throw std::invalid_argument("group count too large");
  long long breaker_lhs = 1LL << k;       // 2^k
  long long breaker_rhs = n * (n + 1);    // Breaker iff 2^k > n(n+1)
  long long maker_lhs = 8 * n;            // Maker iff n > k 2^(k-3), scaled by 8
  long long maker_rhs = static_cast<long long>(k) * (1LL << k);
  std::ostringstream os;
  if (breaker_lhs > breaker_rhs) {
    out.winner = PredictedWinner::Breaker;
    os << "2^" << k << " = " << breaker_lhs << " > n(n+1) = " << breaker_rhs;
  } else if (maker_lhs > maker_rhs) {
    out.winner = PredictedWinner::Maker;
    os << "n = " << n << " > k*2^(k-3) = " << maker_rhs / 8;
  } else {
    os << "2^" << k << " = " << breaker_lhs << " <= " << breaker_rhs << " and n = " << n
       << " <= k*2^(k-3)";
  }
  out.inequality = os.str();
  return out;
}

}  // namespace ttt
