#pragma once

#include <optional>
#include <string>

#include "ttt/hypergraph.hpp"

namespace ttt {

/// Exact dyadic rational num / 2^exp, normalized so num is odd or zero.
/// Weight arithmetic never rounds; the exponent stays within the maximum
/// edge size of the hypergraph the weight came from.
struct Dyadic {
  long long num = 0;
  int exp = 0;

  static Dyadic zero() { return {}; }
  static Dyadic make(long long numerator, int exponent);

  Dyadic operator+(const Dyadic& o) const;
  bool operator==(const Dyadic& o) const { return num == o.num && exp == o.exp; }
  bool operator!=(const Dyadic& o) const { return !(*this == o); }
  bool operator<(const Dyadic& o) const;
  bool operator<=(const Dyadic& o) const { return *this < o || *this == o; }

  std::string str() const;  // "7/8", "1", "0"
  double approx() const;
};

/// Scaled helpers: all weights for one hypergraph share denominator
/// 2^scale_exponent(h), so they live in plain integers.
int scale_exponent(const Hypergraph& h);
long long scaled_edge_weight(const Hypergraph& h, Mask maker, Mask breaker, int edge_index,
                             int scale_exp);
long long scaled_vertex_weight(const Hypergraph& h, Mask maker, Mask breaker, int v,
                               int scale_exp);
long long scaled_total_score(const Hypergraph& h, Mask maker, Mask breaker, int scale_exp);

/// w(h) = 2^(|X∩h|-|h|) when the edge avoids the Breaker set, else 0.
Dyadic edge_weight(const Hypergraph& h, const GameState& state, int edge_index);
/// Sum of incident edge weights.
Dyadic vertex_weight(const Hypergraph& h, const GameState& state, int v);
/// Sum over all edges.
Dyadic total_score(const Hypergraph& h, const GameState& state);

/// Maintains the total score across play/undo without rescanning all edges.
class IncrementalScore {
 public:
  explicit IncrementalScore(const Hypergraph& h, const GameState& initial = {});
  void play(Side side, int v);
  void undo(Side side, int v);
  long long scaled() const { return total_; }
  Dyadic score() const;
  const GameState& state() const { return state_; }

 private:
  const Hypergraph& h_;
  int scale_exp_;
  GameState state_;
  long long total_;
};

enum class PredictedWinner { Maker, Breaker, Inconclusive };

struct CriterionVerdict {
  PredictedWinner winner = PredictedWinner::Inconclusive;
  std::string name;
  std::string inequality;  // the instantiated comparison, with its numbers
  std::string reason;      // set when the criterion does not apply
};

std::optional<int> uniform_edge_size(const Hypergraph& h);
bool is_linear(const Hypergraph& h);  // no vertex pair in more than one edge

/// Second player wins when 2^k exceeds the edge count plus the maximum degree
/// (k-uniform linear hypergraphs only).
CriterionVerdict es_breaker_criterion(const Hypergraph& h);

/// First player wins when 2^(k-3)|V| < |E| (k-uniform linear only).
CriterionVerdict beck_maker_criterion(const Hypergraph& h);

/// Closed-form bounds for a block design with lambda = 1 and block size k.
/// Both thresholds are evaluated in exact integer arithmetic.
CriterionVerdict bibd_mb_bounds(long long v, int k);

/// Closed-form bounds for a transversal design with k groups of size n:
/// Breaker iff 2^k > n(n+1); Maker iff n > k 2^(k-3).
CriterionVerdict td_mb_bounds(int k, long long n);

}  // namespace ttt
