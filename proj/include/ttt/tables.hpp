#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ttt/cache.hpp"
#include "ttt/designs.hpp"
#include "ttt/solver.hpp"
#include "ttt/strategy.hpp"

namespace ttt {

/// One reproduction row: a design family member, the game variant, and the
/// published outcome to check against.
struct TableRowSpec {
  std::string family;
  std::string param;
  GameVariant variant = GameVariant::MakerBreaker;
  Outcome expected = Outcome::FirstWin;
  bool heavy = false;  // opt-in rows with real budgets
  std::function<Hypergraph()> build;
  /// Closed-form verdict for the row's parameters, when one applies.
  std::function<std::optional<Outcome>(GameVariant)> criterion;
  /// Constructive strategy establishing a first-player strong win, when known.
  std::function<std::optional<Strategy>()> strategy;
};

struct TableRowResult {
  const TableRowSpec* spec = nullptr;
  std::optional<Outcome> computed;  // empty = budget exhausted
  std::string source;               // criterion | strategy | solver | cached
  bool match = false;
  double seconds = 0;
  std::string note;
};

struct TableOptions {
  std::string scope = "small";  // small | heavy | all
  Budget heavy_budget{0, 0};
  int threads = 1;
  bool use_cache = true;
  std::optional<std::uint64_t> audit_seed;  // pin the cache audit sample
};

struct TableRunResult {
  std::vector<TableRowResult> rows;
  bool all_match = true;
  bool budget_exhausted = false;
  int audited = 0;
  int audit_failures = 0;
};

const std::vector<TableRowSpec>& reproduction_rows();
TableRunResult run_tables(const TableOptions& options);

/// Solve the transversal design with its first `group_count` groups added as
/// winning sets; used for the boundary experiments around TD(4,4).
struct AugmentResult {
  int groups_added = 0;
  SolveResult mb;
  std::optional<SolveResult> strong;
};
AugmentResult run_augment(const TransversalDesign& td, int group_count, bool also_strong,
                          const Budget& budget, int threads = 1);

}  // namespace ttt
