#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ttt/hypergraph.hpp"
#include "ttt/solver.hpp"

namespace ttt {

std::uint64_t fnv1a64(const std::string& text);

/// Bumped whenever solver semantics change; stale entries are ignored.
extern const char* const kSolverVersion;

struct SolveCacheEntry {
  std::string key_text;  // canonical description the hash was taken over
  GameValue value = GameValue::Unknown;
  std::string version;
  std::uint64_t nodes = 0;
  std::int64_t timestamp = 0;
};

/// File-per-entry cache keyed by content hash. A lookup only hits on an
/// exact key-text match with a matching solver version. Writes go through a
/// temp file and rename, so concurrent readers never see partial entries.
class SolveCache {
 public:
  /// Disabled when dir is empty.
  explicit SolveCache(std::string dir);

  bool enabled() const { return !dir_.empty(); }
  static std::string key_for(const Hypergraph& h, GameVariant variant, const GameState& state,
                             const TurnSchedule& schedule);

  std::optional<SolveCacheEntry> lookup(const std::string& key_text) const;
  void store(const std::string& key_text, GameValue value, std::uint64_t nodes) const;

 private:
  std::string dir_;
};

/// Reads the cache directory from the TTT_CACHE_DIR environment variable;
/// empty (disabled) when unset.
SolveCache cache_from_env();

}  // namespace ttt
