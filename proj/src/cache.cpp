#include "ttt/cache.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <sstream>

namespace ttt {

const char* const kSolverVersion = "1";

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

SolveCache::SolveCache(std::string dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) std::filesystem::create_directories(dir_);
}

std::string SolveCache::key_for(const Hypergraph& h, GameVariant variant,
                                const GameState& state, const TurnSchedule& schedule) {
  std::ostringstream key;
  key << format_hypergraph(h);
  key << "variant " << (variant == GameVariant::Strong ? "strong" : "mb") << "\n";
  key << "state " << std::hex << state.maker << " " << state.breaker << std::dec << "\n";
  key << "schedule " << schedule.str() << "\n";
  return key.str();
}

namespace {

std::string entry_path(const std::string& dir, const std::string& key_text) {
  char name[32];
  std::snprintf(name, sizeof(name), "%016llx",
                static_cast<unsigned long long>(fnv1a64(key_text)));
  return dir + "/" + name + ".solve";
}

std::optional<GameValue> value_from_name(const std::string& name) {
  for (GameValue v : {GameValue::WinForToMove, GameValue::Draw, GameValue::LossForToMove,
                      GameValue::MakerWin, GameValue::BreakerWin, GameValue::Unknown})
    if (game_value_name(v) == name) return v;
  return std::nullopt;
}

}  // namespace

std::optional<SolveCacheEntry> SolveCache::lookup(const std::string& key_text) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(entry_path(dir_, key_text));
  if (!in) return std::nullopt;
  std::string line;
  if (!std::getline(in, line)) return std::nullopt;
  std::istringstream hs(line);
  std::string tag, value_name, version;
  std::uint64_t nodes = 0;
  std::int64_t ts = 0;
  std::size_t key_len = 0;
  if (!(hs >> tag >> value_name >> version >> nodes >> ts >> key_len)) return std::nullopt;
  if (tag != "entry") return std::nullopt;
  std::string key(key_len, '\0');
  in.read(key.data(), static_cast<std::streamsize>(key_len));
  if (in.gcount() != static_cast<std::streamsize>(key_len)) return std::nullopt;
  if (key != key_text) return std::nullopt;           // hash collision: miss
  if (version != kSolverVersion) return std::nullopt;  // stale solver
  auto value = value_from_name(value_name);
  if (!value) return std::nullopt;
  return SolveCacheEntry{key, *value, version, nodes, ts};
}

void SolveCache::store(const std::string& key_text, GameValue value,
                       std::uint64_t nodes) const {
  if (!enabled()) return;
  if (value == GameValue::Unknown) return;  // never cache budget exhaustion
  auto now = std::chrono::duration_cast<std::chrono::seconds>(
                 std::chrono::system_clock::now().time_since_epoch())
                 .count();
  std::string path = entry_path(dir_, key_text);
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << "entry " << game_value_name(value) << " " << kSolverVersion << " " << nodes << " "
        << now << " " << key_text.size() << "\n";
    out << key_text;
  }
  std::filesystem::rename(tmp, path);
}

SolveCache cache_from_env() {
  const char* dir = std::getenv("TTT_CACHE_DIR");
  return SolveCache(dir ? dir : "");
}

}  // namespace ttt
