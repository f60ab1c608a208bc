#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "avarc/core/time.hpp"
#include "avarc/engine/commands.hpp"
#include "avarc/engine/state.hpp"
#include "avarc/search/search.hpp"
#include "avarc/store/store.hpp"

namespace avarc {

/// An immutable committed state with its search indexes.
struct Snapshot {
  std::uint64_t seq = 0;
  State state;
  search::SearchIndex index;
};

struct EngineOptions {
  Clock clock = system_clock();
  store::FaultHook fault_hook;
};

/// Single writer, many readers. Readers take a Snapshot and never block
/// writers; commit() validates a batch against a private copy, journals it
/// (when store-backed) and then publishes the new snapshot.
class Engine {
 public:
  /// Volatile engine, for tests and one-shot tools.
  explicit Engine(EngineOptions options = {});
  /// Opens (or creates) a store directory.
  Engine(const std::filesystem::path &store_dir, EngineOptions options = {});
  ~Engine();

  Engine(const Engine &) = delete;
  Engine &operator=(const Engine &) = delete;

  std::shared_ptr<const Snapshot> snapshot() const;

  /// All-or-nothing. Returns the id produced by each command. On failure
  /// nothing is journaled and the published state is unchanged.
  std::vector<std::string> commit(const std::vector<cmd::Command> &batch);
  std::string commit(const cmd::Command &c);

  Timestamp now() const { return options_.clock(); }

  /// Writes a snapshot of the current state (store-backed engines only).
  void write_snapshot();

  /// Recomputes the search indexes from state. Returns true when the
  /// recomputed indexes equal the ones being replaced.
  bool rebuild_indexes();

  bool persistent() const { return store_.has_value(); }
  const std::vector<std::string> &open_warnings() const { return warnings_; }
  std::optional<std::uint64_t> opened_from_snapshot() const { return snapshot_seq_; }

 private:
  void publish(std::shared_ptr<const Snapshot> next);

  EngineOptions options_;
  std::optional<store::Store> store_;
  std::vector<std::string> warnings_;
  std::optional<std::uint64_t> snapshot_seq_;
  bool store_failed_ = false;

  std::mutex writer_;
  mutable std::mutex current_mutex_;
  std::shared_ptr<const Snapshot> current_;
};

}  // namespace avarc
