#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "avarc/core/json.hpp"
#include "avarc/engine/state.hpp"

namespace avarc::store {

/// One journal line:
///   {"seq":N,"kind":"...","payload":{...},"crc32":"hex"}
/// The CRC-32 covers every byte of the line before `,"crc32":"`.
struct JournalRecord {
  std::uint64_t seq = 0;
  std::string kind;
  Json payload;
};

std::string encode_record(const JournalRecord &r);
/// nullopt for a malformed line or a checksum mismatch.
std::optional<JournalRecord> decode_record(std::string_view line);

std::string crc32_hex(std::string_view bytes);

/// Test hooks called at named points; a hook may throw to simulate a crash.
/// Points: "journal.before_fsync", "snapshot.before_rename".
using FaultHook = std::function<void(std::string_view point)>;

inline constexpr std::string_view kJournalFile = "journal.jsonl";
inline constexpr std::string_view kSnapshotDir = "snapshot";
inline constexpr std::string_view kSnapshotFile = "state.json";

struct OpenResult {
  State state;
  std::uint64_t seq = 0;
  std::optional<std::uint64_t> snapshot_seq;  // set when a snapshot was used
  std::vector<std::string> warnings;
};

/// Append-only journal plus manual snapshots in one directory. Not
/// thread-safe; the engine serializes writers.
class Store {
 public:
  /// Creates the directory when absent, then loads the newest usable
  /// snapshot and replays the journal after it. A damaged tail (bad checksum,
  /// torn line, incomplete batch) is cut off, reported as a warning and
  /// truncated from the file.
  static std::pair<Store, OpenResult> open(const std::filesystem::path &dir,
                                           FaultHook hook = {});

  Store(Store &&) noexcept;
  Store &operator=(Store &&) noexcept;
  ~Store();

  /// Appends one batch atomically and fsyncs before returning. Batches of
  /// more than one record carry "_txn_last" in every payload so replay can
  /// drop a torn batch. Returns the last seq written.
  std::uint64_t append(const std::vector<std::pair<std::string, Json>> &batch);

  /// Writes state.json via temp file, fsync and rename.
  void write_snapshot(const State &s, std::uint64_t as_of_seq);

  std::uint64_t seq() const { return seq_; }
  const std::filesystem::path &dir() const { return dir_; }

 private:
  Store(std::filesystem::path dir, int fd, std::uint64_t seq, FaultHook hook);

  std::filesystem::path dir_;
  int fd_ = -1;
  std::uint64_t seq_ = 0;
  FaultHook hook_;
};

/// Key carrying the id a command produced; replay checks it.
inline constexpr std::string_view kResultKey = "_id";
inline constexpr std::string_view kTxnLastKey = "_txn_last";

/// Writes `bytes` to `path` through a temp file, fsync and rename.
void write_file_atomic(const std::filesystem::path &path, std::string_view bytes,
                       const FaultHook &hook = {}, std::string_view point = {});

}  // namespace avarc::store
