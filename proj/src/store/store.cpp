#include "avarc/store/store.hpp"

#include <fcntl.h>
#include <unistd.h>
#include <zlib.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "avarc/engine/commands.hpp"

namespace avarc::store {
namespace fs = std::filesystem;
namespace {

constexpr std::string_view kCrcMarker = ",\"crc32\":\"";

[[noreturn]] void throw_errno(const std::string &what) {
  throw Error(Errc::io, what + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view bytes, const std::string &what) {
  while (!bytes.empty()) {
    ssize_t n = ::write(fd, bytes.data(), bytes.size());
    if (n < 0) {
      if (errno == EINTR)
        continue;
      throw_errno(what);
    }
    bytes.remove_prefix(static_cast<std::size_t>(n));
  }
}

void fsync_dir(const fs::path &dir) {
  int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0)
    return;
  ::fsync(fd);
  ::close(fd);
}

std::string read_file(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Batch {
  std::vector<JournalRecord> records;
  std::size_t end_offset = 0;  // byte offset just past the batch
};

struct Scan {
  std::vector<Batch> batches;
  std::size_t valid_bytes = 0;
  std::optional<std::string> warning;
};

// Splits the journal into complete, checksummed batches; stops at the first
// defect.
Scan scan_journal(const std::string &bytes) {
  Scan scan;
  std::size_t pos = 0;
  std::uint64_t expected = 1;
  std::optional<Batch> open_batch;
  std::uint64_t batch_last = 0;
  while (pos < bytes.size()) {
    auto nl = bytes.find('\n', pos);
    if (nl == std::string::npos) {
      scan.warning = "torn record after seq " + std::to_string(expected - 1);
      break;
    }
    auto rec = decode_record(std::string_view(bytes).substr(pos, nl - pos));
    if (!rec) {
      scan.warning = "checksum or format error at seq " + std::to_string(expected);
      break;
    }
    if (rec->seq != expected) {
      scan.warning = "sequence gap: expected " + std::to_string(expected) + ", found " +
                     std::to_string(rec->seq);
      break;
    }
    pos = nl + 1;
    ++expected;
    std::uint64_t last = rec->seq;
    if (auto it = rec->payload.find(kTxnLastKey);
        it != rec->payload.end() && it->is_number_unsigned())
      last = it->get<std::uint64_t>();
    if (!open_batch) {
      open_batch = Batch{};
      batch_last = last;
    } else if (last != batch_last) {
      scan.warning = "inconsistent batch at seq " + std::to_string(rec->seq);
      open_batch.reset();
      break;
    }
    open_batch->records.push_back(std::move(*rec));
    if (open_batch->records.back().seq == batch_last) {
      open_batch->end_offset = pos;
      scan.valid_bytes = pos;
      scan.batches.push_back(std::move(*open_batch));
      open_batch.reset();
    }
  }
  if (open_batch && !scan.warning)
    scan.warning = "incomplete batch ending at seq " + std::to_string(batch_last);
  return scan;
}

void replay_batch(State &s, const Batch &b) {
  State next = s;
  for (const auto &r : b.records) {
    auto c = cmd::command_from(r.kind, r.payload);
    auto id = cmd::apply(next, c);
    if (auto it = r.payload.find(kResultKey); it != r.payload.end() && *it != id)
      throw Error(Errc::corrupt, "replay of seq " + std::to_string(r.seq) +
                                     " produced " + id + " instead of " +
                                     it->get<std::string>());
  }
  s = std::move(next);
}

}  // namespace

std::string crc32_hex(std::string_view bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  crc = ::crc32(crc, reinterpret_cast<const Bytef *>(bytes.data()),
                static_cast<uInt>(bytes.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
  return buf;
}

std::string encode_record(const JournalRecord &r) {
  std::string line = "{\"seq\":" + std::to_string(r.seq) +
                     ",\"kind\":" + Json(r.kind).dump() +
                     ",\"payload\":" + r.payload.dump();
  auto crc = crc32_hex(line);
  line += kCrcMarker;
  line += crc;
  line += "\"}";
  return line;
}

std::optional<JournalRecord> decode_record(std::string_view line) {
  auto at = line.rfind(kCrcMarker);
  if (at == std::string_view::npos || !line.ends_with("\"}"))
    return std::nullopt;
  auto hex = line.substr(at + kCrcMarker.size());
  hex.remove_suffix(2);
  if (hex != crc32_hex(line.substr(0, at)))
    return std::nullopt;
  try {
    auto j = Json::parse(line);
    JournalRecord r;
    r.seq = j.at("seq").get<std::uint64_t>();
    r.kind = j.at("kind").get<std::string>();
    r.payload = j.at("payload");
    if (!r.payload.is_object())
      return std::nullopt;
    return r;
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  }
}

void write_file_atomic(const fs::path &path, std::string_view bytes,
                       const FaultHook &hook, std::string_view point) {
  fs::path tmp = path;
  tmp += ".tmp";
  int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0)
    throw_errno("cannot create " + tmp.string());
  try {
    write_all(fd, bytes, "cannot write " + tmp.string());
    if (::fsync(fd) != 0)
      throw_errno("cannot fsync " + tmp.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  if (hook && !point.empty())
    hook(point);
  if (::rename(tmp.c_str(), path.c_str()) != 0)
    throw_errno("cannot rename " + tmp.string());
  fsync_dir(path.parent_path());
}

Store::Store(fs::path dir, int fd, std::uint64_t seq, FaultHook hook)
    : dir_(std::move(dir)), fd_(fd), seq_(seq), hook_(std::move(hook)) { }

Store::Store(Store &&other) noexcept
    : dir_(std::move(other.dir_)), fd_(std::exchange(other.fd_, -1)),
      seq_(other.seq_), hook_(std::move(other.hook_)) { }

Store &Store::operator=(Store &&other) noexcept {
  if (this != &other) {
    if (fd_ >= 0)
      ::close(fd_);
    dir_ = std::move(other.dir_);
    fd_ = std::exchange(other.fd_, -1);
    seq_ = other.seq_;
    hook_ = std::move(other.hook_);
  }
  return *this;
}

Store::~Store() {
  if (fd_ >= 0)
    ::close(fd_);
}

std::pair<Store, OpenResult> Store::open(const fs::path &dir, FaultHook hook) {
  std::error_code ec;
  fs::create_directories(dir / kSnapshotDir, ec);
  if (ec)
    throw Error(Errc::io, "cannot create store directory " + dir.string() + ": " +
                              ec.message());
  const fs::path journal = dir / kJournalFile;
  const std::string bytes = read_file(journal);
  Scan scan = scan_journal(bytes);

  OpenResult result;
  if (scan.warning)
    result.warnings.push_back(*scan.warning);
  const std::uint64_t valid_seq =
      scan.batches.empty() ? 0 : scan.batches.back().records.back().seq;

  const fs::path snap_path = dir / kSnapshotDir / kSnapshotFile;
  if (fs::exists(snap_path)) {
    try {
      auto j = Json::parse(read_file(snap_path));
      auto as_of = j.at("as_of_seq").get<std::uint64_t>();
      if (as_of > valid_seq) {
        result.warnings.push_back("snapshot at seq " + std::to_string(as_of) +
                                  " is ahead of the journal; ignored");
      } else {
        result.state = state_from_json(j.at("state"));
        result.snapshot_seq = as_of;
      }
    } catch (const std::exception &e) {
      result.state = State{};
      result.warnings.push_back(std::string("unreadable snapshot ignored: ") + e.what());
    }
  }

  // Snapshots are only taken between batches; one that splits a batch did
  // not come from this engine and is dropped.
  if (result.snapshot_seq && *result.snapshot_seq > 0) {
    bool aligned = false;
    for (const auto &b : scan.batches)
      aligned = aligned || b.records.back().seq == *result.snapshot_seq;
    if (!aligned) {
      result.warnings.push_back("snapshot does not end on a batch boundary; ignored");
      result.state = State{};
      result.snapshot_seq.reset();
    }
  }

  std::size_t keep_bytes = scan.valid_bytes;
  const std::uint64_t from = result.snapshot_seq.value_or(0);
  std::size_t prev_end = 0;
  for (const auto &b : scan.batches) {
    if (b.records.back().seq > from) {
      try {
        replay_batch(result.state, b);
      } catch (const Error &e) {
        result.warnings.push_back("replay stopped at seq " +
                                  std::to_string(b.records.front().seq) + ": " +
                                  e.what());
        keep_bytes = prev_end;
        break;
      }
    }
    result.seq = b.records.back().seq;
    prev_end = b.end_offset;
  }

  int fd = ::open(journal.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0)
    throw_errno("cannot open " + journal.string());
  if (keep_bytes < bytes.size()) {
    if (::ftruncate(fd, static_cast<off_t>(keep_bytes)) != 0) {
      ::close(fd);
      throw_errno("cannot truncate " + journal.string());
    }
    ::fsync(fd);
    result.warnings.push_back("journal truncated to " + std::to_string(keep_bytes) +
                              " bytes (seq " + std::to_string(result.seq) + ")");
  }
  fsync_dir(dir);
  return {Store(dir, fd, result.seq, std::move(hook)), std::move(result)};
}

std::uint64_t Store::append(const std::vector<std::pair<std::string, Json>> &batch) {
  if (batch.empty())
    return seq_;
  const std::uint64_t last = seq_ + batch.size();
  std::string bytes;
  std::uint64_t seq = seq_;
  for (const auto &[kind, payload] : batch) {
    JournalRecord r{++seq, kind, payload};
    if (batch.size() > 1)
      r.payload[std::string(kTxnLastKey)] = last;
    bytes += encode_record(r);
    bytes += '\n';
  }
  write_all(fd_, bytes, "cannot append to journal");
  if (hook_)
    hook_("journal.before_fsync");
  if (::fsync(fd_) != 0)
    throw_errno("cannot fsync journal");
  seq_ = last;
  return seq_;
}

void Store::write_snapshot(const State &s, std::uint64_t as_of_seq) {
  Json doc{{"as_of_seq", as_of_seq}, {"state", state_to_json(s)}};
  write_file_atomic(dir_ / kSnapshotDir / kSnapshotFile, doc.dump() + "\n", hook_,
                    "snapshot.before_rename");
}

}  // namespace avarc::store
