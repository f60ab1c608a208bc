#include "avarc/engine/engine.hpp"

namespace avarc {

namespace {

std::shared_ptr<const Snapshot> make_snapshot(State state, std::uint64_t seq) {
  auto snap = std::make_shared<Snapshot>();
  snap->seq = seq;
  snap->index = search::SearchIndex(state);
  snap->state = std::move(state);
  return snap;
}

}  // namespace

Engine::Engine(EngineOptions options)
    : options_(std::move(options)), current_(make_snapshot(State{}, 0)) { }

Engine::Engine(const std::filesystem::path &store_dir, EngineOptions options)
    : options_(std::move(options)) {
  auto [store, opened] = store::Store::open(store_dir, options_.fault_hook);
  store_.emplace(std::move(store));
  warnings_ = std::move(opened.warnings);
  snapshot_seq_ = opened.snapshot_seq;
  current_ = make_snapshot(std::move(opened.state), opened.seq);
}

Engine::~Engine() = default;

std::shared_ptr<const Snapshot> Engine::snapshot() const {
  std::lock_guard lock(current_mutex_);
  return current_;
}

void Engine::publish(std::shared_ptr<const Snapshot> next) {
  std::lock_guard lock(current_mutex_);
  current_ = std::move(next);
}

std::vector<std::string> Engine::commit(const std::vector<cmd::Command> &batch) {
  std::lock_guard lock(writer_);
  auto base = snapshot();
  State next = base->state;
  std::vector<std::string> ids;
  std::vector<std::pair<std::string, Json>> records;
  ids.reserve(batch.size());
  for (const auto &c : batch) {
    ids.push_back(cmd::apply(next, c));
    if (store_) {
      Json payload = cmd::payload_of(c);
      payload[std::string(store::kResultKey)] = ids.back();
      records.emplace_back(std::string(cmd::kind_of(c)), std::move(payload));
    }
  }
  std::uint64_t seq = base->seq + batch.size();
  if (store_ && !batch.empty()) {
    if (store_failed_)
      throw Error(Errc::io, "journal is in an unknown state; reopen the store");
    try {
      seq = store_->append(records);
    } catch (...) {
      store_failed_ = true;
      throw;
    }
  }
  publish(make_snapshot(std::move(next), seq));
  return ids;
}

std::string Engine::commit(const cmd::Command &c) {
  return commit(std::vector<cmd::Command>{c}).front();
}

void Engine::write_snapshot() {
  if (!store_)
    throw Error(Errc::validation, "engine has no store to snapshot");
  std::lock_guard lock(writer_);
  auto snap = snapshot();
  store_->write_snapshot(snap->state, snap->seq);
}

bool Engine::rebuild_indexes() {
  std::lock_guard lock(writer_);
  auto snap = snapshot();
  auto rebuilt = make_snapshot(snap->state, snap->seq);
  const bool same = rebuilt->index == snap->index;
  publish(std::move(rebuilt));
  return same;
}

}  // namespace avarc
