#include "abacus/versioned.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace abacus {

/// Sample store handed to the sampler during build(): registry changes are
/// applied immediately, adjacency changes only recorded as deltas.
class DeferredStore {
 public:
  DeferredStore(VersionedSample& owner, EdgeRegistry& registry)
      : owner_(owner), registry_(registry) {}

  std::size_t size() const { return registry_.size(); }
  bool contains(const Edge& e) const { return registry_.contains(e); }
  Edge edge_at(std::size_t i) const { return registry_.at(i); }
  void add(const Edge& e) {
    registry_.add(e);
    owner_.record(e, true, version_);
  }
  void remove(const Edge& e) {
    registry_.remove(e);
    owner_.record(e, false, version_);
  }
  void set_version(std::uint32_t v) { version_ = v; }

 private:
  VersionedSample& owner_;
  EdgeRegistry& registry_;
  std::uint32_t version_ = 0;
};

VersionedSample VersionedSample::build(std::span<const EdgeEvent> batch,
                                       PairingState& state,
                                       SampleGraph& graph) {
  VersionedSample vs(graph);
  vs.triplets_.reserve(batch.size());
  DeferredStore store(vs, graph.registry_);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    vs.triplets_.push_back(DiscoveryInputs::from(state));
    // Changes made by event i become visible from version i + 1.
    store.set_version(static_cast<std::uint32_t>(i + 1));
    const auto& ev = batch[i];
    if (ev.sign == Sign::Insert)
      insert_to_sample(state, store, ev.edge);
    else
      delete_from_sample(state, store, ev.edge);
  }
  return vs;
}

void VersionedSample::record(const Edge& e, bool added, std::uint32_t version) {
  auto push = [&](std::vector<DeltaEntry>& list, Ordinal neighbor) {
    const std::int32_t prior = list.empty() ? 0 : list.back().net;
    list.push_back({neighbor, version, added, prior + (added ? 1 : -1)});
  };
  push(left_deltas_[e.left], e.right);
  push(right_deltas_[e.right], e.left);
  changes_.emplace_back(e, added);
  ++(added ? added_edges_ : removed_edges_);
}

std::span<const DeltaEntry> VersionedSample::deltas(Side side, Ordinal v,
                                                    std::size_t version) const {
  const auto& table = side == Side::Left ? left_deltas_ : right_deltas_;
  auto it = table.find(v);
  if (it == table.end()) return {};
  const auto& list = it->second;
  auto cut = std::upper_bound(
      list.begin(), list.end(), version,
      [](std::size_t ver, const DeltaEntry& d) { return ver < d.version; });
  return {list.data(), static_cast<std::size_t>(cut - list.begin())};
}

VersionView VersionedSample::view(std::size_t i) const {
  if (i >= versions())
    throw std::out_of_range("sample version " + std::to_string(i) +
                            " out of range (batch has " +
                            std::to_string(versions()) + ")");
  if (consolidated_)
    throw std::logic_error("versioned sample already consolidated");
  return VersionView(this, i);
}

void VersionedSample::consolidate() {
  if (consolidated_) return;
  for (const auto& [edge, added] : changes_) {
    if (added)
      graph_->adjacency_.link(edge);
    else
      graph_->adjacency_.unlink(edge);
  }
  consolidated_ = true;
}

std::span<const Ordinal> VersionView::neighbors(
    Side side, Ordinal v, std::vector<Ordinal>& scratch) const {
  const auto base = owner_->graph_->adjacency_.neighbors(side, v);
  const auto deltas = owner_->deltas(side, v, version_);
  if (deltas.empty()) return base;

  // Net change per neighbor: the last visible entry decides.
  thread_local std::vector<std::pair<Ordinal, bool>> net;
  net.clear();
  for (const auto& d : deltas) net.emplace_back(d.neighbor, d.added);
  std::stable_sort(net.begin(), net.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  scratch.clear();
  scratch.reserve(base.size() + net.size());
  auto b = base.begin();
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (i + 1 < net.size() && net[i + 1].first == net[i].first) continue;
    const auto [x, present] = net[i];
    while (b != base.end() && *b < x) scratch.push_back(*b++);
    if (b != base.end() && *b == x) ++b;
    if (present) scratch.push_back(x);
  }
  scratch.insert(scratch.end(), b, base.end());
  return scratch;
}

std::size_t VersionView::degree(Side side, Ordinal v) const {
  const std::size_t degree = owner_->graph_->adjacency_.degree(side, v);
  const auto deltas = owner_->deltas(side, v, version_);
  if (deltas.empty()) return degree;
  return static_cast<std::size_t>(static_cast<std::int64_t>(degree) +
                                  deltas.back().net);
}

void VersionCursor::seek(std::size_t i) {
  if (i >= owner_->versions())
    throw std::out_of_range("sample version " + std::to_string(i) +
                            " out of range");
  if (i < version_) throw std::logic_error("version cursor moved backwards");
  if (owner_->consolidated_)
    throw std::logic_error("versioned sample already consolidated");
  version_ = i;
}

std::span<const Ordinal> VersionCursor::neighbors(
    Side side, Ordinal v, std::vector<Ordinal>&) const {
  const auto base = owner_->graph_->adjacency_.neighbors(side, v);
  const auto deltas = owner_->deltas(side, v, version_);
  if (deltas.empty()) return base;

  const std::uint64_t key =
      (static_cast<std::uint64_t>(side == Side::Right) << 32) | v;
  auto [it, fresh] = cache_.try_emplace(key);
  auto& m = it->second;
  if (fresh) m.list.assign(base.begin(), base.end());
  for (; m.applied < deltas.size(); ++m.applied) {
    const auto& d = deltas[m.applied];
    auto pos = std::lower_bound(m.list.begin(), m.list.end(), d.neighbor);
    if (d.added)
      m.list.insert(pos, d.neighbor);
    else
      m.list.erase(pos);
  }
  return m.list;
}

std::size_t VersionCursor::degree(Side side, Ordinal v) const {
  const std::size_t degree = owner_->graph_->adjacency_.degree(side, v);
  const auto deltas = owner_->deltas(side, v, version_);
  if (deltas.empty()) return degree;
  return static_cast<std::size_t>(static_cast<std::int64_t>(degree) +
                                  deltas.back().net);
}

}  // namespace abacus
