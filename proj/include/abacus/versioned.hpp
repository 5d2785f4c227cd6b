#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "abacus/estimator.hpp"
#include "abacus/sample.hpp"
#include "abacus/stream.hpp"

namespace abacus {

/// One neighbor-set change, tagged with the first version that sees it.
struct DeltaEntry {
  Ordinal neighbor;
  std::uint32_t version;
  bool added;
  std::int32_t net;  // degree change through this entry, inclusive
};

class VersionedSample;
class VersionCursor;

/// Read-only overlay of version i: base adjacency plus every delta entry
/// tagged <= i. Safe to share between threads while nothing mutates the
/// owning VersionedSample.
class VersionView {
 public:
  std::span<const Ordinal> neighbors(Side side, Ordinal v,
                                     std::vector<Ordinal>& scratch) const;
  std::size_t degree(Side side, Ordinal v) const;
  std::size_t version() const noexcept { return version_; }

 private:
  friend class VersionedSample;
class VersionCursor;
  VersionView(const VersionedSample* owner, std::size_t version)
      : owner_(owner), version_(version) {}

  const VersionedSample* owner_;
  std::size_t version_;
};

/// Sample versions S_0..S_{M-1} for one mini-batch, stored as the frozen
/// base adjacency plus per-vertex deltas, with the sampler inputs cached
/// for each version.
///
/// build() runs Random Pairing for every batch event in stream order, so the
/// RNG draws match the sequential estimator exactly. Between build() and
/// consolidate() the graph's edge registry is already at the post-batch
/// state while its adjacency still holds S_0; only views and consolidate()
/// may be used in that window.
class VersionedSample {
 public:
  static VersionedSample build(std::span<const EdgeEvent> batch,
                               PairingState& state, SampleGraph& graph);

  std::size_t versions() const noexcept { return triplets_.size(); }
  /// Throws std::out_of_range unless i < versions().
  VersionView view(std::size_t i) const;
  /// Sampler inputs in force when event i of the batch arrived.
  const DiscoveryInputs& triplet(std::size_t i) const { return triplets_.at(i); }

  /// Edges newly stored during the batch.
  std::size_t added_edges() const noexcept { return added_edges_; }
  /// Edges removed from the sample during the batch (deletions, evictions).
  std::size_t removed_edges() const noexcept { return removed_edges_; }

  /// Folds every delta into the graph's adjacency; the graph then equals the
  /// sequential sample after the whole batch. Views must not be used after.
  void consolidate();
  bool consolidated() const noexcept { return consolidated_; }

 private:
  friend class VersionView;
  friend class VersionCursor;
  friend class DeferredStore;

  explicit VersionedSample(SampleGraph& graph) : graph_(&graph) {}
  void record(const Edge& e, bool added, std::uint32_t version);
  /// Entries of `v` visible at `version` (a prefix of its delta list).
  std::span<const DeltaEntry> deltas(Side side, Ordinal v,
                                     std::size_t version) const;

  SampleGraph* graph_;
  std::unordered_map<Ordinal, std::vector<DeltaEntry>> left_deltas_;
  std::unordered_map<Ordinal, std::vector<DeltaEntry>> right_deltas_;
  std::vector<std::pair<Edge, bool>> changes_;
  std::vector<DiscoveryInputs> triplets_;
  std::size_t added_edges_ = 0;
  std::size_t removed_edges_ = 0;
  bool consolidated_ = false;
};

/// Forward-only reader over the versions of one batch. Neighbor lists of
/// vertices with deltas are materialized once and then advanced by the
/// entries between the previous and the current version, so a worker that
/// walks its events in order applies each delta at most once per vertex.
/// One cursor per thread; spans it returns stay valid until the next seek.
class VersionCursor {
 public:
  explicit VersionCursor(const VersionedSample& versions) : owner_(&versions) {}

  /// Moves to version i; throws std::logic_error when i goes backwards.
  void seek(std::size_t i);
  std::size_t version() const noexcept { return version_; }

  std::span<const Ordinal> neighbors(Side side, Ordinal v,
                                     std::vector<Ordinal>& scratch) const;
  std::size_t degree(Side side, Ordinal v) const;

 private:
  struct Materialized {
    std::vector<Ordinal> list;
    std::size_t applied = 0;  // delta entries folded into `list`
  };

  const VersionedSample* owner_;
  std::size_t version_ = 0;
  mutable std::unordered_map<std::uint64_t, Materialized> cache_;
};

}  // namespace abacus
