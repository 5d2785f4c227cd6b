#pragma once

#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "abacus/random.hpp"
#include "abacus/stream.hpp"

namespace abacus {

/// Flat edge array with O(1) membership, uniform indexing and swap-remove.
class EdgeRegistry {
 public:
  std::size_t size() const noexcept { return edges_.size(); }
  bool contains(const Edge& e) const { return position_.contains(e.key()); }
  const Edge& at(std::size_t i) const { return edges_[i]; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  void add(const Edge& e);
  /// Moves the last edge into the removed slot.
  void remove(const Edge& e);

  friend bool operator==(const EdgeRegistry& a, const EdgeRegistry& b) {
    return a.edges_ == b.edges_;
  }

 private:
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> position_;
};

/// Sorted, duplicate-free neighbor lists for both sides. A vertex whose last
/// edge is removed disappears from the table.
class Adjacency {
 public:
  void link(const Edge& e);
  void unlink(const Edge& e);

  std::span<const Ordinal> neighbors(Side side, Ordinal v) const;
  std::size_t degree(Side side, Ordinal v) const {
    return neighbors(side, v).size();
  }
  std::size_t vertex_count(Side side) const {
    return table(side).size();
  }

  friend bool operator==(const Adjacency&, const Adjacency&) = default;

 private:
  using Table = std::unordered_map<Ordinal, std::vector<Ordinal>>;
  const Table& table(Side s) const { return s == Side::Left ? left_ : right_; }
  Table& table(Side s) { return s == Side::Left ? left_ : right_; }

  Table left_;
  Table right_;
};

/// The bounded edge sample S: an edge registry plus symmetric adjacency.
class SampleGraph {
 public:
  std::size_t size() const noexcept { return registry_.size(); }
  bool contains(const Edge& e) const { return registry_.contains(e); }
  const Edge& edge_at(std::size_t i) const { return registry_.at(i); }
  /// Edges in registry order (the order eviction indices refer to).
  std::span<const Edge> edges() const noexcept { return registry_.edges(); }

  void add(const Edge& e) {
    registry_.add(e);
    adjacency_.link(e);
  }
  void remove(const Edge& e) {
    registry_.remove(e);
    adjacency_.unlink(e);
  }

  std::span<const Ordinal> neighbors(Side side, Ordinal v) const {
    return adjacency_.neighbors(side, v);
  }
  std::size_t degree(Side side, Ordinal v) const {
    return adjacency_.degree(side, v);
  }
  std::size_t vertex_count(Side side) const {
    return adjacency_.vertex_count(side);
  }

  friend bool operator==(const SampleGraph&, const SampleGraph&) = default;

 private:
  friend class VersionedSample;
  friend class VersionView;
  friend class VersionCursor;

  EdgeRegistry registry_;
  Adjacency adjacency_;
};

/// Random Pairing bookkeeping. The single RNG serves both acceptance and
/// eviction draws, in event order.
struct PairingState {
  PairingState(std::uint64_t budget, std::uint64_t seed);

  std::uint64_t live_edges = 0;  // |E|
  std::uint64_t c_bad = 0;       // deletions that hit the sample
  std::uint64_t c_good = 0;      // deletions outside the sample
  std::uint64_t budget;          // k
  Rng rng;

  std::uint64_t pending() const noexcept { return c_bad + c_good; }

  friend bool operator==(const PairingState&, const PairingState&) = default;
};

/// What the sampler needs from a sample store.
template <typename S>
concept SampleStore = requires(S s, const S cs, const Edge& e, std::size_t i) {
  { cs.size() } -> std::convertible_to<std::size_t>;
  { cs.contains(e) } -> std::convertible_to<bool>;
  { cs.edge_at(i) } -> std::convertible_to<Edge>;
  s.add(e);
  s.remove(e);
};

struct InsertOutcome {
  enum class Kind { Added, ReplacedExisting, Skipped };
  Kind kind;
  Edge evicted{};  // valid for ReplacedExisting
};

enum class DeleteOutcome { RemovedFromSample, NotInSample };

template <SampleStore Store>
InsertOutcome insert_to_sample(PairingState& state, Store& sample,
                               const Edge& edge) {
  ++state.live_edges;
  if (state.pending() == 0) {
    if (sample.size() < state.budget) {
      sample.add(edge);
      return {InsertOutcome::Kind::Added};
    }
    if (bernoulli(state.rng, state.budget, state.live_edges)) {
      const Edge evicted = sample.edge_at(
          static_cast<std::size_t>(uniform_index(state.rng, sample.size())));
      sample.remove(evicted);
      sample.add(edge);
      return {InsertOutcome::Kind::ReplacedExisting, evicted};
    }
    return {InsertOutcome::Kind::Skipped};
  }
  if (bernoulli(state.rng, state.c_bad, state.pending())) {
    sample.add(edge);
    --state.c_bad;
    return {InsertOutcome::Kind::Added};
  }
  --state.c_good;
  return {InsertOutcome::Kind::Skipped};
}

template <SampleStore Store>
DeleteOutcome delete_from_sample(PairingState& state, Store& sample,
                                 const Edge& edge) {
  --state.live_edges;
  if (sample.contains(edge)) {
    sample.remove(edge);
    ++state.c_bad;
    return DeleteOutcome::RemovedFromSample;
  }
  ++state.c_good;
  return DeleteOutcome::NotInSample;
}

/// Sorted sample neighbors of `v`; empty for unknown vertices.
inline std::span<const Ordinal> neighbors_in_sample(const SampleGraph& graph,
                                                    VertexId v) {
  return graph.neighbors(v.side, v.ordinal);
}

/// Checkpoint of (S, PairingState) as CSV sections. Edges are written in
/// registry order and the RNG state is included, so a reload continues the
/// run draw-for-draw.
void write_snapshot(std::ostream& out, const PairingState& state,
                    const SampleGraph& graph);
std::pair<PairingState, SampleGraph> read_snapshot(std::istream& in);

}  // namespace abacus
