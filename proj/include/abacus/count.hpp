#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "abacus/intersect.hpp"
#include "abacus/sample.hpp"
#include "abacus/stream.hpp"

namespace abacus {

/// Read-only graph a counting worker can explore. `neighbors` may return a
/// span into `scratch` when the view has to assemble the list.
template <typename V>
concept NeighborView = requires(const V v, Side s, Ordinal o,
                                std::vector<Ordinal>& scratch) {
  { v.neighbors(s, o, scratch) } -> std::convertible_to<std::span<const Ordinal>>;
  { v.degree(s, o) } -> std::convertible_to<std::size_t>;
};

/// Zero-copy view over a live SampleGraph.
class SampleView {
 public:
  explicit SampleView(const SampleGraph& graph) : graph_(&graph) {}
  std::span<const Ordinal> neighbors(Side s, Ordinal v,
                                     std::vector<Ordinal>&) const {
    return graph_->neighbors(s, v);
  }
  std::size_t degree(Side s, Ordinal v) const { return graph_->degree(s, v); }

 private:
  const SampleGraph* graph_;
};

/// ViaV iterates the sample neighbors of the left endpoint u and intersects
/// against v's neighbors; ViaU is the mirror image.
enum class ExploreSide { ViaU, ViaV };

/// Per-thread buffers for the counting kernel.
struct CountScratch {
  std::vector<Ordinal> pivot;
  std::vector<Ordinal> pivot_masked;
  std::vector<Ordinal> other;
  std::vector<Ordinal> other_masked;
  std::vector<Ordinal> wing;
};

namespace detail {

template <NeighborView View>
std::uint64_t cumulative_degree(const View& g, Side side, Ordinal v,
                                std::vector<Ordinal>& scratch) {
  std::uint64_t sum = 0;
  for (Ordinal x : g.neighbors(side, v, scratch)) sum += g.degree(opposite(side), x);
  return sum;
}

inline std::span<const Ordinal> without(std::span<const Ordinal> list,
                                        Ordinal excluded,
                                        std::vector<Ordinal>& buffer) {
  auto it = std::lower_bound(list.begin(), list.end(), excluded);
  if (it == list.end() || *it != excluded) return list;
  buffer.assign(list.begin(), it);
  buffer.insert(buffer.end(), it + 1, list.end());
  return buffer;
}

}  // namespace detail

/// Picks the endpoint whose sample neighbors have the smaller cumulative
/// sample degree; ties explore via u.
template <NeighborView View>
ExploreSide choose_side(const View& g, const Edge& e, CountScratch& scratch) {
  const auto via_u_cost =
      detail::cumulative_degree(g, Side::Left, e.left, scratch.pivot);
  const auto via_v_cost =
      detail::cumulative_degree(g, Side::Right, e.right, scratch.other);
  return via_u_cost < via_v_cost ? ExploreSide::ViaV : ExploreSide::ViaU;
}

/// Number of butterflies {u, v, w, x} whose three edges other than `e` are
/// all in the view. `e` itself is masked out of both endpoint lists, so a
/// stored copy of a deleted edge never participates.
template <NeighborView View>
std::uint64_t count_butterflies(const View& g, const Edge& e, ExploreSide side,
                                CountScratch& scratch,
                                std::uint64_t& comparisons) {
  const Side pivot_side = side == ExploreSide::ViaV ? Side::Left : Side::Right;
  const Side other_side = opposite(pivot_side);
  const Ordinal pivot = e.endpoint(pivot_side);
  const Ordinal other = e.endpoint(other_side);

  auto pivot_nbrs = detail::without(
      g.neighbors(pivot_side, pivot, scratch.pivot), other, scratch.pivot_masked);
  if (pivot_nbrs.empty()) return 0;
  auto other_nbrs = detail::without(
      g.neighbors(other_side, other, scratch.other), pivot, scratch.other_masked);
  if (other_nbrs.empty()) return 0;

  std::uint64_t found = 0;
  for (Ordinal w : pivot_nbrs) {
    // w sits on other_side; its neighbors share pivot_side with other_nbrs.
    found += intersect_count(g.neighbors(other_side, w, scratch.wing),
                             other_nbrs, comparisons);
  }
  return found;
}

template <NeighborView View>
std::uint64_t count_butterflies(const View& g, const Edge& e,
                                CountScratch& scratch,
                                std::uint64_t& comparisons) {
  return count_butterflies(g, e, choose_side(g, e, scratch), scratch,
                           comparisons);
}

}  // namespace abacus
