#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "abacus/stream.hpp"

namespace abacus::oracle {

/// The full current graph, no sampling.
class ExactGraph {
 public:
  static ExactGraph from_stream(std::span<const EdgeEvent> events);

  /// False when the edge is already present (insert) or absent (erase).
  bool insert(const Edge& e);
  bool erase(const Edge& e);
  bool contains(const Edge& e) const { return edges_.contains(e.key()); }

  std::span<const Ordinal> neighbors(Side side, Ordinal v) const;
  std::size_t edge_count() const noexcept { return edges_.size(); }
  std::vector<Ordinal> vertices(Side side) const;

 private:
  using Table = std::unordered_map<Ordinal, std::vector<Ordinal>>;
  Table left_;
  Table right_;
  std::unordered_set<std::uint64_t> edges_;
};

/// Butterfly count by wedge accumulation: for every same-side vertex pair
/// reached through a shared neighbor, add C(common, 2).
std::uint64_t exact_butterfly_count(const ExactGraph& g);

/// Enumerates every (left pair, right pair) and checks all four edges.
/// Quartic; tests and tiny graphs only.
std::uint64_t naive_butterfly_count(const ExactGraph& g);

/// Butterflies that contain `e`, counted in g + e (e itself is ignored if
/// present). Uses hash membership probes, not sorted intersections.
std::uint64_t butterflies_through(const ExactGraph& g, const Edge& e);

/// |B(t)| after every event, maintained incrementally.
std::vector<std::uint64_t> exact_count_stream(std::span<const EdgeEvent> events);

/// Unordered butterfly pairs by number of shared edges.
struct OverlapCensus {
  std::uint64_t y1 = 0;  // share no edge
  std::uint64_t y2 = 0;  // share one edge
  std::uint64_t y3 = 0;  // share two edges

  friend bool operator==(const OverlapCensus&, const OverlapCensus&) = default;
};

/// A butterfly as its two left and two right vertices, each pair sorted.
struct Butterfly {
  Ordinal left[2];
  Ordinal right[2];
};

std::vector<Butterfly> enumerate_butterflies(const ExactGraph& g,
                                             std::size_t limit);

/// Enumerates all butterflies and classifies each pair. Throws
/// CensusOverflow when there are more than `max_butterflies`.
OverlapCensus overlap_census(const ExactGraph& g,
                             std::size_t max_butterflies = 20000);

/// C(E - j, k - j) / C(E, k): probability that j given edges all sit in a
/// uniform k-subset of E edges. Zero when j > k.
double survival_ratio(std::uint64_t live_edges, std::uint64_t budget,
                      unsigned j);

struct VarianceClosedForm {
  double gamma;           // C(E, k) / C(E - 4, k - 4)
  double exact_variance;  // uses the census
  double upper_bound;     // replaces the census by C(B, 2) pairs of the
                          // two-shared-edge kind
};

/// Variance of the extrapolated full-sample count for a k-edge uniform
/// sample of `live_edges` edges. Needs k >= 4 and live_edges >= k.
VarianceClosedForm variance_closed_form(const OverlapCensus& census,
                                        std::uint64_t butterflies,
                                        std::uint64_t live_edges,
                                        std::uint64_t budget);

}  // namespace abacus::oracle
