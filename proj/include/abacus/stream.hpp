#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace abacus {

enum class Side : std::uint8_t { Left, Right };

constexpr Side opposite(Side s) noexcept {
  return s == Side::Left ? Side::Right : Side::Left;
}

/// Dense per-side vertex ordinal. Left and right ordinals live in separate
/// namespaces, so (Left, 3) and (Right, 3) are different vertices.
using Ordinal = std::uint32_t;

struct VertexId {
  Side side;
  Ordinal ordinal;

  friend bool operator==(const VertexId&, const VertexId&) = default;
};

/// Undirected bipartite edge, always stored as (left, right).
struct Edge {
  Ordinal left;
  Ordinal right;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;

  std::uint64_t key() const noexcept {
    return (static_cast<std::uint64_t>(left) << 32) | right;
  }
  static Edge from_key(std::uint64_t key) noexcept {
    return {static_cast<Ordinal>(key >> 32), static_cast<Ordinal>(key)};
  }
  VertexId left_vertex() const noexcept { return {Side::Left, left}; }
  VertexId right_vertex() const noexcept { return {Side::Right, right}; }
  /// Endpoint on `s`.
  Ordinal endpoint(Side s) const noexcept {
    return s == Side::Left ? left : right;
  }
};

struct EdgeHash {
  std::size_t operator()(const Edge& e) const noexcept {
    return std::hash<std::uint64_t>{}(e.key());
  }
};

enum class Sign : std::int8_t { Insert = 1, Delete = -1 };

constexpr int sign_value(Sign s) noexcept { return static_cast<int>(s); }

/// One stream element: edge, insert/delete, and its 1-based arrival index.
struct EdgeEvent {
  Edge edge;
  Sign sign = Sign::Insert;
  std::uint64_t index = 0;

  friend bool operator==(const EdgeEvent&, const EdgeEvent&) = default;
};

using EventStream = std::vector<EdgeEvent>;

enum class InputFormat { PlainTsv, Konect, Native };

InputFormat parse_format_name(std::string_view name);

struct ParseWarnings {
  std::uint64_t duplicates = 0;       // insert of an edge that is already live
  std::uint64_t invalid_deletes = 0;  // delete of an edge that is not live
  std::uint64_t malformed = 0;

  std::uint64_t total() const noexcept {
    return duplicates + invalid_deletes + malformed;
  }
};

struct ParseResult {
  EventStream events;
  ParseWarnings warnings;
  /// Original file id of each dense ordinal, per side (empty for Native).
  std::vector<std::uint64_t> left_labels;
  std::vector<std::uint64_t> right_labels;
};

/// Reads an edge list. PlainTsv and Konect ids are remapped to dense
/// per-side ordinals in first-seen order and events are re-indexed 1..N;
/// Native input keeps its ordinals and indices verbatim.
ParseResult parse_edge_list(std::istream& in, InputFormat format);
ParseResult parse_edge_list_file(const std::string& path, InputFormat format);

/// Writes the native "index,left,right,sign" CSV (with header).
void write_native(std::ostream& out, std::span<const EdgeEvent> events);

/// Replays insert/delete validity over the live edge set.
class StreamValidityState {
 public:
  /// Throws StreamInvariantViolation if `event` is not legal here.
  void apply(const EdgeEvent& event);
  bool contains(const Edge& e) const { return live_.contains(e); }
  std::size_t live_edges() const noexcept { return live_.size(); }

 private:
  std::unordered_set<Edge, EdgeHash> live_;
};

void validate_stream(std::span<const EdgeEvent> events);

/// Adds floor(alpha * |base|) deletions of distinct base edges, each placed
/// uniformly at random after its insertion. Deterministic per seed.
EventStream generate_dynamic_stream(std::span<const EdgeEvent> base,
                                    double alpha, std::uint64_t seed);

struct SyntheticGraphConfig {
  Ordinal left_vertices = 100;
  Ordinal right_vertices = 100;
  std::uint64_t edges = 1000;
  /// Zipf exponent for endpoint popularity; 0 gives a uniform random graph.
  double skew = 0.0;
  std::uint64_t seed = 1;
};

/// Insertion-only stream of distinct random bipartite edges in random order.
EventStream generate_bipartite_stream(const SyntheticGraphConfig& config);

/// Largest number of simultaneously live edges over the stream.
std::uint64_t max_live_edges(std::span<const EdgeEvent> events);

}  // namespace abacus
