#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "abacus/oracle.hpp"
#include "abacus/random.hpp"
#include "abacus/sample.hpp"
#include "abacus/stream.hpp"

namespace testing {

using namespace abacus;

inline EdgeEvent ins(Ordinal l, Ordinal r, std::uint64_t index = 0) {
  return {{l, r}, Sign::Insert, index};
}
inline EdgeEvent del(Ordinal l, Ordinal r, std::uint64_t index = 0) {
  return {{l, r}, Sign::Delete, index};
}

inline EventStream indexed(EventStream events) {
  for (std::size_t i = 0; i < events.size(); ++i) events[i].index = i + 1;
  return events;
}

inline EventStream complete_bipartite(Ordinal lefts, Ordinal rights) {
  EventStream out;
  for (Ordinal l = 0; l < lefts; ++l)
    for (Ordinal r = 0; r < rights; ++r) out.push_back(ins(l, r));
  return indexed(out);
}

/// Uniform random insert-only stream on a lefts x rights grid, then alpha
/// deletions.
inline EventStream random_stream(std::uint64_t seed, Ordinal lefts,
                                 Ordinal rights, std::uint64_t edges,
                                 double alpha) {
  SyntheticGraphConfig cfg;
  cfg.left_vertices = lefts;
  cfg.right_vertices = rights;
  cfg.edges = edges;
  cfg.seed = seed;
  return generate_dynamic_stream(generate_bipartite_stream(cfg), alpha, seed);
}

/// Random stream whose deletions and re-insertions interleave freely: each
/// step flips a random grid cell.
inline EventStream churn_stream(std::uint64_t seed, Ordinal lefts,
                                Ordinal rights, std::size_t events,
                                double delete_bias = 0.35) {
  Rng rng(seed);
  std::set<std::pair<Ordinal, Ordinal>> live;
  std::vector<std::pair<Ordinal, Ordinal>> live_list;
  EventStream out;
  while (out.size() < events) {
    const bool try_delete = !live.empty() && uniform_unit(rng) < delete_bias;
    if (try_delete) {
      std::vector<std::pair<Ordinal, Ordinal>> pool(live.begin(), live.end());
      const auto pick = pool[uniform_index(rng, pool.size())];
      live.erase(pick);
      out.push_back(del(pick.first, pick.second));
    } else {
      const auto l = static_cast<Ordinal>(uniform_index(rng, lefts));
      const auto r = static_cast<Ordinal>(uniform_index(rng, rights));
      if (!live.insert({l, r}).second) continue;
      out.push_back(ins(l, r));
    }
  }
  return indexed(out);
}

/// Random sample graph with each grid cell present with probability p.
inline SampleGraph random_sample_graph(Rng& rng, Ordinal lefts, Ordinal rights,
                                       double p) {
  SampleGraph g;
  for (Ordinal l = 0; l < lefts; ++l)
    for (Ordinal r = 0; r < rights; ++r)
      if (uniform_unit(rng) < p) g.add({l, r});
  return g;
}

/// Butterflies through e whose other three edges are in g, by checking every
/// (left, right) pair of candidate partners.
inline std::uint64_t brute_force_through(const SampleGraph& g, const Edge& e) {
  std::set<Ordinal> lefts;
  std::set<Ordinal> rights;
  for (const auto& s : g.edges()) {
    lefts.insert(s.left);
    rights.insert(s.right);
  }
  std::uint64_t total = 0;
  for (Ordinal x : lefts) {
    if (x == e.left) continue;
    for (Ordinal w : rights) {
      if (w == e.right) continue;
      if (g.contains({e.left, w}) && g.contains({x, w}) &&
          g.contains({x, e.right}))
        ++total;
    }
  }
  return total;
}

inline oracle::ExactGraph exact_graph_of(std::span<const EdgeEvent> events) {
  return oracle::ExactGraph::from_stream(events);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace testing
