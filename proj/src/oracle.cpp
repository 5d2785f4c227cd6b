#include "abacus/oracle.hpp"

#include <algorithm>
#include <string>

#include "abacus/errors.hpp"

namespace abacus::oracle {

namespace {

void insert_sorted(std::vector<Ordinal>& list, Ordinal x) {
  list.insert(std::lower_bound(list.begin(), list.end(), x), x);
}

void erase_sorted(std::unordered_map<Ordinal, std::vector<Ordinal>>& table,
                  Ordinal owner, Ordinal x) {
  auto it = table.find(owner);
  auto& list = it->second;
  list.erase(std::lower_bound(list.begin(), list.end(), x));
  if (list.empty()) table.erase(it);
}

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

// Dense CSR copy of one side's adjacency, for the wedge loops.
struct Csr {
  std::vector<Ordinal> start_ids;        // ordinal of each dense start vertex
  std::vector<std::size_t> offsets;      // into middle
  std::vector<std::uint32_t> middle;     // dense ids of the other side
  std::vector<std::size_t> mid_offsets;  // middle vertex -> its start list
  std::vector<std::uint32_t> mid_adj;    // dense start ids
};

Csr build_csr(const ExactGraph& g, Side start) {
  Csr csr;
  csr.start_ids = g.vertices(start);
  const auto mids = g.vertices(opposite(start));
  std::unordered_map<Ordinal, std::uint32_t> start_index;
  std::unordered_map<Ordinal, std::uint32_t> mid_index;
  for (std::uint32_t i = 0; i < csr.start_ids.size(); ++i)
    start_index[csr.start_ids[i]] = i;
  for (std::uint32_t i = 0; i < mids.size(); ++i) mid_index[mids[i]] = i;

  csr.offsets.push_back(0);
  for (Ordinal s : csr.start_ids) {
    for (Ordinal m : g.neighbors(start, s)) csr.middle.push_back(mid_index[m]);
    csr.offsets.push_back(csr.middle.size());
  }
  csr.mid_offsets.push_back(0);
  for (Ordinal m : mids) {
    for (Ordinal s : g.neighbors(opposite(start), m))
      csr.mid_adj.push_back(start_index[s]);
    csr.mid_offsets.push_back(csr.mid_adj.size());
  }
  return csr;
}

}  // namespace

ExactGraph ExactGraph::from_stream(std::span<const EdgeEvent> events) {
  ExactGraph g;
  for (const auto& ev : events) {
    const bool ok =
        ev.sign == Sign::Insert ? g.insert(ev.edge) : g.erase(ev.edge);
    if (!ok)
      throw StreamInvariantViolation(ev.index, "oracle replay rejected event");
  }
  return g;
}

bool ExactGraph::insert(const Edge& e) {
  if (!edges_.insert(e.key()).second) return false;
  insert_sorted(left_[e.left], e.right);
  insert_sorted(right_[e.right], e.left);
  return true;
}

bool ExactGraph::erase(const Edge& e) {
  if (edges_.erase(e.key()) == 0) return false;
  erase_sorted(left_, e.left, e.right);
  erase_sorted(right_, e.right, e.left);
  return true;
}

std::span<const Ordinal> ExactGraph::neighbors(Side side, Ordinal v) const {
  const auto& table = side == Side::Left ? left_ : right_;
  auto it = table.find(v);
  if (it == table.end()) return {};
  return it->second;
}

std::vector<Ordinal> ExactGraph::vertices(Side side) const {
  const auto& table = side == Side::Left ? left_ : right_;
  std::vector<Ordinal> out;
  out.reserve(table.size());
  for (const auto& [v, nbrs] : table) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t exact_butterfly_count(const ExactGraph& g) {
  // Walking start -> middle -> start costs sum over middles of deg^2, so
  // start on the side whose opposite has the smaller squared degrees.
  auto squared_degrees = [&](Side side) {
    std::uint64_t sum = 0;
    for (Ordinal v : g.vertices(side)) {
      const std::uint64_t d = g.neighbors(side, v).size();
      sum += d * d;
    }
    return sum;
  };
  const Side start = squared_degrees(Side::Left) <= squared_degrees(Side::Right)
                         ? Side::Right
                         : Side::Left;
  const Csr csr = build_csr(g, start);
  const std::size_t n = csr.start_ids.size();

  std::vector<std::uint32_t> common(n, 0);
  std::vector<std::uint32_t> touched;
  std::uint64_t total = 0;
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::size_t a = csr.offsets[s]; a < csr.offsets[s + 1]; ++a) {
      const std::uint32_t m = csr.middle[a];
      for (std::size_t b = csr.mid_offsets[m]; b < csr.mid_offsets[m + 1]; ++b) {
        const std::uint32_t s2 = csr.mid_adj[b];
        if (s2 <= s) continue;
        if (common[s2]++ == 0) touched.push_back(s2);
      }
    }
    for (std::uint32_t s2 : touched) {
      total += choose2(common[s2]);
      common[s2] = 0;
    }
    touched.clear();
  }
  return total;
}

std::uint64_t naive_butterfly_count(const ExactGraph& g) {
  const auto lefts = g.vertices(Side::Left);
  const auto rights = g.vertices(Side::Right);
  std::uint64_t total = 0;
  for (std::size_t a = 0; a < lefts.size(); ++a)
    for (std::size_t b = a + 1; b < lefts.size(); ++b)
      for (std::size_t c = 0; c < rights.size(); ++c)
        for (std::size_t d = c + 1; d < rights.size(); ++d)
          if (g.contains({lefts[a], rights[c]}) &&
              g.contains({lefts[a], rights[d]}) &&
              g.contains({lefts[b], rights[c]}) &&
              g.contains({lefts[b], rights[d]}))
            ++total;
  return total;
}

std::uint64_t butterflies_through(const ExactGraph& g, const Edge& e) {
  std::uint64_t total = 0;
  for (Ordinal w : g.neighbors(Side::Left, e.left)) {
    if (w == e.right) continue;
    for (Ordinal x : g.neighbors(Side::Right, w)) {
      if (x == e.left) continue;
      if (g.contains({x, e.right})) ++total;
    }
  }
  return total;
}

std::vector<std::uint64_t> exact_count_stream(
    std::span<const EdgeEvent> events) {
  ExactGraph g;
  std::vector<std::uint64_t> counts;
  counts.reserve(events.size());
  std::uint64_t current = 0;
  for (const auto& ev : events) {
    if (ev.sign == Sign::Insert) {
      if (g.contains(ev.edge))
        throw StreamInvariantViolation(ev.index, "insert of a live edge");
      current += butterflies_through(g, ev.edge);
      g.insert(ev.edge);
    } else {
      if (!g.erase(ev.edge))
        throw StreamInvariantViolation(ev.index, "delete of an absent edge");
      current -= butterflies_through(g, ev.edge);
    }
    counts.push_back(current);
  }
  return counts;
}

std::vector<Butterfly> enumerate_butterflies(const ExactGraph& g,
                                             std::size_t limit) {
  std::vector<Butterfly> out;
  std::unordered_map<Ordinal, std::vector<Ordinal>> common;
  for (Ordinal l1 : g.vertices(Side::Left)) {
    common.clear();
    for (Ordinal r : g.neighbors(Side::Left, l1))
      for (Ordinal l2 : g.neighbors(Side::Right, r))
        if (l2 > l1) common[l2].push_back(r);
    for (auto& [l2, rs] : common) {
      std::sort(rs.begin(), rs.end());
      for (std::size_t a = 0; a < rs.size(); ++a)
        for (std::size_t b = a + 1; b < rs.size(); ++b) {
          if (out.size() == limit)
            throw CensusOverflow("more than " + std::to_string(limit) +
                                 " butterflies to enumerate");
          out.push_back({{l1, l2}, {rs[a], rs[b]}});
        }
    }
  }
  return out;
}

OverlapCensus overlap_census(const ExactGraph& g, std::size_t max_butterflies) {
  const auto all = enumerate_butterflies(g, max_butterflies);
  auto shared = [](const Ordinal* a, const Ordinal* b) {
    return static_cast<int>(a[0] == b[0]) + (a[0] == b[1]) + (a[1] == b[0]) +
           (a[1] == b[1]);
  };
  OverlapCensus census;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      // Butterfly edges are left x right, so shared edges = shared lefts *
      // shared rights.
      const int edges = shared(all[i].left, all[j].left) *
                        shared(all[i].right, all[j].right);
      switch (edges) {
        case 0: ++census.y1; break;
        case 1: ++census.y2; break;
        case 2: ++census.y3; break;
        default: throw Error("distinct butterflies share more than two edges");
      }
    }
  }
  return census;
}

double survival_ratio(std::uint64_t live_edges, std::uint64_t budget,
                      unsigned j) {
  if (j > budget) return 0.0;
  double ratio = 1.0;
  for (unsigned i = 0; i < j; ++i)
    ratio *= static_cast<double>(budget - i) /
             static_cast<double>(live_edges - i);
  return ratio;
}

VarianceClosedForm variance_closed_form(const OverlapCensus& census,
                                        std::uint64_t butterflies,
                                        std::uint64_t live_edges,
                                        std::uint64_t budget) {
  if (budget < 4) throw ConfigError("variance closed form needs k >= 4");
  if (live_edges < budget)
    throw ConfigError("variance closed form needs |E| >= k");
  const double b = static_cast<double>(butterflies);
  const double gamma = 1.0 / survival_ratio(live_edges, budget, 4);
  const double pair_mass =
      static_cast<double>(census.y1) * survival_ratio(live_edges, budget, 8) +
      static_cast<double>(census.y2) * survival_ratio(live_edges, budget, 7) +
      static_cast<double>(census.y3) * survival_ratio(live_edges, budget, 6);
  const double all_pairs = b * (b - 1.0) / 2.0;
  VarianceClosedForm out;
  out.gamma = gamma;
  out.exact_variance = gamma * b - b * b + 2.0 * gamma * gamma * pair_mass;
  out.upper_bound = gamma * b +
                    2.0 * gamma * gamma * all_pairs *
                        survival_ratio(live_edges, budget, 6) -
                    b * b;
  return out;
}

}  // namespace abacus::oracle
