#include <doctest.h>

#include "abacus/errors.hpp"
#include "abacus/oracle.hpp"
#include "support.hpp"

using namespace abacus;
using namespace abacus::oracle;
using testing::del;
using testing::ins;

namespace {

ExactGraph graph_of(std::initializer_list<Edge> edges) {
  ExactGraph g;
  for (const auto& e : edges) g.insert(e);
  return g;
}

ExactGraph complete(Ordinal lefts, Ordinal rights, Ordinal left0 = 0, Ordinal right0 = 0) {
  ExactGraph g;
  for (Ordinal l = 0; l < lefts; ++l)
    for (Ordinal r = 0; r < rights; ++r) g.insert({left0 + l, right0 + r});
  return g;
}

ExactGraph random_graph(Rng& rng, Ordinal lefts, Ordinal rights, double p) {
  ExactGraph g;
  for (Ordinal l = 0; l < lefts; ++l)
    for (Ordinal r = 0; r < rights; ++r)
      if (uniform_unit(rng) < p) g.insert({l, r});
  return g;
}

std::uint64_t choose2(std::uint64_t n) { return n * (n - 1) / 2; }

}  // namespace

TEST_CASE("exact count examples") {
  CHECK(exact_butterfly_count(complete(2, 2)) == 1);
  CHECK(exact_butterfly_count(complete(2, 3)) == 3);
  CHECK(exact_butterfly_count(graph_of({{0, 0}, {1, 0}, {1, 1}})) == 0);
  CHECK(exact_butterfly_count(ExactGraph{}) == 0);
  CHECK(exact_butterfly_count(complete(4, 5)) == choose2(4) * choose2(5));
  CHECK(naive_butterfly_count(complete(3, 4)) == 18);
}

TEST_CASE("property: wedge count equals naive enumeration") {
  Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    const auto lefts = static_cast<Ordinal>(1 + uniform_index(rng, 15));
    const auto rights = static_cast<Ordinal>(1 + uniform_index(rng, 30 - lefts));
    const auto g = random_graph(rng, lefts, rights, uniform_unit(rng));
    CHECK(exact_butterfly_count(g) == naive_butterfly_count(g));
  }
}

TEST_CASE("ExactGraph bookkeeping") {
  ExactGraph g;
  CHECK(g.insert({1, 2}));
  CHECK_FALSE(g.insert({1, 2}));
  CHECK(g.contains({1, 2}));
  CHECK(g.erase({1, 2}));
  CHECK_FALSE(g.erase({1, 2}));
  CHECK(g.vertices(Side::Left).empty());
  CHECK(g.edge_count() == 0);
  CHECK_THROWS_AS(ExactGraph::from_stream(testing::indexed({del(0, 0)})),
                  StreamInvariantViolation);
}

TEST_CASE("butterflies_through") {
  const auto g = complete(2, 3);
  CHECK(butterflies_through(g, {0, 0}) == 2);
  ExactGraph minus = complete(2, 3);
  minus.erase({0, 0});
  CHECK(butterflies_through(minus, {0, 0}) == 2);
  CHECK(butterflies_through(ExactGraph{}, {0, 0}) == 0);
}

TEST_CASE("exact_count_stream examples") {
  const auto k22 = testing::complete_bipartite(2, 2);
  CHECK(exact_count_stream(k22) == std::vector<std::uint64_t>{0, 0, 0, 1});
  auto with_delete = k22;
  with_delete.push_back(del(1, 0, 5));
  CHECK(exact_count_stream(with_delete).back() == 0);
  CHECK_THROWS_AS(exact_count_stream(testing::indexed({ins(0, 0), ins(0, 0)})),
                  StreamInvariantViolation);
}

TEST_CASE("property: incremental prefix counts match recounts") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto events = testing::churn_stream(seed, 12, 12, 500);
    const auto prefix = exact_count_stream(events);
    for (std::size_t c = 1; c <= 10; ++c) {
      const std::size_t n = events.size() * c / 10;
      const auto g = ExactGraph::from_stream(std::span(events).first(n));
      CHECK(prefix[n - 1] == exact_butterfly_count(g));
    }
  }
}

TEST_CASE("census examples") {
  CHECK(overlap_census(complete(2, 3)) == OverlapCensus{0, 0, 3});
  auto two = complete(2, 2);
  two.insert({10, 10});
  two.insert({10, 11});
  two.insert({11, 10});
  two.insert({11, 11});
  CHECK(overlap_census(two) == OverlapCensus{1, 0, 0});
  CHECK(overlap_census(complete(2, 2)) == OverlapCensus{0, 0, 0});
  // K_{3,3}: 9 butterflies; pairs sharing one edge need one shared left and
  // one shared right vertex.
  const auto k33 = overlap_census(complete(3, 3));
  CHECK(k33.y1 + k33.y2 + k33.y3 == choose2(9));
  CHECK(k33 == OverlapCensus{0, 18, 18});
}

TEST_CASE("property: census partitions all butterfly pairs") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_graph(rng, 8, 8, 0.5);
    const auto b = exact_butterfly_count(g);
    const auto c = overlap_census(g);
    CHECK(c.y1 + c.y2 + c.y3 == choose2(b));
    CHECK(enumerate_butterflies(g, 1 << 20).size() == b);
  }
}

TEST_CASE("census overflow") {
  CHECK_THROWS_AS(overlap_census(complete(6, 6), 100), CensusOverflow);
}

TEST_CASE("survival ratio") {
  CHECK(survival_ratio(10, 5, 3) == doctest::Approx(1.0 / 12.0));
  CHECK(survival_ratio(10, 10, 4) == 1.0);
  CHECK(survival_ratio(10, 5, 6) == 0.0);
  CHECK(survival_ratio(10, 5, 0) == 1.0);
}

TEST_CASE("variance closed form examples") {
  const auto k23 = variance_closed_form({0, 0, 3}, 3, 6, 6);
  CHECK(k23.gamma == 1.0);
  CHECK(k23.upper_bound == 0.0);
  CHECK(k23.exact_variance == 0.0);

  const auto none = variance_closed_form({0, 0, 0}, 0, 100, 10);
  CHECK(none.exact_variance == 0.0);
  CHECK(none.upper_bound == 0.0);

  CHECK_THROWS_AS(variance_closed_form({}, 0, 10, 3), ConfigError);
  CHECK_THROWS_AS(variance_closed_form({}, 0, 5, 6), ConfigError);
}

TEST_CASE("property: exact variance sits below the bound") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = random_graph(rng, 7, 7, 0.6);
    const auto b = exact_butterfly_count(g);
    const auto e = g.edge_count();
    if (e < 5) continue;
    const auto k = 4 + uniform_index(rng, e - 4);
    const auto v = variance_closed_form(overlap_census(g), b, e, k);
    CHECK(v.exact_variance >= -1e-6 * (1.0 + v.upper_bound));
    CHECK(v.exact_variance <= v.upper_bound * (1 + 1e-12) + 1e-9);
  }
}

TEST_CASE("closed form matches the variance of a static uniform sample") {
  // Var of gamma * (butterflies inside a uniform k-subset), by enumerating
  // every k-subset of a small graph.
  const auto g = complete(2, 3);  // 6 edges, 3 butterflies
  auto extra = g;
  extra.insert({2, 0});
  extra.insert({2, 1});
  std::vector<Edge> edges;
  for (Ordinal l : extra.vertices(Side::Left))
    for (Ordinal r : extra.neighbors(Side::Left, l)) edges.push_back({l, r});
  const std::size_t e = edges.size();
  const std::size_t k = 5;
  const auto bfs = enumerate_butterflies(extra, 1000);
  const double gamma = 1.0 / survival_ratio(e, k, 4);
  double sum = 0, sum2 = 0, subsets = 0;
  for (unsigned mask = 0; mask < (1u << e); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    ExactGraph s;
    for (std::size_t i = 0; i < e; ++i)
      if (mask & (1u << i)) s.insert(edges[i]);
    const double c = gamma * static_cast<double>(exact_butterfly_count(s));
    sum += c;
    sum2 += c * c;
    subsets += 1;
  }
  const double mean = sum / subsets;
  const double var = sum2 / subsets - mean * mean;
  const auto b = exact_butterfly_count(extra);
  CHECK(mean == doctest::Approx(static_cast<double>(b)));
  const auto v = variance_closed_form(overlap_census(extra), b, e, k);
  CHECK(var == doctest::Approx(v.exact_variance));
  CHECK(bfs.size() == b);
}
