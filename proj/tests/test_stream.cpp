#include <doctest.h>

#include <array>
#include <cmath>
#include <sstream>

#include "abacus/errors.hpp"
#include "abacus/stream.hpp"
#include "support.hpp"

using namespace abacus;
using testing::del;
using testing::ins;

namespace {

ParseResult parse(const std::string& text, InputFormat fmt) {
  std::istringstream in(text);
  return parse_edge_list(in, fmt);
}

}  // namespace

TEST_CASE("vertex ids are namespaced per side") {
  const VertexId l3{Side::Left, 3};
  const VertexId r3{Side::Right, 3};
  CHECK(l3 != r3);
  CHECK(opposite(Side::Left) == Side::Right);
  const Edge e{3, 3};
  CHECK(e.endpoint(Side::Left) == 3);
  CHECK(Edge::from_key(e.key()) == e);
  CHECK(Edge{1, 2}.key() != Edge{2, 1}.key());
}

TEST_CASE("plain tsv maps ids in file order") {
  const auto r = parse("1 2\n1 3\n", InputFormat::PlainTsv);
  REQUIRE(r.events.size() == 2);
  CHECK(r.warnings.total() == 0);
  CHECK(r.events[0].sign == Sign::Insert);
  CHECK(r.events[0].index == 1);
  CHECK(r.events[1].index == 2);
  CHECK(r.events[0].edge.left == r.events[1].edge.left);
  CHECK(r.events[0].edge.right != r.events[1].edge.right);
  CHECK(r.left_labels[r.events[0].edge.left] == 1);
  CHECK(r.right_labels[r.events[0].edge.right] == 2);
  CHECK(r.right_labels[r.events[1].edge.right] == 3);
}

TEST_CASE("konect comments are skipped") {
  const auto r = parse("% bip unweighted\n% 1 1 1\n4 7\n", InputFormat::Konect);
  REQUIRE(r.events.size() == 1);
  CHECK(r.left_labels.at(r.events[0].edge.left) == 4);
  CHECK(r.right_labels.at(r.events[0].edge.right) == 7);
  CHECK(r.events[0].index == 1);
}

TEST_CASE("konect ignores weight and timestamp columns") {
  const auto r = parse("1 2 1 1200000000\n2 2 1 1200000001\n", InputFormat::Konect);
  CHECK(r.events.size() == 2);
  CHECK(r.warnings.total() == 0);
}

TEST_CASE("duplicate edges produce one event and a warning") {
  const auto r = parse("1 2\n1 2\n", InputFormat::PlainTsv);
  CHECK(r.events.size() == 1);
  CHECK(r.warnings.duplicates == 1);
}

TEST_CASE("same numeric id on both sides is an ordinary edge") {
  const auto r = parse("5 5\n", InputFormat::PlainTsv);
  REQUIRE(r.events.size() == 1);
  CHECK(r.warnings.total() == 0);
}

TEST_CASE("malformed lines are counted and skipped") {
  const auto r = parse("1 2\nfoo bar\n3\n4 5 +7\n\n6 7 -1\n8 9 1\n", InputFormat::PlainTsv);
  CHECK(r.events.size() == 2);
  CHECK(r.warnings.malformed == 3);
  CHECK(r.warnings.invalid_deletes == 1);
}

TEST_CASE("tsv sign column drives deletions") {
  const auto r = parse("1 2\n1 3 1\n1 2 -1\n", InputFormat::PlainTsv);
  REQUIRE(r.events.size() == 3);
  CHECK(r.events[2].sign == Sign::Delete);
  CHECK(r.events[2].edge == r.events[0].edge);
  CHECK_NOTHROW(validate_stream(r.events));
}

TEST_CASE("input without events is an EmptyStream error") {
  CHECK_THROWS_AS(parse("% only a comment\n", InputFormat::Konect), EmptyStream);
  CHECK_THROWS_AS(parse("", InputFormat::PlainTsv), EmptyStream);
  CHECK_THROWS_AS(parse("x y\n", InputFormat::PlainTsv), EmptyStream);
}

TEST_CASE("missing file is an IoError") {
  CHECK_THROWS_AS(parse_edge_list_file("/nonexistent/edges.tsv", InputFormat::PlainTsv),
                  IoError);
}

TEST_CASE("format names") {
  CHECK(parse_format_name("tsv") == InputFormat::PlainTsv);
  CHECK(parse_format_name("konect") == InputFormat::Konect);
  CHECK(parse_format_name("native") == InputFormat::Native);
  CHECK_THROWS_AS(parse_format_name("csv"), ConfigError);
}

TEST_CASE("native format round-trips") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const auto events = testing::random_stream(seed, 20, 25, 150, 0.3);
    std::ostringstream out;
    write_native(out, events);
    CHECK(out.str().rfind("index,left,right,sign\n", 0) == 0);
    const auto back = parse(out.str(), InputFormat::Native);
    CHECK(back.events == events);
    CHECK(back.warnings.total() == 0);
  }
}

TEST_CASE("native format rejects non-increasing indices") {
  const auto r = parse("index,left,right,sign\n1,0,0,1\n1,0,1,1\n3,0,1,1\n",
                       InputFormat::Native);
  CHECK(r.events.size() == 2);
  CHECK(r.warnings.malformed == 1);
}

TEST_CASE("validate_stream") {
  CHECK_NOTHROW(validate_stream(testing::indexed({ins(0, 0), del(0, 0)})));
  try {
    validate_stream(testing::indexed({del(0, 0)}));
    FAIL("expected a violation");
  } catch (const StreamInvariantViolation& e) {
    CHECK(e.index() == 1);
  }
  try {
    validate_stream(testing::indexed({ins(0, 0), ins(0, 0)}));
    FAIL("expected a violation");
  } catch (const StreamInvariantViolation& e) {
    CHECK(e.index() == 2);
  }
  EventStream bad_order{ins(0, 0, 2), ins(0, 1, 2)};
  CHECK_THROWS_AS(validate_stream(bad_order), StreamInvariantViolation);
}

TEST_CASE("generate_dynamic_stream examples") {
  const auto base10 = testing::complete_bipartite(2, 5);
  CHECK(generate_dynamic_stream(base10, 0.0, 99) == base10);

  const auto base100 = testing::complete_bipartite(10, 10);
  const auto out = generate_dynamic_stream(base100, 0.2, 7);
  CHECK(out.size() == 120);
  CHECK(std::count_if(out.begin(), out.end(), [](const EdgeEvent& e) {
          return e.sign == Sign::Delete;
        }) == 20);
  CHECK_NOTHROW(validate_stream(out));

  const auto one = generate_dynamic_stream(testing::indexed({ins(4, 2)}), 1.0, 3);
  REQUIRE(one.size() == 2);
  CHECK(one[0].sign == Sign::Insert);
  CHECK(one[1].sign == Sign::Delete);
  CHECK(one[1].edge == Edge{4, 2});
  CHECK(one[1].index == 2);
}

TEST_CASE("generate_dynamic_stream rejects bad input") {
  const auto base = testing::complete_bipartite(2, 2);
  CHECK_THROWS_AS(generate_dynamic_stream(base, -0.1, 1), ConfigError);
  CHECK_THROWS_AS(generate_dynamic_stream(base, 1.5, 1), ConfigError);
  const auto with_delete = testing::indexed({ins(0, 0), del(0, 0)});
  CHECK_THROWS_AS(generate_dynamic_stream(with_delete, 0.5, 1), ConfigError);
  const auto dup = testing::indexed({ins(0, 0), ins(0, 0)});
  CHECK_THROWS_AS(generate_dynamic_stream(dup, 0.5, 1), ConfigError);
}

TEST_CASE("property: generated streams are valid, sized and order-preserving") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    Rng rng(seed);
    const auto n = 1 + uniform_index(rng, 300);
    const double alpha = static_cast<double>(uniform_index(rng, 101)) / 100.0;
    SyntheticGraphConfig cfg;
    cfg.left_vertices = 40;
    cfg.right_vertices = 40;
    cfg.edges = n;
    cfg.skew = seed % 2 == 0 ? 0.0 : 0.8;
    cfg.seed = seed;
    const auto base = generate_bipartite_stream(cfg);
    REQUIRE(base.size() == n);
    const auto out = generate_dynamic_stream(base, alpha, seed);
    CHECK_NOTHROW(validate_stream(out));

    const auto deletions = static_cast<std::size_t>(
        std::count_if(out.begin(), out.end(),
                      [](const EdgeEvent& e) { return e.sign == Sign::Delete; }));
    CHECK(deletions == static_cast<std::size_t>(std::floor(alpha * n + 1e-9)));

    std::vector<Edge> inserted;
    for (const auto& e : out)
      if (e.sign == Sign::Insert) inserted.push_back(e.edge);
    std::vector<Edge> original;
    for (const auto& e : base) original.push_back(e.edge);
    CHECK(inserted == original);

    CHECK(generate_dynamic_stream(base, alpha, seed) == out);
  }
}

TEST_CASE("deletions land at every legal position") {
  // One base edge followed by two others: the deletion of the first edge can
  // follow any of the three insertions.
  const auto base = testing::indexed({ins(0, 0), ins(0, 1), ins(0, 2)});
  std::array<int, 3> seen{};
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    const auto out = generate_dynamic_stream(base, 0.34, seed);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (out[i].sign == Sign::Delete && out[i].edge == Edge{0, 0}) {
        std::size_t inserts_before = 0;
        for (std::size_t j = 0; j < i; ++j)
          inserts_before += out[j].sign == Sign::Insert;
        ++seen[inserts_before - 1];
      }
  }
  CHECK(seen[0] > 0);
  CHECK(seen[1] > 0);
  CHECK(seen[2] > 0);
}

TEST_CASE("bipartite generator") {
  SyntheticGraphConfig cfg;
  cfg.left_vertices = 10;
  cfg.right_vertices = 10;
  cfg.edges = 100;
  cfg.seed = 5;
  const auto full = generate_bipartite_stream(cfg);
  CHECK(full.size() == 100);
  CHECK_NOTHROW(validate_stream(full));
  CHECK(generate_bipartite_stream(cfg) == full);
  cfg.edges = 101;
  CHECK_THROWS_AS(generate_bipartite_stream(cfg), ConfigError);
}

TEST_CASE("max_live_edges") {
  const auto s = testing::indexed({ins(0, 0), ins(0, 1), del(0, 0), ins(1, 1), ins(1, 0)});
  CHECK(max_live_edges(s) == 3);
}
