#include <cmath>

#include "adgap/graph.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adgap;
using testsupport::make_graph;

TEST_CASE("line instance layout") {
  const InfluenceGraph g = make_line_instance(2, 2);
  CHECK(g.node_count() == 4);
  REQUIRE(g.edge_count() == 3);
  for (int e = 0; e < 3; ++e) {
    CHECK(g.edge(e).src == e);
    CHECK(g.edge(e).dst == e + 1);
    CHECK(g.edge(e).p == 0.5);
  }
  CHECK(g.kind() == GraphKind::Line);

  const InfluenceGraph tiny = make_line_instance(1, 2);
  CHECK(tiny.node_count() == 2);
  CHECK(tiny.edge_count() == 1);
  CHECK(tiny.edge(0).p == 0.5);

  const InfluenceGraph degenerate = make_line_instance(1, 1);
  CHECK(degenerate.node_count() == 1);
  CHECK(degenerate.edge_count() == 0);

  // t = 1 keeps the 1 - 1/t formula literal: zero-probability edges.
  const InfluenceGraph zeros = make_line_instance(3, 1);
  CHECK(zeros.node_count() == 3);
  for (const Edge& e : zeros.edges()) CHECK(e.p == 0.0);

  CHECK_THROWS_AS(make_line_instance(0, 2), std::invalid_argument);
}

TEST_CASE("validate_kind picks the most specific kind") {
  CHECK(validate_kind(make_graph(2, {{0, 1, 0.5}})) == GraphKind::Line);
  CHECK(validate_kind(make_graph(3, {{1, 0, 0.5}, {2, 0, 0.5}})) == GraphKind::InArborescence);
  CHECK(validate_kind(make_graph(3, {{0, 1, 0.5}, {0, 2, 0.5}})) == GraphKind::OutArborescence);
  CHECK(validate_kind(make_graph(3, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 0, 0.5}})) ==
        GraphKind::General);
  CHECK(validate_kind(make_graph(4, {{0, 2, 0.5}, {0, 3, 0.5}, {1, 2, 0.5}})) ==
        GraphKind::Bipartite);
  CHECK(validate_kind(make_graph(1, {})) == GraphKind::Line);

  for (int k = 1; k <= 3; ++k)
    for (int t = 2; t <= 4; ++t)
      CHECK(validate_kind(make_line_instance(k, t)) == GraphKind::Line);
}

TEST_CASE("satisfies_kind individual predicates") {
  const InfluenceGraph line = make_line_instance(2, 2);
  CHECK(satisfies_kind(line, GraphKind::Line));
  CHECK(satisfies_kind(line, GraphKind::InArborescence));
  CHECK(satisfies_kind(line, GraphKind::OutArborescence));
  CHECK_FALSE(satisfies_kind(line, GraphKind::Bipartite));
  CHECK(satisfies_kind(make_line_instance(1, 2), GraphKind::Bipartite));
}

TEST_CASE("random_family families") {
  Rng rng(7);
  RandomFamilyParams params;

  params.n = 1;
  const InfluenceGraph single = random_family(GraphKind::InArborescence, params, rng);
  CHECK(single.node_count() == 1);
  CHECK(single.edge_count() == 0);

  CHECK_THROWS_AS(random_family(GraphKind::Line, params, rng), std::invalid_argument);

  params.left = 2;
  params.right = 2;
  params.density = 1.0;
  params.p_choices = {0.5};
  const InfluenceGraph bip = random_family(GraphKind::Bipartite, params, rng);
  CHECK(bip.edge_count() == 4);
  for (const Edge& e : bip.edges()) {
    CHECK(e.src < 2);
    CHECK(e.dst >= 2);
    CHECK(e.p == 0.5);
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng r(seed);
    params.n = 2 + static_cast<int>(seed % 9);
    params.p_choices.clear();
    const InfluenceGraph arb = random_family(GraphKind::InArborescence, params, r);
    int roots = 0;
    for (int u = 0; u < arb.node_count(); ++u) {
      CHECK(arb.out_degree(u) <= 1);
      if (arb.out_degree(u) == 0) ++roots;
    }
    CHECK(roots == 1);
    CHECK(validate_kind(arb) != GraphKind::General);
  }

  // Same seed, same graph.
  params.n = 6;
  Rng r1(42), r2(42);
  const InfluenceGraph a = random_family(GraphKind::OutArborescence, params, r1);
  const InfluenceGraph b = random_family(GraphKind::OutArborescence, params, r2);
  REQUIRE(a.edge_count() == b.edge_count());
  for (int e = 0; e < a.edge_count(); ++e) {
    CHECK(a.edge(e).src == b.edge(e).src);
    CHECK(a.edge(e).dst == b.edge(e).dst);
    CHECK(a.edge(e).p == b.edge(e).p);
  }
}

TEST_CASE("reach_prob_path") {
  CHECK(reach_prob_path(make_line_instance(1, 2), 0, 0) == 1.0);
  CHECK(reach_prob_path(make_line_instance(2, 2), 0, 3) ==
        doctest::Approx(0.125).epsilon(1e-12));
  CHECK(reach_prob_path(make_line_instance(1, 2), 1, 0) == 0.0);

  const InfluenceGraph out_arb = make_graph(3, {{0, 1, 0.5}, {0, 2, 0.25}});
  CHECK(reach_prob_path(out_arb, 0, 2) == 0.25);
  CHECK(reach_prob_path(out_arb, 1, 2) == 0.0);

  const InfluenceGraph cycle = make_graph(3, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 0, 0.5}});
  CHECK_THROWS_AS(reach_prob_path(cycle, 0, 2), std::invalid_argument);
}

TEST_CASE("reach probability is multiplicative along a line") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    std::vector<Edge> edges;
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 0.25 + 0.5 * rng.uniform()});
    const InfluenceGraph g = make_graph(n, std::move(edges), GraphKind::Line);
    const int a = static_cast<int>(rng.below(n - 2));
    const int b = a + 1 + static_cast<int>(rng.below(n - a - 1));
    const int c = b + static_cast<int>(rng.below(n - b));
    const double direct = reach_prob_path(g, a, c);
    const double split = reach_prob_path(g, a, b) * reach_prob_path(g, b, c);
    CHECK(std::abs(direct - split) <= 1e-12);
  }
}

TEST_CASE("graph json round trip") {
  const InfluenceGraph g = make_line_instance(2, 2);
  const std::string text = graph_to_json(g);
  const InfluenceGraph back = graph_from_json(text);
  CHECK(back.node_count() == g.node_count());
  CHECK(back.kind() == g.kind());
  REQUIRE(back.edge_count() == g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(back.edge(e).src == g.edge(e).src);
    CHECK(back.edge(e).dst == g.edge(e).dst);
    CHECK(back.edge(e).p == g.edge(e).p);
  }
  CHECK(text.find("\"version\":1") != std::string::npos);
  CHECK(text.find("\"kind\":\"line\"") != std::string::npos);
  CHECK(text.find("\"nodes\":4") != std::string::npos);
  CHECK(text.find("\"src\":0") != std::string::npos);
  CHECK(text.find("\"dst\":1") != std::string::npos);
  CHECK(text.find("\"p\":0.5") != std::string::npos);
}

TEST_CASE("validate rejects malformed graphs") {
  CHECK_THROWS_AS(validate(make_graph(2, {{0, 0, 0.5}})), std::invalid_argument);
  CHECK_THROWS_AS(validate(make_graph(2, {{0, 1, 1.5}})), std::invalid_argument);
  CHECK_THROWS_AS(validate(make_graph(2, {{0, 1, 0.5}, {0, 1, 0.25}})), std::invalid_argument);
  CHECK_THROWS_AS(validate(make_graph(3, {{0, 1, 0.5}}, GraphKind::Line)),
                  std::invalid_argument);
  CHECK_NOTHROW(validate(make_line_instance(3, 2)));
}

TEST_CASE("line_order follows the path") {
  const InfluenceGraph g = make_line_instance(2, 3);
  const std::vector<int> order = line_order(g);
  REQUIRE(order.size() == 6);
  for (int i = 0; i < 6; ++i) CHECK(order[i] == i);
}
