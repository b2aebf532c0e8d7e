#include <cmath>

#include "adgap/gap.hpp"
#include "adgap/oracles.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adgap;
using testsupport::make_graph;

TEST_CASE("opt_n_exact") {
  const InfluenceGraph g = make_line_instance(2, 2);

  const OptResult zero = opt_n_exact(g, 0);
  CHECK(zero.value == 0.0);
  CHECK(zero.witness.empty());

  const OptResult two = opt_n_exact(g, 2);
  CHECK(two.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(two.witness == std::vector<int>{0, 2});

  const OptResult all = opt_n_exact(g, 4);
  CHECK(all.value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(all.witness == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("opt_n_exact agrees with subset brute force over the naive oracle") {
  Rng rng(61);
  for (int trial = 0; trial < 12; ++trial) {
    const InfluenceGraph g = random_test_graph(
        trial % 2 ? GraphKind::General : GraphKind::OutArborescence, 5, rng);
    const int n = g.node_count();
    const int k = 1 + static_cast<int>(rng.below(n));
    double best = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
      if (std::popcount(mask) > k) continue;
      std::vector<int> seeds;
      for (int u = 0; u < n; ++u)
        if ((mask >> u) & 1) seeds.push_back(u);
      best = std::max(best, testsupport::naive_spread(g, seeds));
    }
    const OptResult opt = opt_n_exact(g, k);
    CHECK(std::abs(opt.value - best) <= 1e-9);
    CHECK(static_cast<int>(opt.witness.size()) <= k);
    CHECK(std::abs(testsupport::naive_spread(g, opt.witness) - best) <= 1e-9);
  }
}

TEST_CASE("opt_a_exact on lines") {
  CHECK(opt_a_exact(make_line_instance(2, 2), 0).value == 0.0);
  CHECK(opt_a_exact(make_line_instance(1, 2), 1).value == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(opt_a_exact(make_line_instance(2, 2), 2).value ==
        doctest::Approx(3.25).epsilon(1e-9));
}

TEST_CASE("adaptive dp agrees with the policy-tree reference") {
  CHECK(check_dp_reference(8, 71).violations == 0);
}

TEST_CASE("adaptive optimum dominates the non-adaptive optimum") {
  CHECK(check_opt_dominance(12, 72).violations == 0);
}

TEST_CASE("opt_a_exact dominates the exact front policy value on lines") {
  for (int k = 1; k <= 3; ++k) {
    for (int t = 2; t <= 3; ++t) {
      const InfluenceGraph g = make_line_instance(k, t);
      if (g.edge_count() > 10) continue;
      auto front = front_policy(std::nullopt);
      const double policy_value = policy_spread_exact(g, *front, k).value;
      CHECK(opt_a_exact(g, k).value >= policy_value - 1e-9);
    }
  }
}

TEST_CASE("multilinear extension") {
  const InfluenceGraph single = make_graph(2, {{0, 1, 0.5}});

  Configuration zeros;
  zeros.x = {0.0, 0.0};
  CHECK(multilinear_exact(single, zeros) == 0.0);

  Configuration half;
  half.x = {0.5, 0.5};
  CHECK(multilinear_exact(single, half) == doctest::Approx(1.125).epsilon(1e-12));

  Rng rng(83);
  for (int trial = 0; trial < 10; ++trial) {
    const InfluenceGraph g = random_test_graph(GraphKind::General, 5, rng);
    std::vector<double> x(g.node_count());
    for (double& v : x) v = rng.uniform();
    Configuration cfg;
    cfg.x = x;
    CHECK(std::abs(multilinear_exact(g, cfg) - testsupport::naive_multilinear(g, x)) <=
          1e-12);

    double sum = 0.0;
    for (int u = 0; u < g.node_count(); ++u) sum += multilinear_node_exact(g, cfg, u);
    CHECK(std::abs(sum - multilinear_exact(g, cfg)) <= 1e-12);
  }
}

TEST_CASE("multilinear agrees with the spread at 0/1 configurations") {
  CHECK(check_vertex_agreement(25, 84).violations == 0);
}

TEST_CASE("multilinear per-node values") {
  const InfluenceGraph g = make_line_instance(2, 2);
  Configuration ones;
  ones.x.assign(4, 1.0);
  for (int u = 0; u < 4; ++u) CHECK(multilinear_node_exact(g, ones, u) == 1.0);

  Configuration last;
  last.x = {0.0, 0.0, 0.0, 1.0};
  CHECK(multilinear_node_exact(g, last, 3) == 1.0);
  CHECK(multilinear_node_exact(g, last, 0) == 0.0);
}

TEST_CASE("multilinear extension is DR-submodular") {
  CHECK(check_dr_submodularity(25, 85).violations == 0);
}

TEST_CASE("greedy indicator certifies the (1 - 1/e) floor") {
  CHECK(check_pipage_floor(10, 86).violations == 0);
}

TEST_CASE("bipartite activation closed form") {
  const InfluenceGraph pair = make_graph(2, {{0, 1, 0.5}});
  Configuration zeros;
  zeros.x = {0.0, 0.0};
  CHECK(bipartite_activation_closed_form(pair, zeros, 1) == 0.0);

  Configuration seed_left;
  seed_left.x = {1.0, 0.0};
  CHECK(bipartite_activation_closed_form(pair, seed_left, 1) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const InfluenceGraph two = make_graph(3, {{0, 2, 0.5}, {1, 2, 0.5}});
  Configuration both;
  both.x = {1.0, 1.0, 0.0};
  CHECK(bipartite_activation_closed_form(two, both, 2) ==
        doctest::Approx(0.75).epsilon(1e-12));

  CHECK_THROWS_AS(bipartite_activation_closed_form(make_line_instance(2, 2), zeros, 1),
                  std::invalid_argument);

  CHECK(check_bipartite_closed_form(20, 87).violations == 0);
}

TEST_CASE("marginal policy activation bound") {
  CHECK(marginal_policy_activation_bound({1.0, 0.0, 0.0}, {1.0, 0.5, 0.25}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(marginal_policy_activation_bound({0.0, 0.0, 0.0}, {1.0, 0.5, 0.25}) == 0.0);
  CHECK(marginal_policy_activation_bound({0.0, 1.0, 0.0}, {1.0, 0.5, 0.25}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK_THROWS_AS(marginal_policy_activation_bound({1.0}, {0.5}), std::invalid_argument);
}

TEST_CASE("telescoping residual vanishes") {
  const InfluenceGraph g = make_line_instance(2, 3);
  Configuration zeros;
  zeros.x.assign(6, 0.0);
  CHECK(line_marginal_telescoping_residual(g, zeros) == 0.0);

  Configuration last_only;
  last_only.x.assign(6, 0.0);
  last_only.x[5] = 1.0;
  CHECK(line_marginal_telescoping_residual(g, last_only) <= 1e-12);

  CHECK(check_telescoping(20, 88).violations == 0);
}

TEST_CASE("budget concavity check") {
  const InfluenceGraph g = make_line_instance(2, 2);

  std::vector<double> deterministic(5, 0.0);
  deterministic[2] = 1.0;
  const InequalityCheck fixed = budget_concavity_check(g, deterministic);
  CHECK(fixed.pass);
  CHECK(fixed.lhs == doctest::Approx(3.0).epsilon(1e-12));

  std::vector<double> spread_out(5, 0.0);
  spread_out[0] = 0.5;
  spread_out[2] = 0.5;
  const InequalityCheck mixed = budget_concavity_check(g, spread_out);
  CHECK(mixed.lhs == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(mixed.rhs == doctest::Approx(1.875 * 1.5819767068693265).epsilon(1e-12));
  CHECK(mixed.pass);

  std::vector<double> fractional(5, 0.0);
  fractional[0] = 0.25;
  fractional[2] = 0.75;
  CHECK_THROWS_AS(budget_concavity_check(g, fractional), std::invalid_argument);
}

TEST_CASE("union probability floor") {
  std::vector<double> first{1.0, 0.0, 0.0};
  CHECK(union_probability_floor_check(first).pass);

  std::vector<double> zeros{0.0, 0.0};
  const InequalityCheck z = union_probability_floor_check(zeros);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  CHECK(z.pass);

  std::vector<double> tenth(10, 0.1);
  const InequalityCheck t = union_probability_floor_check(tenth);
  CHECK(t.lhs == doctest::Approx(1.0 - std::pow(0.9, 10)).epsilon(1e-12));
  CHECK(t.rhs == doctest::Approx(1.0 - 1.0 / std::exp(1.0)).epsilon(1e-12));
  CHECK(t.pass);
}

TEST_CASE("oracles honor caps") {
  const InfluenceGraph big = make_line_instance(5, 5);  // 24 edges
  CHECK_THROWS_AS(opt_n_exact(big, 2), CapExceeded);
  Configuration x;
  x.x.assign(25, 0.1);
  CHECK_THROWS_AS(multilinear_exact(big, x), CapExceeded);
}
