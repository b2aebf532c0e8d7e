#include <cmath>

#include "adgap/gap.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adgap;
using testsupport::make_graph;

TEST_CASE("measure_gap on the full-budget instance is trivial") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const InfluenceGraph g = random_test_graph(GraphKind::General, 5, rng);
    const GapReport report = measure_gap(g, g.node_count(), Method::Exact);
    CHECK(report.ratio == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("measure_gap on line(2,2)") {
  const InfluenceGraph g = make_line_instance(2, 2);
  const GapReport report = measure_gap(g, 2, Method::Exact);
  CHECK(report.opt_n_value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(report.opt_a_value == doctest::Approx(3.25).epsilon(1e-9));
  CHECK(report.ratio >= 1.0);
  CHECK(report.ratio <= 2.0);
  REQUIRE(report.applicable_bound.has_value());
  CHECK(*report.applicable_bound == kGapBoundOutArborescence);
  CHECK(report.bound_satisfied);
  CHECK(report.exact);

  const Report rep = report.to_report(0);
  CHECK(rep.experiment == "gap");
  CHECK(rep.all_pass());
}

TEST_CASE("mc gap flags the adaptive side as a lower bound") {
  const InfluenceGraph g = make_line_instance(2, 2);
  const GapReport report = measure_gap(g, 2, Method::MonteCarlo, 20000, 11);
  CHECK_FALSE(report.exact);
  CHECK(report.opt_a_method.find("lower_bound") != std::string::npos);
  CHECK(std::abs(report.opt_a_value - 3.25) < 0.1);
  CHECK(report.opt_n_value == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("applicable bound picks the tightest satisfied predicate") {
  CHECK(*applicable_gap_bound(make_graph(2, {{0, 1, 0.5}})) == kGapBoundBipartite);
  CHECK(*applicable_gap_bound(make_line_instance(2, 2)) == kGapBoundOutArborescence);
  CHECK(*applicable_gap_bound(make_graph(4, {{1, 0, 0.5}, {2, 0, 0.5}, {3, 1, 0.5}})) ==
        kGapBoundInArborescence);
  CHECK_FALSE(
      applicable_gap_bound(make_graph(3, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 0, 0.5}})).has_value());
}

TEST_CASE("front spread convolution") {
  CHECK(front_spread_convolution(2, 2) == doctest::Approx(3.25).epsilon(1e-12));
  CHECK(front_spread_convolution(1, 1) == 1.0);
  CHECK(front_spread_convolution(4, 1) == 4.0);
  CHECK(check_front_convolution_exact().violations == 0);
  CHECK(check_front_convolution_mc(10, 10, 20000, 5).violations == 0);
}

TEST_CASE("line closed form optimum grid") {
  CHECK(line_opt_n_closed_form(2, 2) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(line_opt_n_closed_form(1, 1) == 1.0);
  CHECK(check_line_optn_closed_form().violations == 0);
}

TEST_CASE("lower bound experiment") {
  const Report degenerate = lower_bound_experiment(1, 1, 100, 3);
  for (const ReportRow& row : degenerate.rows) {
    if (row.name == "ratio_convolution")
      CHECK(row.value == doctest::Approx(1.0).epsilon(1e-12));
  }

  const Report rep = lower_bound_experiment(2, 2, 20000, 3);
  bool saw_conv = false, saw_denom = false, saw_ratio = false;
  for (const ReportRow& row : rep.rows) {
    if (row.name == "front_policy_spread_convolution") {
      CHECK(row.value == doctest::Approx(3.25).epsilon(1e-12));
      saw_conv = true;
    }
    if (row.name == "opt_n_closed_form") {
      CHECK(row.value == doctest::Approx(3.0).epsilon(1e-12));
      saw_denom = true;
    }
    if (row.name == "ratio_convolution") {
      CHECK(row.value == doctest::Approx(3.25 / 3.0).epsilon(1e-12));
      saw_ratio = true;
    }
  }
  CHECK(saw_conv);
  CHECK(saw_denom);
  CHECK(saw_ratio);
  CHECK(rep.all_pass());
}

TEST_CASE("lower bound ratio grows toward e/(e-1) in t") {
  const int k = 50;
  double previous = 0.0;
  for (int t : {10, 50, 200}) {
    const double ratio = front_spread_convolution(k, t) / line_opt_n_closed_form(k, t);
    CHECK(ratio >= previous - 1e-12);
    CHECK(ratio <= kGapBoundBipartite + 1e-9);
    previous = ratio;
  }
}

TEST_CASE("multilinear ratio experiment") {
  const Report unit = multilinear_ratio_experiment(6, 1, 2000, 5);
  for (const ReportRow& row : unit.rows) {
    if (row.name == "ratio") CHECK(row.value == doctest::Approx(1.0).epsilon(1e-9));
    if (row.name == "full_activation_fraction") CHECK(row.value == 1.0);
  }
  CHECK(unit.all_pass());

  const Report rep = multilinear_ratio_experiment(8, 6, 20000, 5);
  bool saw_interior = false;
  for (const ReportRow& row : rep.rows) {
    if (row.name == "interior_activation_mean") {
      saw_interior = true;
      CHECK(*row.bound == doctest::Approx(6.0 / 11.0).epsilon(1e-12));
    }
    if (row.name == "adaptive_value") CHECK(row.value == 48.0);
  }
  CHECK(saw_interior);
  CHECK(rep.all_pass());
}

TEST_CASE("random walk ratio experiment") {
  const Report unit = random_walk_ratio_experiment(6, 1, 2000, 5);
  for (const ReportRow& row : unit.rows)
    if (row.name == "ratio") CHECK(row.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(unit.all_pass());

  const Report rep = random_walk_ratio_experiment(10, 10, 20000, 5);
  CHECK(rep.all_pass());
  for (const ReportRow& row : rep.rows)
    if (row.name == "ratio") CHECK(row.value > 1.0);
}

TEST_CASE("poisson experiment cross-checks the product form") {
  const InfluenceGraph g = make_line_instance(2, 2);
  Configuration x;
  x.x = {0.9, 0.4, 0.2, 0.7};
  const Report rep = poisson_experiment(g, x, 30000, 13);
  bool saw_exact = false;
  for (const ReportRow& row : rep.rows) {
    if (row.name == "product_form_exact") {
      saw_exact = true;
      REQUIRE(row.pass.has_value());
      CHECK(*row.pass);
    }
  }
  CHECK(saw_exact);
}

TEST_CASE("report serialization") {
  Report rep;
  rep.experiment = "demo";
  rep.seed = 7;
  rep.add_param("k", static_cast<long long>(2));
  rep.add_param_string("mode", "exact");
  rep.rows.push_back({"value", 3.25, std::nullopt, 2.0, true});
  rep.rows.push_back({"other", 0.1234567890123456, 0.01, std::nullopt, std::nullopt});
  const std::string json = rep.to_json();
  CHECK(json.find("\"experiment\":\"demo\"") != std::string::npos);
  CHECK(json.find("\"seed\":7") != std::string::npos);
  CHECK(json.find("\"name\":\"value\"") != std::string::npos);
  CHECK(json.find("\"bound\":2") != std::string::npos);
  CHECK(json.find("\"pass\":true") != std::string::npos);
  CHECK(json.find("\"stderr\":null") != std::string::npos);
  CHECK(json.find("0.123456789012") != std::string::npos);  // 12 significant digits
  CHECK(json.find("timestamp") == std::string::npos);

  rep.timestamp = "2020-01-01T00:00:00Z";
  CHECK(rep.to_json().find("\"timestamp\":\"2020-01-01T00:00:00Z\"") != std::string::npos);

  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("name,value,stderr,bound,pass\n", 0) == 0);
  CHECK(csv.find("value,3.25,,2,true") != std::string::npos);

  rep.rows.push_back({"bad", 0.0, std::nullopt, 0.0, false});
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("invariant suite controls") {
  InvariantOptions none;
  none.trials = 0;
  CHECK(invariant_suite(none).empty());

  InvariantOptions one;
  one.suite = "union_probability_floor";
  one.trials = 50;
  const std::vector<InvariantRow> rows = invariant_suite(one);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].name == "union_probability_floor");
  CHECK(rows[0].trials == 50);
  CHECK(rows[0].violations == 0);

  InvariantOptions bogus;
  bogus.suite = "no_such_property";
  CHECK_THROWS_AS(invariant_suite(bogus), std::invalid_argument);

  // The injected-bug mode must surface violations: the harness can fail.
  InvariantOptions bug;
  bug.suite = "boundary_size_bound";
  bug.trials = 50;
  bug.inject_boundary_bug = true;
  const std::vector<InvariantRow> bug_rows = invariant_suite(bug);
  REQUIRE(bug_rows.size() == 1);
  CHECK(bug_rows[0].violations > 0);

  const Report rep = invariant_report(bug_rows, bug);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("thread determinism") {
  CHECK(check_thread_determinism(99).violations == 0);
}

TEST_CASE("two hop bound and boundary bound sampling") {
  CHECK(check_boundary_bound(200, 12, 17).violations == 0);
  CHECK(check_two_hop_bound(60, 8, 17).violations == 0);
  CHECK(check_two_hop_bound(60, 8, 18, /*in_arborescences_only=*/true).violations == 0);
}

TEST_CASE("gap bounds on random families") {
  CHECK(check_gap_bounds(GraphKind::InArborescence, 8, 7, 2, 19).violations == 0);
  CHECK(check_gap_bounds(GraphKind::OutArborescence, 8, 7, 2, 19).violations == 0);
  CHECK(check_gap_bounds(GraphKind::Bipartite, 8, 7, 2, 19).violations == 0);
}

TEST_CASE("poisson identity and rate identity") {
  CHECK(check_poisson_identity(8, 21).violations == 0);
  CHECK(check_rate_identity(20, 21).violations == 0);
  CHECK(check_seed_count_bound(100, 21).violations == 0);
}

TEST_CASE("budget concavity sampling") {
  CHECK(check_budget_concavity(30, 23).violations == 0);
}
