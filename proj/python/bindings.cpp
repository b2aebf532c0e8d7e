#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adgap/gap.hpp"

namespace py = pybind11;
using namespace adgap;

namespace {

Configuration as_config(const std::vector<double>& x) {
  Configuration c;
  c.x = x;
  c.check();
  return c;
}

// Policy descriptors for the Monte Carlo entry points, which need a fresh
// policy instance per worker.
PolicyFactory factory_from_name(const std::string& name, std::optional<int> budget,
                                const std::vector<double>& x, const std::vector<int>& seeds,
                                long gain_samples) {
  if (name == "front") return [budget] { return front_policy(budget); };
  if (name == "front_unbounded") return [] { return front_policy(std::nullopt); };
  if (name == "fixed_set") return [seeds] { return fixed_set_policy(seeds); };
  if (name == "independent_rounding")
    return [x] { return independent_rounding_policy(as_config(x)); };
  if (name == "adaptive_greedy")
    return [gain_samples] { return adaptive_greedy_policy(gain_samples); };
  throw std::invalid_argument("unknown policy: " + name);
}

py::dict report_rows(const Report& rep) {
  py::dict out;
  for (const ReportRow& row : rep.rows) {
    py::dict entry;
    entry["value"] = row.value;
    entry["stderr"] = row.stderr_value ? py::object(py::float_(*row.stderr_value)) : py::none();
    entry["bound"] = row.bound ? py::object(py::float_(*row.bound)) : py::none();
    entry["pass"] = row.pass ? py::object(py::bool_(*row.pass)) : py::none();
    out[py::str(row.name)] = entry;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(adgap, m) {
  m.doc() = "Exact and Monte Carlo laboratory for adaptive influence maximization "
            "under independent cascade with full-adoption feedback";

  py::register_exception<CapExceeded>(m, "CapExceeded");

  py::class_<InfluenceGraph>(m, "InfluenceGraph")
      .def(py::init([](int nodes, const std::vector<std::tuple<int, int, double>>& edges,
                       const std::string& kind) {
             std::vector<Edge> es;
             for (const auto& [src, dst, p] : edges) es.push_back({src, dst, p});
             InfluenceGraph g(nodes, std::move(es), kind_from_name(kind));
             validate(g);
             return g;
           }),
           py::arg("nodes"), py::arg("edges"), py::arg("kind") = "general")
      .def_property_readonly("node_count", &InfluenceGraph::node_count)
      .def_property_readonly("edge_count", &InfluenceGraph::edge_count)
      .def_property_readonly("kind", [](const InfluenceGraph& g) { return kind_name(g.kind()); })
      .def_property_readonly("edges",
                             [](const InfluenceGraph& g) {
                               std::vector<std::tuple<int, int, double>> out;
                               for (const Edge& e : g.edges()) out.emplace_back(e.src, e.dst, e.p);
                               return out;
                             })
      .def("to_json", &graph_to_json)
      .def("__repr__", [](const InfluenceGraph& g) {
        return "<InfluenceGraph " + kind_name(validate_kind(g)) + " n=" +
               std::to_string(g.node_count()) + " m=" + std::to_string(g.edge_count()) + ">";
      });

  m.def("make_line_instance", &make_line_instance, py::arg("k"), py::arg("t"));
  m.def("random_family",
        [](const std::string& kind, int n, int m, int left, int right, double density,
           double p_lo, double p_hi, std::uint64_t seed) {
          RandomFamilyParams params;
          params.n = n;
          params.m = m;
          params.left = left;
          params.right = right;
          params.density = density;
          params.p_lo = p_lo;
          params.p_hi = p_hi;
          Rng rng(seed);
          return random_family(kind_from_name(kind), params, rng);
        },
        py::arg("kind"), py::arg("n") = 0, py::arg("m") = 0, py::arg("left") = 0,
        py::arg("right") = 0, py::arg("density") = 1.0, py::arg("p_lo") = 0.0,
        py::arg("p_hi") = 1.0, py::arg("seed") = 0);
  m.def("validate_kind", [](const InfluenceGraph& g) { return kind_name(validate_kind(g)); });
  m.def("reach_prob_path", &reach_prob_path, py::arg("graph"), py::arg("src"), py::arg("dst"));
  m.def("graph_from_json", &graph_from_json);
  m.def("load_graph", &load_graph);
  m.def("save_graph", &save_graph);

  py::class_<SpreadEstimate>(m, "SpreadEstimate")
      .def_readonly("value", &SpreadEstimate::value)
      .def_property_readonly("stderr", [](const SpreadEstimate& e) { return e.stderr_value; })
      .def_readonly("samples", &SpreadEstimate::samples)
      .def("__repr__", [](const SpreadEstimate& e) {
        return "<SpreadEstimate " + format_double(e.value) + " +- " +
               format_double(e.stderr_value) + ">";
      });

  m.def("spread_exact",
        [](const InfluenceGraph& g, const std::vector<int>& seeds) {
          return spread_exact(g, seeds);
        },
        py::arg("graph"), py::arg("seeds"), py::call_guard<py::gil_scoped_release>());
  m.def("spread_mc", &spread_mc, py::arg("graph"), py::arg("seeds"), py::arg("samples"),
        py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("per_node_activation_exact",
        [](const InfluenceGraph& g, const std::vector<int>& seeds) {
          return per_node_activation_exact(g, seeds);
        },
        py::arg("graph"), py::arg("seeds"), py::call_guard<py::gil_scoped_release>());
  m.def("per_node_activation_mc", &per_node_activation_mc, py::arg("graph"), py::arg("seeds"),
        py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("line_spread_closed_form", &line_spread_closed_form, py::arg("graph"),
        py::arg("seeds"));

  py::class_<OptResult>(m, "OptResult")
      .def_readonly("value", &OptResult::value)
      .def_readonly("witness", &OptResult::witness)
      .def_readonly("method", &OptResult::method)
      .def("__repr__", [](const OptResult& r) {
        return "<OptResult " + format_double(r.value) + " (" + r.method + ")>";
      });

  m.def("opt_n_exact",
        [](const InfluenceGraph& g, int k) { return opt_n_exact(g, k); }, py::arg("graph"),
        py::arg("k"), py::call_guard<py::gil_scoped_release>());
  m.def("opt_a_exact",
        [](const InfluenceGraph& g, int k) { return opt_a_exact(g, k); }, py::arg("graph"),
        py::arg("k"), py::call_guard<py::gil_scoped_release>());
  m.def("opt_a_reference",
        [](const InfluenceGraph& g, int k) { return opt_a_reference(g, k); }, py::arg("graph"),
        py::arg("k"), py::call_guard<py::gil_scoped_release>());
  m.def("multilinear_exact",
        [](const InfluenceGraph& g, const std::vector<double>& x) {
          return multilinear_exact(g, as_config(x));
        },
        py::arg("graph"), py::arg("x"), py::call_guard<py::gil_scoped_release>());
  m.def("multilinear_node_exact",
        [](const InfluenceGraph& g, const std::vector<double>& x, int u) {
          return multilinear_node_exact(g, as_config(x), u);
        },
        py::arg("graph"), py::arg("x"), py::arg("u"),
        py::call_guard<py::gil_scoped_release>());
  m.def("bipartite_activation_closed_form",
        [](const InfluenceGraph& g, const std::vector<double>& x, int u) {
          return bipartite_activation_closed_form(g, as_config(x), u);
        },
        py::arg("graph"), py::arg("x"), py::arg("u"));
  m.def("marginal_policy_activation_bound", &marginal_policy_activation_bound, py::arg("x"),
        py::arg("p"));
  m.def("line_marginal_telescoping_residual",
        [](const InfluenceGraph& g, const std::vector<double>& x) {
          return line_marginal_telescoping_residual(g, as_config(x));
        },
        py::arg("graph"), py::arg("x"));
  m.def("nonadaptive_greedy",
        [](const InfluenceGraph& g, int k, long samples, std::uint64_t seed) {
          return nonadaptive_greedy(g, k, samples, seed);
        },
        py::arg("graph"), py::arg("k"), py::arg("samples") = 0, py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());

  m.def("policy_spread_mc",
        [](const InfluenceGraph& g, const std::string& policy, int budget, long samples,
           std::uint64_t seed, int threads, std::optional<int> policy_budget,
           const std::vector<double>& x, const std::vector<int>& seeds, long gain_samples) {
          const PolicyFactory factory =
              factory_from_name(policy, policy_budget, x, seeds, gain_samples);
          py::gil_scoped_release release;
          return policy_spread_mc(g, factory, budget, samples, seed, threads);
        },
        py::arg("graph"), py::arg("policy"), py::arg("budget"), py::arg("samples"),
        py::arg("seed") = 0, py::arg("threads") = 1, py::arg("policy_budget") = py::none(),
        py::arg("x") = std::vector<double>{}, py::arg("seeds") = std::vector<int>{},
        py::arg("gain_samples") = 0);
  m.def("policy_spread_exact",
        [](const InfluenceGraph& g, const std::string& policy, int budget,
           std::optional<int> policy_budget, const std::vector<double>& x,
           const std::vector<int>& seeds, long gain_samples) {
          const auto p = factory_from_name(policy, policy_budget, x, seeds, gain_samples)();
          py::gil_scoped_release release;
          return policy_spread_exact(g, *p, budget);
        },
        py::arg("graph"), py::arg("policy"), py::arg("budget"),
        py::arg("policy_budget") = py::none(), py::arg("x") = std::vector<double>{},
        py::arg("seeds") = std::vector<int>{}, py::arg("gain_samples") = 0);

  py::class_<GapReport>(m, "GapReport")
      .def_readonly("instance", &GapReport::instance)
      .def_readonly("budget", &GapReport::budget)
      .def_readonly("opt_a_value", &GapReport::opt_a_value)
      .def_readonly("opt_a_method", &GapReport::opt_a_method)
      .def_readonly("opt_n_value", &GapReport::opt_n_value)
      .def_readonly("opt_n_method", &GapReport::opt_n_method)
      .def_readonly("ratio", &GapReport::ratio)
      .def_readonly("applicable_bound", &GapReport::applicable_bound)
      .def_readonly("bound_satisfied", &GapReport::bound_satisfied)
      .def_readonly("exact", &GapReport::exact);

  m.def("measure_gap",
        [](const InfluenceGraph& g, int k, const std::string& method, long samples,
           std::uint64_t seed, int threads) {
          const Method mode = method == "exact" ? Method::Exact : Method::MonteCarlo;
          py::gil_scoped_release release;
          return measure_gap(g, k, mode, samples, seed, threads);
        },
        py::arg("graph"), py::arg("k"), py::arg("method") = "exact", py::arg("samples") = 0,
        py::arg("seed") = 0, py::arg("threads") = 1);

  py::class_<Report>(m, "Report")
      .def_readonly("experiment", &Report::experiment)
      .def_readonly("seed", &Report::seed)
      .def("to_json", &Report::to_json)
      .def("to_csv", &Report::to_csv)
      .def("all_pass", &Report::all_pass)
      .def("rows", &report_rows);

  m.def("lower_bound_experiment", &lower_bound_experiment, py::arg("k"), py::arg("t"),
        py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("multilinear_ratio_experiment", &multilinear_ratio_experiment, py::arg("k"),
        py::arg("t"), py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("random_walk_ratio_experiment", &random_walk_ratio_experiment, py::arg("k"),
        py::arg("t"), py::arg("samples"), py::arg("seed") = 0, py::arg("threads") = 1,
        py::call_guard<py::gil_scoped_release>());
  m.def("poisson_experiment",
        [](const InfluenceGraph& g, const std::vector<double>& x, long samples,
           std::uint64_t seed, int threads) {
          const Configuration c = as_config(x);
          py::gil_scoped_release release;
          return poisson_experiment(g, c, samples, seed, threads);
        },
        py::arg("graph"), py::arg("x"), py::arg("samples"), py::arg("seed") = 0,
        py::arg("threads") = 1);
  m.def("front_spread_convolution", &front_spread_convolution, py::arg("k"), py::arg("t"));
  m.def("line_opt_n_closed_form", &line_opt_n_closed_form, py::arg("k"), py::arg("t"));

  m.def("verify",
        [](std::uint64_t seed, long trials, const std::string& suite, int threads) {
          InvariantOptions options;
          options.seed = seed;
          options.trials = trials;
          options.suite = suite;
          options.threads = threads;
          std::vector<InvariantRow> rows;
          {
            py::gil_scoped_release release;
            rows = invariant_suite(options);
          }
          py::list out;
          for (const InvariantRow& row : rows) {
            py::dict entry;
            entry["name"] = row.name;
            entry["trials"] = row.trials;
            entry["violations"] = row.violations;
            entry["max_residual"] = row.max_residual;
            out.append(entry);
          }
          return out;
        },
        py::arg("seed") = 0, py::arg("trials") = -1, py::arg("suite") = "all",
        py::arg("threads") = 1);
}
