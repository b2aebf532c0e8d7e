#include <cstdlib>
#include <ctime>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adgap/gap.hpp"

namespace {

using namespace adgap;

constexpr int kExitUsage = 1;
constexpr int kExitCapExceeded = 2;
constexpr int kExitViolation = 3;

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::vector<int> parse_int_csv(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

std::vector<double> parse_double_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stod(item));
  return out;
}

Method parse_method(const std::string& name) {
  if (name == "exact") return Method::Exact;
  if (name == "mc") return Method::MonteCarlo;
  throw CLI::ValidationError("--method must be exact or mc");
}

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool csv = false;
  bool deterministic = false;
  int threads = 1;
  Caps caps;
};

void emit(const Report& report_in, const GlobalOptions& opts) {
  Report report = report_in;
  if (!opts.deterministic) report.timestamp = utc_timestamp();
  std::cout << (opts.csv ? report.to_csv() : report.to_json() + "\n");
}

std::string witness_json(const std::vector<int>& witness) {
  std::string out = "[";
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(witness[i]);
  }
  return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and Monte Carlo laboratory for adaptive influence "
               "maximization under independent cascade with full-adoption feedback"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--seed", opts.seed, "Master RNG seed")->capture_default_str();
  app.add_flag("--csv", opts.csv, "Emit CSV instead of JSON");
  app.add_flag("--deterministic", opts.deterministic, "Suppress the timestamp field");
  app.add_option("--threads", opts.threads, "Worker threads for Monte Carlo")
      ->capture_default_str();
  if (const char* cap = std::getenv("ADGAP_EDGE_CAP"))
    opts.caps.max_enum_edges = std::atoi(cap);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph file");
  std::string gen_family, gen_out;
  int gen_k = 2, gen_t = 2, gen_n = 5, gen_left = 2, gen_right = 2;
  double gen_density = 1.0, gen_p_min = 0.0, gen_p_max = 1.0;
  gen->add_option("family", gen_family, "line|in_arborescence|out_arborescence|bipartite")
      ->required();
  gen->add_option("--k", gen_k, "Line segments");
  gen->add_option("--t", gen_t, "Line segment length");
  gen->add_option("--n", gen_n, "Arborescence node count");
  gen->add_option("--left", gen_left, "Bipartite left nodes");
  gen->add_option("--right", gen_right, "Bipartite right nodes");
  gen->add_option("--density", gen_density, "Bipartite edge density");
  gen->add_option("--p-min", gen_p_min, "Lower edge probability");
  gen->add_option("--p-max", gen_p_max, "Upper edge probability");
  gen->add_option("-o,--output", gen_out, "Output file")->required();

  // spread
  auto* spread = app.add_subcommand("spread", "Influence spread of a seed set");
  std::string spread_file, spread_seeds, spread_method = "exact";
  long spread_samples = 10000;
  spread->add_option("file", spread_file)->required();
  spread->add_option("--seeds", spread_seeds, "Comma-separated node ids")->required();
  spread->add_option("--method", spread_method, "exact|mc");
  spread->add_option("--samples", spread_samples);

  // opt
  auto* opt = app.add_subcommand("opt", "Optimal seeding value");
  std::string opt_file, opt_mode = "nonadaptive", opt_method = "exact";
  int opt_budget = 1;
  long opt_samples = 10000;
  opt->add_option("file", opt_file)->required();
  opt->add_option("--budget", opt_budget)->required();
  opt->add_option("--mode", opt_mode, "adaptive|nonadaptive");
  opt->add_option("--method", opt_method, "exact|mc");
  opt->add_option("--samples", opt_samples);

  // gap
  auto* gap = app.add_subcommand("gap", "Adaptivity-gap measurement");
  std::string gap_file, gap_method = "exact";
  int gap_budget = 1;
  long gap_samples = 10000;
  gap->add_option("file", gap_file)->required();
  gap->add_option("--budget", gap_budget)->required();
  gap->add_option("--method", gap_method, "exact|mc");
  gap->add_option("--samples", gap_samples);

  // line experiments
  auto* lowerbound = app.add_subcommand("lowerbound", "Directed-line lower-bound experiment");
  auto* mlratio = app.add_subcommand("mlratio", "Multilinear-extension ratio experiment");
  auto* rwratio = app.add_subcommand("rwratio", "Random-walk transform ratio experiment");
  int exp_k = 2, exp_t = 2;
  long exp_samples = 10000;
  for (auto* sub : {lowerbound, mlratio, rwratio}) {
    sub->add_option("--k", exp_k)->required();
    sub->add_option("--t", exp_t)->required();
    sub->add_option("--samples", exp_samples);
  }

  // poisson
  auto* poisson = app.add_subcommand("poisson", "Poisson seeding process experiment");
  std::string poisson_file, poisson_x;
  long poisson_samples = 10000;
  poisson->add_option("file", poisson_file)->required();
  poisson->add_option("--x", poisson_x, "Comma-separated per-node rates")->required();
  poisson->add_option("--samples", poisson_samples);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  std::string verify_suite = "all";
  long verify_trials = -1;
  verify->add_option("--suite", verify_suite, "all or a property name");
  verify->add_option("--trials", verify_trials, "Override per-property trial counts");

  // Global flags may appear after the subcommand.
  for (CLI::App* sub : app.get_subcommands(static_cast<bool (*)(const CLI::App*)>(nullptr)))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) {
      InfluenceGraph g;
      Rng rng(opts.seed);
      RandomFamilyParams params;
      params.p_lo = gen_p_min;
      params.p_hi = gen_p_max;
      if (gen_family == "line") {
        g = make_line_instance(gen_k, gen_t);
      } else if (gen_family == "in_arborescence" || gen_family == "out_arborescence") {
        params.n = gen_n;
        g = random_family(kind_from_name(gen_family), params, rng);
      } else if (gen_family == "bipartite") {
        params.left = gen_left;
        params.right = gen_right;
        params.density = gen_density;
        g = random_family(GraphKind::Bipartite, params, rng);
      } else {
        std::cerr << "unknown family: " << gen_family << "\n";
        return kExitUsage;
      }
      save_graph(g, gen_out);
      std::cout << graph_to_json(g) << "\n";
      return 0;
    }

    if (*spread) {
      const InfluenceGraph g = load_graph(spread_file);
      const std::vector<int> seeds = parse_int_csv(spread_seeds);
      Report rep;
      rep.experiment = "spread";
      rep.seed = opts.seed;
      rep.add_param_string("file", spread_file);
      rep.add_param_string("seeds", spread_seeds);
      rep.add_param_string("method", spread_method);
      SpreadEstimate est;
      if (parse_method(spread_method) == Method::Exact) {
        est = spread_exact(g, seeds, opts.caps);
        rep.rows.push_back({"spread", est.value, std::nullopt, std::nullopt, std::nullopt});
      } else {
        est = spread_mc(g, seeds, spread_samples, opts.seed, opts.threads);
        rep.add_param("samples", static_cast<long long>(spread_samples));
        rep.rows.push_back({"spread", est.value, est.stderr_value, std::nullopt, std::nullopt});
      }
      emit(rep, opts);
      return 0;
    }

    if (*opt) {
      const InfluenceGraph g = load_graph(opt_file);
      Report rep;
      rep.experiment = "opt";
      rep.seed = opts.seed;
      rep.add_param_string("file", opt_file);
      rep.add_param("budget", static_cast<long long>(opt_budget));
      rep.add_param_string("mode", opt_mode);
      rep.add_param_string("method", opt_method);
      if (opt_mode == "nonadaptive") {
        if (parse_method(opt_method) == Method::Exact) {
          const OptResult r = opt_n_exact(g, opt_budget, opts.caps);
          rep.add_param("witness", witness_json(r.witness));
          rep.rows.push_back({"opt_n", r.value, std::nullopt, std::nullopt, std::nullopt});
        } else {
          const std::vector<int> seeds =
              nonadaptive_greedy(g, opt_budget, opt_samples, opts.seed, opts.caps);
          const SpreadEstimate est =
              spread_mc(g, seeds, opt_samples, opts.seed + 1, opts.threads);
          rep.add_param("witness", witness_json(seeds));
          rep.rows.push_back(
              {"greedy_lower_bound", est.value, est.stderr_value, std::nullopt, std::nullopt});
        }
      } else if (opt_mode == "adaptive") {
        if (parse_method(opt_method) == Method::Exact) {
          const OptResult r = opt_a_exact(g, opt_budget, opts.caps);
          rep.add_param("witness", witness_json(r.witness));
          rep.rows.push_back({"opt_a", r.value, std::nullopt, std::nullopt, std::nullopt});
        } else {
          const bool line = satisfies_kind(g, GraphKind::Line);
          const PolicyFactory factory = line
              ? PolicyFactory([] { return front_policy(std::nullopt); })
              : PolicyFactory([] { return adaptive_greedy_policy(256); });
          const SpreadEstimate est =
              policy_spread_mc(g, factory, opt_budget, opt_samples, opts.seed, opts.threads);
          rep.rows.push_back({"policy_lower_bound", est.value, est.stderr_value, std::nullopt,
                              std::nullopt});
        }
      } else {
        std::cerr << "--mode must be adaptive or nonadaptive\n";
        return kExitUsage;
      }
      emit(rep, opts);
      return 0;
    }

    if (*gap) {
      const InfluenceGraph g = load_graph(gap_file);
      const GapReport report = measure_gap(g, gap_budget, parse_method(gap_method),
                                           gap_samples, opts.seed, opts.threads, opts.caps);
      emit(report.to_report(opts.seed), opts);
      return 0;
    }

    if (*lowerbound) {
      emit(lower_bound_experiment(exp_k, exp_t, exp_samples, opts.seed, opts.threads), opts);
      return 0;
    }
    if (*mlratio) {
      emit(multilinear_ratio_experiment(exp_k, exp_t, exp_samples, opts.seed, opts.threads),
           opts);
      return 0;
    }
    if (*rwratio) {
      emit(random_walk_ratio_experiment(exp_k, exp_t, exp_samples, opts.seed, opts.threads),
           opts);
      return 0;
    }

    if (*poisson) {
      const InfluenceGraph g = load_graph(poisson_file);
      Configuration x;
      x.x = parse_double_csv(poisson_x);
      emit(poisson_experiment(g, x, poisson_samples, opts.seed, opts.threads, opts.caps),
           opts);
      return 0;
    }

    if (*verify) {
      InvariantOptions vopts;
      vopts.seed = opts.seed;
      vopts.trials = verify_trials;
      vopts.suite = verify_suite;
      vopts.threads = opts.threads;
      const std::vector<InvariantRow> rows = invariant_suite(vopts);
      emit(invariant_report(rows, vopts), opts);
      for (const InvariantRow& row : rows)
        if (row.violations > 0) return kExitViolation;
      return 0;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
