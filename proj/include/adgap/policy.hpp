#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adgap/feedback.hpp"

namespace adgap {

// Per-node seeding probabilities x in [0,1]^n.
struct Configuration {
  std::vector<double> x;

  double budget_mass() const {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  void check() const {
    for (double v : x)
      if (v < 0.0 || v > 1.0) throw std::invalid_argument("configuration entry outside [0,1]");
  }
};

// Decision rule mapping partial realizations to the next seed (nullopt =
// stop). Policies never return a node already in dom(psi). Randomized
// policies draw all their choices from the begin_run seed.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::optional<int> next(const InfluenceGraph& g, const PartialRealization& psi,
                                  int remaining_budget) = 0;
  virtual std::string name() const = 0;
  virtual bool deterministic() const { return true; }
  virtual void begin_run(std::uint64_t /*run_seed*/) {}
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

// Seeds the lowest-index inactive node each step; an own budget of nullopt
// means unbounded (the appendix configuration).
std::unique_ptr<Policy> front_policy(std::optional<int> budget);

// Non-adaptive deterministic policy seeding a fixed set in ascending order.
std::unique_ptr<Policy> fixed_set_policy(std::vector<int> seeds);

// Samples S by independent inclusion with probabilities x at begin_run and
// then seeds it non-adaptively; E[spread] is the multilinear extension F(x).
std::unique_ptr<Policy> independent_rounding_policy(Configuration x);

// Picks argmax_u of the conditional marginal gain, ties broken by lowest
// node id; stops once every gain is <= 1e-12. Exact gains when samples == 0,
// Monte Carlo gains otherwise.
std::unique_ptr<Policy> adaptive_greedy_policy(long gain_samples = 0);

struct PolicyRun {
  std::vector<int> seeds;
  PartialRealization psi;
  int value = 0;  // f = |Gamma(psi)|
};

PolicyRun run_policy(const InfluenceGraph& g, Policy& policy, int budget,
                     const LiveEdgeGraph& live);

SpreadEstimate policy_spread_exact(const InfluenceGraph& g, Policy& policy, int budget,
                                   const Caps& caps = default_caps());

SpreadEstimate policy_spread_mc(const InfluenceGraph& g, const PolicyFactory& factory,
                                int budget, long samples, std::uint64_t seed,
                                int threads = 1);

Configuration policy_marginals_exact(const InfluenceGraph& g, Policy& policy, int budget,
                                     const Caps& caps = default_caps());

Configuration policy_marginals_mc(const InfluenceGraph& g, const PolicyFactory& factory,
                                  int budget, long samples, std::uint64_t seed,
                                  int threads = 1);

// Probability each node ends active under the policy, by exact enumeration.
std::vector<double> policy_per_node_activation_exact(const InfluenceGraph& g, Policy& policy,
                                                     int budget,
                                                     const Caps& caps = default_caps());

// Standard greedy on the spread with a lazy evaluation queue; ties by
// lowest id. Exact spread when samples == 0, Monte Carlo otherwise.
std::vector<int> nonadaptive_greedy(const InfluenceGraph& g, int budget, long samples = 0,
                                    std::uint64_t seed = 0,
                                    const Caps& caps = default_caps());

struct PoissonTrajectory {
  // (time, node) seeding events in time order, first firing per node.
  std::vector<std::pair<double, int>> events;
  // psi at each requested snapshot time.
  std::vector<std::pair<double, PartialRealization>> snapshots;
  PartialRealization final_psi;
  int final_value = 0;
};

// n independent exponential clocks of rate x_i over [0,1]; nodes firing
// before t=1 are seeded in time order with full-adoption observation.
PoissonTrajectory poisson_process_run(const InfluenceGraph& g, const Configuration& x,
                                      const LiveEdgeGraph& live, Rng& rng,
                                      const std::vector<double>& snapshot_times = {});

// Instantaneous expected-gain rate sum_{i not in Gamma(psi)} x_i * gain(i | psi).
double poisson_rate(const InfluenceGraph& g, const PartialRealization& psi,
                    const Configuration& x);

// Runs the policy on a sampled realization and returns its seed set for
// non-adaptive reuse.
std::vector<int> random_walk_transform(const InfluenceGraph& g, Policy& policy, int budget,
                                       Rng& rng);

}  // namespace adgap
