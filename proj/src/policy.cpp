#include "adgap/policy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace adgap {

namespace {

class FrontPolicy final : public Policy {
 public:
  explicit FrontPolicy(std::optional<int> budget) : budget_(budget) {}

  std::optional<int> next(const InfluenceGraph& g, const PartialRealization& psi,
                          int /*remaining_budget*/) override {
    if (budget_ && static_cast<int>(psi.seeds().size()) >= *budget_) return std::nullopt;
    for (int u = 0; u < g.node_count(); ++u)
      if (!psi.active(u)) return u;
    return std::nullopt;
  }

  std::string name() const override { return budget_ ? "front" : "front_unbounded"; }

 private:
  std::optional<int> budget_;
};

class FixedSetPolicy final : public Policy {
 public:
  explicit FixedSetPolicy(std::vector<int> seeds) : seeds_(std::move(seeds)) {
    std::sort(seeds_.begin(), seeds_.end());
    seeds_.erase(std::unique(seeds_.begin(), seeds_.end()), seeds_.end());
  }

  std::optional<int> next(const InfluenceGraph&, const PartialRealization& psi,
                          int) override {
    const std::size_t i = psi.seeds().size();
    if (i >= seeds_.size()) return std::nullopt;
    return seeds_[i];
  }

  std::string name() const override { return "fixed_set"; }

 private:
  std::vector<int> seeds_;
};

class IndependentRoundingPolicy final : public Policy {
 public:
  explicit IndependentRoundingPolicy(Configuration x) : x_(std::move(x)) { x_.check(); }

  void begin_run(std::uint64_t run_seed) override {
    Rng rng(run_seed);
    sampled_.clear();
    for (std::size_t u = 0; u < x_.x.size(); ++u)
      if (rng.bernoulli(x_.x[u])) sampled_.push_back(static_cast<int>(u));
  }

  std::optional<int> next(const InfluenceGraph&, const PartialRealization& psi,
                          int) override {
    const std::size_t i = psi.seeds().size();
    if (i >= sampled_.size()) return std::nullopt;
    return sampled_[i];
  }

  std::string name() const override { return "independent_rounding"; }
  bool deterministic() const override { return false; }

 private:
  Configuration x_;
  std::vector<int> sampled_;
};

class AdaptiveGreedyPolicy final : public Policy {
 public:
  explicit AdaptiveGreedyPolicy(long gain_samples) : gain_samples_(gain_samples) {}

  void begin_run(std::uint64_t run_seed) override { run_seed_ = run_seed; }

  std::optional<int> next(const InfluenceGraph& g, const PartialRealization& psi,
                          int) override {
    int best = -1;
    double best_gain = 1e-12;  // stop once every gain is negligible
    for (int u = 0; u < g.node_count(); ++u) {
      if (psi.is_seed(u) || psi.active(u)) continue;
      const double gain =
          gain_samples_ > 0
              ? conditional_marginal_gain_mc(g, psi, u, gain_samples_,
                                             splitmix_combine(run_seed_, psi.seeds().size(), u))
              : conditional_marginal_gain(g, psi, u);
      if (gain > best_gain) {  // strict: ties keep the lowest id
        best = u;
        best_gain = gain;
      }
    }
    if (best < 0) return std::nullopt;
    return best;
  }

  std::string name() const override { return gain_samples_ > 0 ? "adaptive_greedy_mc" : "adaptive_greedy"; }
  bool deterministic() const override { return gain_samples_ == 0; }

 private:
  static std::uint64_t splitmix_combine(std::uint64_t seed, std::size_t step, int node) {
    std::uint64_t s = seed ^ (0x632be59bd9b4e019ULL * (step + 1)) ^
                      (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(node + 1));
    return splitmix64(s);
  }

  long gain_samples_;
  std::uint64_t run_seed_ = 0;
};

}  // namespace

std::unique_ptr<Policy> front_policy(std::optional<int> budget) {
  return std::make_unique<FrontPolicy>(budget);
}

std::unique_ptr<Policy> fixed_set_policy(std::vector<int> seeds) {
  return std::make_unique<FixedSetPolicy>(std::move(seeds));
}

std::unique_ptr<Policy> independent_rounding_policy(Configuration x) {
  return std::make_unique<IndependentRoundingPolicy>(std::move(x));
}

std::unique_ptr<Policy> adaptive_greedy_policy(long gain_samples) {
  return std::make_unique<AdaptiveGreedyPolicy>(gain_samples);
}

PolicyRun run_policy(const InfluenceGraph& g, Policy& policy, int budget,
                     const LiveEdgeGraph& live) {
  if (budget < 0) throw std::invalid_argument("budget must be >= 0");
  PolicyRun run;
  run.psi = PartialRealization(g);
  while (static_cast<int>(run.psi.seeds().size()) < budget) {
    const auto u = policy.next(g, run.psi, budget - static_cast<int>(run.psi.seeds().size()));
    if (!u) break;
    if (run.psi.is_seed(*u))
      throw std::logic_error("policy returned an already-seeded node");
    observe_in_place(g, live, run.psi, *u);
  }
  run.seeds = run.psi.seeds();
  run.value = run.psi.active_count();
  return run;
}

SpreadEstimate policy_spread_exact(const InfluenceGraph& g, Policy& policy, int budget,
                                   const Caps& caps) {
  if (!policy.deterministic())
    throw std::invalid_argument("exact policy evaluation needs a deterministic policy");
  double total = 0.0;
  enumerate_live_edges(g, [&](const LiveEdgeGraph& live) {
    total += *live.weight * run_policy(g, policy, budget, live).value;
  }, caps);
  return {total, 0.0, Method::Exact, 0};
}

SpreadEstimate policy_spread_mc(const InfluenceGraph& g, const PolicyFactory& factory,
                                int budget, long samples, std::uint64_t seed, int threads) {
  const McStats stats = mc_accumulate(samples, seed, /*stream=*/4, threads, [&](Rng& rng) {
    auto policy = factory();
    policy->begin_run(rng.next());
    const LiveEdgeGraph live = sample_live_edges(g, rng);
    return static_cast<long>(run_policy(g, *policy, budget, live).value);
  });
  return {stats.mean, stats.stderr_value, Method::MonteCarlo, stats.samples};
}

Configuration policy_marginals_exact(const InfluenceGraph& g, Policy& policy, int budget,
                                     const Caps& caps) {
  if (!policy.deterministic())
    throw std::invalid_argument("exact policy evaluation needs a deterministic policy");
  Configuration cfg;
  cfg.x.assign(g.node_count(), 0.0);
  enumerate_live_edges(g, [&](const LiveEdgeGraph& live) {
    const PolicyRun run = run_policy(g, policy, budget, live);
    for (int s : run.seeds) cfg.x[s] += *live.weight;
  }, caps);
  return cfg;
}

Configuration policy_marginals_mc(const InfluenceGraph& g, const PolicyFactory& factory,
                                  int budget, long samples, std::uint64_t seed, int threads) {
  std::vector<std::int64_t> counts;
  mc_accumulate_tallied(
      samples, seed, /*stream=*/5, threads, g.node_count(),
      [&](Rng& rng, std::vector<std::int64_t>& tally) {
        auto policy = factory();
        policy->begin_run(rng.next());
        const LiveEdgeGraph live = sample_live_edges(g, rng);
        const PolicyRun run = run_policy(g, *policy, budget, live);
        for (int s : run.seeds) ++tally[s];
        return static_cast<long>(run.value);
      },
      counts);
  Configuration cfg;
  cfg.x.resize(g.node_count());
  for (int u = 0; u < g.node_count(); ++u)
    cfg.x[u] = static_cast<double>(counts[u]) / samples;
  return cfg;
}

std::vector<double> policy_per_node_activation_exact(const InfluenceGraph& g, Policy& policy,
                                                     int budget, const Caps& caps) {
  if (!policy.deterministic())
    throw std::invalid_argument("exact policy evaluation needs a deterministic policy");
  std::vector<double> probs(g.node_count(), 0.0);
  enumerate_live_edges(g, [&](const LiveEdgeGraph& live) {
    const PolicyRun run = run_policy(g, policy, budget, live);
    for (int u = 0; u < g.node_count(); ++u)
      if (run.psi.active(u)) probs[u] += *live.weight;
  }, caps);
  return probs;
}

std::vector<int> nonadaptive_greedy(const InfluenceGraph& g, int budget, long samples,
                                    std::uint64_t seed, const Caps& caps) {
  if (budget > g.node_count()) throw std::invalid_argument("budget exceeds node count");
  auto evaluate = [&](const std::vector<int>& seeds) {
    return samples > 0 ? spread_mc(g, seeds, samples, seed).value
                       : spread_exact(g, seeds, caps).value;
  };

  std::vector<int> chosen;
  double current = 0.0;
  // Lazy queue: (stale gain, node); ordering prefers larger gain, then lower id.
  using Entry = std::pair<double, int>;
  auto cmp = [](const Entry& a, const Entry& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> queue(cmp);
  for (int u = 0; u < g.node_count(); ++u)
    queue.push({std::numeric_limits<double>::infinity(), u});

  std::vector<std::uint8_t> fresh(g.node_count(), 0);
  while (static_cast<int>(chosen.size()) < budget && !queue.empty()) {
    std::fill(fresh.begin(), fresh.end(), 0);
    while (true) {
      const Entry top = queue.top();
      queue.pop();
      if (fresh[top.second]) {
        chosen.push_back(top.second);
        current += top.first;
        break;
      }
      chosen.push_back(top.second);
      const double gain = evaluate(chosen) - current;
      chosen.pop_back();
      fresh[top.second] = 1;
      queue.push({gain, top.second});
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

PoissonTrajectory poisson_process_run(const InfluenceGraph& g, const Configuration& x,
                                      const LiveEdgeGraph& live, Rng& rng,
                                      const std::vector<double>& snapshot_times) {
  x.check();
  if (static_cast<int>(x.x.size()) != g.node_count())
    throw std::invalid_argument("configuration size mismatch");
  PoissonTrajectory traj;
  for (int u = 0; u < g.node_count(); ++u) {
    const double t = rng.exponential(x.x[u]);
    if (t <= 1.0) traj.events.push_back({t, u});
  }
  std::sort(traj.events.begin(), traj.events.end());

  std::vector<double> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t snap_idx = 0;

  PartialRealization psi(g);
  for (const auto& [t, u] : traj.events) {
    while (snap_idx < snaps.size() && snaps[snap_idx] < t)
      traj.snapshots.push_back({snaps[snap_idx++], psi});
    observe_in_place(g, live, psi, u);
  }
  while (snap_idx < snaps.size())
    traj.snapshots.push_back({snaps[snap_idx++], psi});
  traj.final_value = psi.active_count();
  traj.final_psi = std::move(psi);
  return traj;
}

double poisson_rate(const InfluenceGraph& g, const PartialRealization& psi,
                    const Configuration& x) {
  x.check();
  double rate = 0.0;
  for (int u = 0; u < g.node_count(); ++u) {
    if (psi.active(u) || x.x[u] == 0.0) continue;
    rate += x.x[u] * conditional_marginal_gain(g, psi, u);
  }
  return rate;
}

std::vector<int> random_walk_transform(const InfluenceGraph& g, Policy& policy, int budget,
                                       Rng& rng) {
  policy.begin_run(rng.next());
  const LiveEdgeGraph live = sample_live_edges(g, rng);
  return run_policy(g, policy, budget, live).seeds;
}

}  // namespace adgap
