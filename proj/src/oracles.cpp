#include "adgap/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <tuple>

namespace adgap {

namespace {

constexpr double kEulerRatio = 1.5819767068693265;  // e / (e - 1)

void check_subset_caps(const InfluenceGraph& g, const Caps& caps) {
  if (g.node_count() > caps.max_subset_nodes)
    throw CapExceeded("subset enumeration over " + std::to_string(g.node_count()) +
                      " nodes exceeds cap " + std::to_string(caps.max_subset_nodes));
  if (g.edge_count() > caps.max_enum_edges)
    throw CapExceeded("live-edge enumeration over " + std::to_string(g.edge_count()) +
                      " edges exceeds cap " + std::to_string(caps.max_enum_edges));
}

// Calls fn(weight, anc) per live-edge realization, where anc[u] is the
// bitmask of nodes that reach u (including u itself).
void for_each_live_ancestors(const InfluenceGraph& g, const Caps& caps,
                             const std::function<void(double, const std::vector<std::uint64_t>&)>& fn) {
  const int n = g.node_count();
  std::vector<std::uint64_t> anc(n);
  std::vector<int> stack;
  std::vector<std::uint8_t> seen(n);
  enumerate_live_edges(g, [&](const LiveEdgeGraph& live) {
    std::fill(anc.begin(), anc.end(), 0);
    for (int v = 0; v < n; ++v) {
      // Forward closure from v; v is an ancestor of everything it reaches.
      std::fill(seen.begin(), seen.end(), 0);
      stack.assign(1, v);
      seen[v] = 1;
      anc[v] |= 1ULL << v;
      while (!stack.empty()) {
        const int w = stack.back();
        stack.pop_back();
        for (const int* it = g.out_begin(w); it != g.out_end(w); ++it) {
          const int dst = g.edge(*it).dst;
          if (live.live(*it) && !seen[dst]) {
            seen[dst] = 1;
            anc[dst] |= 1ULL << v;
            stack.push_back(dst);
          }
        }
      }
    }
    fn(*live.weight, anc);
  }, caps);
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

OptResult opt_n_exact(const InfluenceGraph& g, int k, const Caps& caps) {
  check_subset_caps(g, caps);
  if (k < 0) throw std::invalid_argument("budget must be >= 0");
  const int n = g.node_count();
  k = std::min(k, n);

  // One pass over live graphs accumulates the spread of every subset via a
  // running union of reach sets.
  std::vector<double> value(std::size_t{1} << n, 0.0);
  std::vector<std::uint64_t> reach_union(std::size_t{1} << n, 0);
  for_each_live_ancestors(g, caps, [&](double w, const std::vector<std::uint64_t>& anc) {
    std::vector<std::uint64_t> reach(n, 0);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v)
        if ((anc[u] >> v) & 1) reach[v] |= 1ULL << u;
    reach_union[0] = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      if (std::popcount(mask) > k) continue;  // predecessors have fewer bits
      const int low = std::countr_zero(mask);
      reach_union[mask] = reach_union[mask & (mask - 1)] | reach[low];
      value[mask] += w * std::popcount(reach_union[mask]);
    }
  });

  OptResult best;
  best.value = 0.0;
  best.method = "exact_enumeration";
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    if (std::popcount(mask) > k) continue;
    const double v = mask == 0 ? 0.0 : value[mask];
    if (v < best.value) continue;
    std::vector<int> ids;
    for (int u = 0; u < n; ++u)
      if ((mask >> u) & 1) ids.push_back(u);
    if (v > best.value || lex_less(ids, best.witness)) {
      best.value = v;
      best.witness = std::move(ids);
    }
  }
  return best;
}

namespace {

struct AdaptiveDp {
  const InfluenceGraph& g;
  int budget;
  // memo[b * 2^n + mask]; NaN marks unset.
  std::vector<double> memo;

  double solve(std::uint64_t mask, int b) {
    const int n = g.node_count();
    if (b == 0 || mask == (n == 64 ? ~0ULL : (1ULL << n) - 1))
      return static_cast<double>(std::popcount(mask));
    double& slot = memo[static_cast<std::size_t>(b) << n | mask];
    if (!std::isnan(slot)) return slot;
    double best = static_cast<double>(std::popcount(mask));  // stopping is allowed
    for (int u = 0; u < n; ++u) {
      if ((mask >> u) & 1) continue;
      double expect = 0.0;
      enumerate_cascade_outcomes(g, mask, u, [&](std::uint64_t added, double prob) {
        expect += prob * solve(mask | added, b - 1);
      });
      best = std::max(best, expect);
    }
    slot = best;
    return best;
  }
};

}  // namespace

OptResult opt_a_exact(const InfluenceGraph& g, int k, const Caps& caps) {
  check_subset_caps(g, caps);
  if (k < 0) throw std::invalid_argument("budget must be >= 0");
  const int n = g.node_count();
  k = std::min(k, n);
  OptResult result;
  result.method = "exact_dp";
  if (k == 0) return result;

  AdaptiveDp dp{g, k, {}};
  dp.memo.assign(static_cast<std::size_t>(k + 1) << n,
                 std::numeric_limits<double>::quiet_NaN());
  result.value = dp.solve(0, k);

  // Report the lowest-id optimal first seed as the witness.
  for (int u = 0; u < n; ++u) {
    double expect = 0.0;
    enumerate_cascade_outcomes(g, 0, u, [&](std::uint64_t added, double prob) {
      expect += prob * dp.solve(added, k - 1);
    });
    if (expect >= result.value - 1e-12) {
      result.witness = {u};
      break;
    }
  }
  return result;
}

namespace {

struct ReferenceSolver {
  const InfluenceGraph& g;
  const Caps& caps;
  std::map<std::tuple<std::vector<EdgeState>, std::uint64_t, int>, double> memo;

  double solve(const PartialRealization& psi, int b) {
    if (b == 0) return psi.active_count();
    const auto key = std::make_tuple(psi.edge_states(), psi.active_mask(), b);
    const auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    double best = psi.active_count();
    for (int u = 0; u < g.node_count(); ++u) {
      if (psi.active(u)) continue;
      double expect = 0.0;
      consistent_extensions(g, psi, [&](const LiveEdgeGraph& live, double w) {
        PartialRealization next = psi;
        observe_in_place(g, live, next, u);
        expect += w * solve(next, b - 1);
      }, caps);
      best = std::max(best, expect);
    }
    memo[key] = best;
    return best;
  }
};

}  // namespace

OptResult opt_a_reference(const InfluenceGraph& g, int k, const Caps& caps) {
  check_subset_caps(g, caps);
  if (k < 0) throw std::invalid_argument("budget must be >= 0");
  OptResult result;
  result.method = "policy_tree_reference";
  if (k == 0) return result;
  ReferenceSolver solver{g, caps, {}};
  result.value = solver.solve(PartialRealization(g), std::min(k, g.node_count()));
  return result;
}

double multilinear_exact(const InfluenceGraph& g, const Configuration& x, const Caps& caps) {
  x.check();
  if (static_cast<int>(x.x.size()) != g.node_count())
    throw std::invalid_argument("configuration size mismatch");
  check_subset_caps(g, caps);
  const int n = g.node_count();
  double total = 0.0;
  for_each_live_ancestors(g, caps, [&](double w, const std::vector<std::uint64_t>& anc) {
    for (int u = 0; u < n; ++u) {
      double none = 1.0;
      for (int v = 0; v < n; ++v)
        if ((anc[u] >> v) & 1) none *= 1.0 - x.x[v];
      total += w * (1.0 - none);
    }
  });
  return total;
}

double multilinear_node_exact(const InfluenceGraph& g, const Configuration& x, int u,
                              const Caps& caps) {
  x.check();
  if (static_cast<int>(x.x.size()) != g.node_count())
    throw std::invalid_argument("configuration size mismatch");
  if (u < 0 || u >= g.node_count()) throw std::invalid_argument("node out of range");
  check_subset_caps(g, caps);
  const int n = g.node_count();
  double total = 0.0;
  for_each_live_ancestors(g, caps, [&](double w, const std::vector<std::uint64_t>& anc) {
    double none = 1.0;
    for (int v = 0; v < n; ++v)
      if ((anc[u] >> v) & 1) none *= 1.0 - x.x[v];
    total += w * (1.0 - none);
  });
  return total;
}

double bipartite_activation_closed_form(const InfluenceGraph& g, const Configuration& x,
                                        int u) {
  x.check();
  if (!satisfies_kind(g, GraphKind::Bipartite))
    throw std::invalid_argument("closed form needs a one-directional bipartite graph");
  if (u < 0 || u >= g.node_count()) throw std::invalid_argument("node out of range");
  double prod = 1.0 - x.x[u];  // u reaches itself with probability 1
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.edge(e).dst == u) prod *= 1.0 - g.edge(e).p * x.x[g.edge(e).src];
  return 1.0 - prod;
}

double marginal_policy_activation_bound(const std::vector<double>& x,
                                        const std::vector<double>& p) {
  if (x.size() != p.size() || x.empty())
    throw std::invalid_argument("x and p must be non-empty and equal-sized");
  if (std::abs(p[0] - 1.0) > 1e-12)
    throw std::invalid_argument("p_1 must be 1 (the target reaches itself)");
  const std::size_t n = x.size();
  double prefix = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    prefix += x[i] * p[i];
    const double tail = i + 1 < n ? p[i + 1] : 0.0;
    best = std::min(best, prefix + tail);
  }
  return best;
}

double line_marginal_telescoping_residual(const InfluenceGraph& g, const Configuration& x,
                                          const Caps& caps) {
  const std::vector<int> order = line_order(g);
  const int n = g.node_count();
  if (static_cast<int>(x.x.size()) != n)
    throw std::invalid_argument("configuration size mismatch");
  // Predecessor-chain indexing: chain[0] is the target (the line's last
  // node), chain[i] its i-th predecessor.
  std::vector<int> chain(order.rbegin(), order.rend());
  const int target = chain[0];

  auto masked = [&](int from_idx) {
    Configuration z;
    z.x.assign(n, 0.0);
    for (int i = from_idx; i < n; ++i) z.x[chain[i]] = x.x[chain[i]];
    return z;
  };

  double max_residual = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f_with = multilinear_node_exact(g, masked(i), target, caps);
    const double f_without = multilinear_node_exact(g, masked(i + 1), target, caps);
    const double fi_suffix = multilinear_node_exact(g, masked(i + 1), chain[i], caps);
    const double pi = reach_prob_path(g, chain[i], target);
    const double xi = x.x[chain[i]];
    const double residual = std::abs((f_with - f_without) - xi * pi * (1.0 - fi_suffix));
    max_residual = std::max(max_residual, residual);
  }
  return max_residual;
}

InequalityCheck budget_concavity_check(const InfluenceGraph& g,
                                       const std::vector<double>& budget_probs,
                                       const Caps& caps) {
  if (static_cast<int>(budget_probs.size()) != g.node_count() + 1)
    throw std::invalid_argument("budget distribution needs one entry per budget 0..n");
  double mass = 0.0, mean = 0.0;
  for (std::size_t j = 0; j < budget_probs.size(); ++j) {
    if (budget_probs[j] < 0.0) throw std::invalid_argument("negative probability");
    mass += budget_probs[j];
    mean += budget_probs[j] * static_cast<double>(j);
  }
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
  const double rounded = std::round(mean);
  if (std::abs(mean - rounded) > 1e-9)
    throw std::invalid_argument("budget distribution must have an integer mean");

  InequalityCheck check;
  for (std::size_t j = 0; j < budget_probs.size(); ++j)
    if (budget_probs[j] > 0.0)
      check.lhs += budget_probs[j] * opt_n_exact(g, static_cast<int>(j), caps).value;
  check.rhs = kEulerRatio * opt_n_exact(g, static_cast<int>(rounded), caps).value;
  check.pass = check.lhs <= check.rhs + 1e-9;
  return check;
}

InequalityCheck union_probability_floor_check(const std::vector<double>& y) {
  InequalityCheck check;
  double prod = 1.0, sum = 0.0;
  for (double v : y) {
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("entries must lie in [0,1]");
    prod *= 1.0 - v;
    sum += v;
  }
  check.lhs = 1.0 - prod;
  check.rhs = (1.0 - 1.0 / std::exp(1.0)) * std::min(1.0, sum);
  check.pass = check.lhs >= check.rhs - 1e-12;
  return check;
}

}  // namespace adgap
