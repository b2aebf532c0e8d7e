#pragma once

#include <string>
#include <vector>

#include "adgap/policy.hpp"

namespace adgap {

struct OptResult {
  double value = 0.0;
  std::vector<int> witness;  // lexicographically smallest argmax set (non-adaptive);
                             // best first seed (adaptive)
  std::string method;
};

// Exhaustive maximum of the exact spread over all seed sets of size <= k.
OptResult opt_n_exact(const InfluenceGraph& g, int k, const Caps& caps = default_caps());

// Optimal adaptive value by memoized backward induction over (active set,
// remaining budget). Under full-adoption feedback the revealed information
// that matters for the future is exactly the active set: out-edges of active
// nodes leaving it are necessarily blocked, edge states inside it cannot
// affect later cascades, and unobserved edges keep their priors. Validated
// against opt_a_reference.
OptResult opt_a_exact(const InfluenceGraph& g, int k, const Caps& caps = default_caps());

// Policy-tree enumeration over full partial realizations (edge states plus
// active set), with no state collapse. Exponentially slower; used to
// validate opt_a_exact on small instances.
OptResult opt_a_reference(const InfluenceGraph& g, int k, const Caps& caps = default_caps());

// Expected spread under independent seeding with probabilities x. Evaluated
// live-graph-major; agrees with the subset-sum definition exactly.
double multilinear_exact(const InfluenceGraph& g, const Configuration& x,
                         const Caps& caps = default_caps());

// Activation probability of node u under independent seeding.
double multilinear_node_exact(const InfluenceGraph& g, const Configuration& x, int u,
                              const Caps& caps = default_caps());

// Closed-form activation probability for a one-directional bipartite graph:
// 1 - prod_i (1 - p_i x_i) with p_i the reach probability from i to u.
double bipartite_activation_closed_form(const InfluenceGraph& g, const Configuration& x,
                                        int u);

// Upper bound on the activation probability of a line target under any
// adaptive policy with per-node seeding marginals x: the minimum over i of
// sum_{j<=i} x_j p_j + p_{i+1}, with p_{n+1} = 0. Index 1 is the target
// itself (p_1 = 1) and index j is its (j-1)-th predecessor.
double marginal_policy_activation_bound(const std::vector<double>& x,
                                        const std::vector<double>& p);

// Maximum residual of the marginal-decomposition identity along a directed
// line: activating mass x_i at the i-th predecessor raises the target's
// activation probability by exactly x_i p_i (1 - F_i(suffix)).
double line_marginal_telescoping_residual(const InfluenceGraph& g, const Configuration& x,
                                          const Caps& caps = default_caps());

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// E[OPT_N(G, X)] <= e/(e-1) * OPT_N(G, E[X]) for an integer-mean budget
// distribution given as probabilities over budgets {0..n}.
InequalityCheck budget_concavity_check(const InfluenceGraph& g,
                                       const std::vector<double>& budget_probs,
                                       const Caps& caps = default_caps());

// 1 - prod(1 - y_i) >= (1 - 1/e) * min(1, sum y_i).
InequalityCheck union_probability_floor_check(const std::vector<double>& y);

}  // namespace adgap
