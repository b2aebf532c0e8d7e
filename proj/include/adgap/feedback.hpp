#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "adgap/cascade.hpp"
#include "adgap/graph.hpp"

namespace adgap {

enum class EdgeState : std::uint8_t { Unobserved, Live, Blocked };

// Observation state under full-adoption feedback: seeds chosen so far plus
// the revealed states of every out-edge of an activated node. Edge states
// and seeds are a sufficient statistic; seed order is kept for reporting.
class PartialRealization {
 public:
  PartialRealization() = default;
  explicit PartialRealization(const InfluenceGraph& g)
      : edge_states_(g.edge_count(), EdgeState::Unobserved), active_(g.node_count(), 0) {}

  const std::vector<EdgeState>& edge_states() const { return edge_states_; }
  EdgeState edge_state(int e) const { return edge_states_[e]; }
  const std::vector<int>& seeds() const { return seeds_; }
  bool is_seed(int u) const;
  bool active(int u) const { return active_[u] != 0; }
  int active_count() const { return active_count_; }

  // Sorted Gamma(psi).
  std::vector<int> active_set() const;
  // Active-node bitmask; requires node count <= 64.
  std::uint64_t active_mask() const;

  int unobserved_count() const;

  // Seeds u and reveals the full cascade from u under `live`. Checks that
  // `live` agrees with every already-observed edge.
  friend PartialRealization observe(const InfluenceGraph& g, const LiveEdgeGraph& live,
                                    const PartialRealization& psi, int u);
  friend void observe_in_place(const InfluenceGraph& g, const LiveEdgeGraph& live,
                               PartialRealization& psi, int u, bool check_consistency);

 private:
  std::vector<EdgeState> edge_states_;
  std::vector<int> seeds_;
  std::vector<std::uint8_t> active_;
  int active_count_ = 0;
};

PartialRealization observe(const InfluenceGraph& g, const LiveEdgeGraph& live,
                           const PartialRealization& psi, int u);
void observe_in_place(const InfluenceGraph& g, const LiveEdgeGraph& live,
                      PartialRealization& psi, int u, bool check_consistency = false);

// True when psi is a sub-realization of psi_prime: seeds are a subset and
// every edge psi observes has the same state in psi_prime.
bool is_subrealization(const PartialRealization& psi, const PartialRealization& psi_prime);

// Nodes of Gamma(psi) with an out-edge leaving Gamma(psi). This forced set
// is the unique minimum boundary, so no tie-breaking is involved.
std::vector<int> boundary(const InfluenceGraph& g, const PartialRealization& psi);

// All completions of the unobserved edges with their product-prior weights.
void consistent_extensions(const InfluenceGraph& g, const PartialRealization& psi,
                           const std::function<void(const LiveEdgeGraph&, double)>& visit,
                           const Caps& caps = default_caps());

// Enumerates the outcomes of seeding `u` given active set `active_mask`:
// visit(newly_active_mask, probability), where newly_active_mask includes u.
// Branches lazily on frontier edges only, so the cost tracks the edges a
// cascade can actually reach. Requires node count <= 64.
void enumerate_cascade_outcomes(const InfluenceGraph& g, std::uint64_t active_mask, int u,
                                const std::function<void(std::uint64_t, double)>& visit);

// Expected number of newly activated nodes when seeding u, conditioned on
// psi; zero for u already in Gamma(psi).
double conditional_marginal_gain(const InfluenceGraph& g, const PartialRealization& psi,
                                 int u, const Caps& caps = default_caps());

double conditional_marginal_gain_mc(const InfluenceGraph& g, const PartialRealization& psi,
                                    int u, long samples, std::uint64_t seed);

}  // namespace adgap
