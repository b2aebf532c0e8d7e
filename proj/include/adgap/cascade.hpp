#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "adgap/graph.hpp"
#include "adgap/rng.hpp"

namespace adgap {

// Enumeration caps for exact computations. The edge cap bounds 2^m loops;
// the node cap bounds 2^n subset loops.
struct Caps {
  int max_enum_edges = 20;
  int max_subset_nodes = 16;
};

inline const Caps& default_caps() {
  static const Caps caps{};
  return caps;
}

// One realization of edge liveness. `weight` is the prior probability of
// the realization and is populated only by the enumerator.
class LiveEdgeGraph {
 public:
  LiveEdgeGraph() = default;
  explicit LiveEdgeGraph(int edge_count)
      : edge_count_(edge_count), words_((edge_count + 63) / 64, 0) {}

  int edge_count() const { return edge_count_; }
  bool live(int e) const { return (words_[e >> 6] >> (e & 63)) & 1; }
  void set_live(int e, bool value) {
    const std::uint64_t bit = 1ULL << (e & 63);
    if (value)
      words_[e >> 6] |= bit;
    else
      words_[e >> 6] &= ~bit;
  }
  // Low 64 bits of the mask; enough for every exact enumeration.
  std::uint64_t low_mask() const { return words_.empty() ? 0 : words_[0]; }

  std::optional<double> weight;

 private:
  int edge_count_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class Method { Exact, MonteCarlo };

struct SpreadEstimate {
  double value = 0.0;
  double stderr_value = 0.0;  // 0 for exact
  Method method = Method::Exact;
  long samples = 0;  // 0 for exact
};

LiveEdgeGraph sample_live_edges(const InfluenceGraph& g, Rng& rng);

// Visits all 2^m live-edge realizations with their prior weights.
void enumerate_live_edges(const InfluenceGraph& g,
                          const std::function<void(const LiveEdgeGraph&)>& visit,
                          const Caps& caps = default_caps());

// Forward closure of `seeds` over live edges; sorted node ids.
std::vector<int> reachable(const InfluenceGraph& g, const LiveEdgeGraph& live,
                           const std::vector<int>& seeds);

// Reusable workspace for cascade closures; keeps MC loops allocation-free.
class CascadeWorkspace {
 public:
  void reset(int node_count);
  // Marks the closure of `seed` (skipping already-active nodes) and returns
  // the number of newly activated nodes.
  int activate(const InfluenceGraph& g, const LiveEdgeGraph& live, int seed);
  bool active(int u) const { return active_[u] != 0; }
  int active_count() const { return active_count_; }
  const std::vector<std::uint8_t>& flags() const { return active_; }

 private:
  std::vector<std::uint8_t> active_;
  std::vector<int> stack_;
  int active_count_ = 0;
};

SpreadEstimate spread_exact(const InfluenceGraph& g, const std::vector<int>& seeds,
                            const Caps& caps = default_caps());

SpreadEstimate spread_mc(const InfluenceGraph& g, const std::vector<int>& seeds,
                         long samples, std::uint64_t seed, int threads = 1);

std::vector<double> per_node_activation_exact(const InfluenceGraph& g,
                                              const std::vector<int>& seeds,
                                              const Caps& caps = default_caps());

std::vector<double> per_node_activation_mc(const InfluenceGraph& g,
                                           const std::vector<int>& seeds, long samples,
                                           std::uint64_t seed, int threads = 1);

// Sum over nodes of q^dist(node, nearest seed predecessor) on a uniform-
// probability line; equals the exact spread.
double line_spread_closed_form(const InfluenceGraph& g, const std::vector<int>& seeds);

// Deterministic chunked Monte Carlo over integer-valued samples. The
// per-sample functor receives a chunk-local Rng; integer accumulators make
// the result independent of the worker count.
struct McStats {
  double mean = 0.0;
  double stderr_value = 0.0;
  long samples = 0;
};

McStats mc_accumulate(long samples, std::uint64_t master_seed, std::uint64_t stream,
                      int threads, const std::function<long(Rng&)>& sample_once);

// As above but each sample also adds integer counts into per-slot tallies
// (used for per-node activation frequencies). Returns aggregate stats of the
// scalar sample value; `tallies` receives total counts per slot.
McStats mc_accumulate_tallied(long samples, std::uint64_t master_seed, std::uint64_t stream,
                              int threads, std::size_t slots,
                              const std::function<long(Rng&, std::vector<std::int64_t>&)>& sample_once,
                              std::vector<std::int64_t>& tallies);

}  // namespace adgap
