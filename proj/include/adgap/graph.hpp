#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adgap/rng.hpp"

namespace adgap {

// Thrown when an exact computation would exceed its enumeration cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class GraphKind { General, InArborescence, OutArborescence, Bipartite, Line };

std::string kind_name(GraphKind kind);
GraphKind kind_from_name(const std::string& name);

struct Edge {
  int src = 0;
  int dst = 0;
  double p = 0.0;
};

// Directed influence graph with per-edge activation probabilities.
// Immutable after construction; the out-edge index is built once so that
// cascade loops never allocate.
class InfluenceGraph {
 public:
  InfluenceGraph() = default;
  InfluenceGraph(int node_count, std::vector<Edge> edges, GraphKind kind);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[e]; }
  GraphKind kind() const { return kind_; }

  // Edge ids leaving `u`.
  const int* out_begin(int u) const { return out_ids_.data() + out_offsets_[u]; }
  const int* out_end(int u) const { return out_ids_.data() + out_offsets_[u + 1]; }
  int out_degree(int u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
  int in_degree(int u) const { return in_degree_[u]; }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  GraphKind kind_ = GraphKind::General;
  std::vector<int> out_offsets_;
  std::vector<int> out_ids_;
  std::vector<int> in_degree_;
};

// Directed path on k*t nodes, node i -> i+1, every edge probability 1 - 1/t.
// Node j*t is the first node of the (j+1)-th segment.
InfluenceGraph make_line_instance(int k, int t);

struct RandomFamilyParams {
  int n = 0;           // node count (arborescences, general)
  int m = 0;           // edge count (general only)
  int left = 0;        // bipartite
  int right = 0;       // bipartite
  double density = 1.0;  // bipartite edge density
  double p_lo = 0.0;
  double p_hi = 1.0;
  // When non-empty, probabilities are drawn uniformly from this set instead
  // of the [p_lo, p_hi] interval.
  std::vector<double> p_choices;
};

// Deterministic constructive generation: random recursive trees for
// arborescences, independent edge coins for bipartite, uniform edge picks
// for general. Line is built by make_line_instance only.
InfluenceGraph random_family(GraphKind kind, const RandomFamilyParams& params, Rng& rng);

// Most specific structural kind: Line, then In-/OutArborescence, then
// Bipartite, then General.
GraphKind validate_kind(const InfluenceGraph& g);

// Structural predicate for one kind in isolation (a line also satisfies
// both arborescence predicates).
bool satisfies_kind(const InfluenceGraph& g, GraphKind kind);

// Throws std::invalid_argument when ids are out of range, self-loops or
// duplicate edges exist, probabilities leave [0,1], or the declared kind's
// structural predicate fails.
void validate(const InfluenceGraph& g);

// Product of edge probabilities along the unique directed path src -> dst;
// 1 when src == dst, 0 when no path. Requires an arborescence or line kind.
double reach_prob_path(const InfluenceGraph& g, int src, int dst);

// Nodes of a line graph in path order (source first).
std::vector<int> line_order(const InfluenceGraph& g);

std::string graph_to_json(const InfluenceGraph& g);
InfluenceGraph graph_from_json(const std::string& text);
void save_graph(const InfluenceGraph& g, const std::string& path);
InfluenceGraph load_graph(const std::string& path);

}  // namespace adgap
