#include "adgap/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace adgap {

using nlohmann::json;

std::string kind_name(GraphKind kind) {
  switch (kind) {
    case GraphKind::General: return "general";
    case GraphKind::InArborescence: return "in_arborescence";
    case GraphKind::OutArborescence: return "out_arborescence";
    case GraphKind::Bipartite: return "bipartite";
    case GraphKind::Line: return "line";
  }
  throw std::invalid_argument("unknown graph kind");
}

GraphKind kind_from_name(const std::string& name) {
  if (name == "general") return GraphKind::General;
  if (name == "in_arborescence") return GraphKind::InArborescence;
  if (name == "out_arborescence") return GraphKind::OutArborescence;
  if (name == "bipartite") return GraphKind::Bipartite;
  if (name == "line") return GraphKind::Line;
  throw std::invalid_argument("unknown graph kind: " + name);
}

InfluenceGraph::InfluenceGraph(int node_count, std::vector<Edge> edges, GraphKind kind)
    : node_count_(node_count), edges_(std::move(edges)), kind_(kind) {
  out_offsets_.assign(node_count_ + 1, 0);
  in_degree_.assign(node_count_, 0);
  for (const Edge& e : edges_) {
    if (e.src < 0 || e.src >= node_count_ || e.dst < 0 || e.dst >= node_count_)
      throw std::invalid_argument("edge endpoint out of range");
    out_offsets_[e.src + 1]++;
    in_degree_[e.dst]++;
  }
  for (int u = 0; u < node_count_; ++u) out_offsets_[u + 1] += out_offsets_[u];
  out_ids_.resize(edges_.size());
  std::vector<int> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e)
    out_ids_[cursor[edges_[e].src]++] = e;
}

InfluenceGraph make_line_instance(int k, int t) {
  if (k < 1 || t < 1) throw std::invalid_argument("make_line_instance requires k >= 1, t >= 1");
  const int n = k * t;
  const double p = 1.0 - 1.0 / static_cast<double>(t);
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, p});
  return InfluenceGraph(n, std::move(edges), GraphKind::Line);
}

namespace {

double draw_probability(const RandomFamilyParams& params, Rng& rng) {
  if (!params.p_choices.empty())
    return params.p_choices[rng.below(params.p_choices.size())];
  return rng.uniform_in(params.p_lo, params.p_hi);
}

}  // namespace

InfluenceGraph random_family(GraphKind kind, const RandomFamilyParams& params, Rng& rng) {
  switch (kind) {
    case GraphKind::Line:
      throw std::invalid_argument("line instances are built by make_line_instance");
    case GraphKind::InArborescence:
    case GraphKind::OutArborescence: {
      if (params.n < 1) throw std::invalid_argument("arborescence needs n >= 1");
      std::vector<Edge> edges;
      edges.reserve(params.n - 1);
      for (int i = 1; i < params.n; ++i) {
        const int parent = static_cast<int>(rng.below(i));
        const double p = draw_probability(params, rng);
        if (kind == GraphKind::InArborescence)
          edges.push_back({i, parent, p});
        else
          edges.push_back({parent, i, p});
      }
      return InfluenceGraph(params.n, std::move(edges), kind);
    }
    case GraphKind::Bipartite: {
      if (params.left < 1 || params.right < 1)
        throw std::invalid_argument("bipartite needs left, right >= 1");
      std::vector<Edge> edges;
      for (int i = 0; i < params.left; ++i)
        for (int j = 0; j < params.right; ++j)
          if (rng.bernoulli(params.density))
            edges.push_back({i, params.left + j, draw_probability(params, rng)});
      return InfluenceGraph(params.left + params.right, std::move(edges), GraphKind::Bipartite);
    }
    case GraphKind::General: {
      if (params.n < 1) throw std::invalid_argument("general needs n >= 1");
      const long long max_m = static_cast<long long>(params.n) * (params.n - 1);
      if (params.m < 0 || params.m > max_m)
        throw std::invalid_argument("general edge count out of range");
      std::set<std::pair<int, int>> used;
      std::vector<Edge> edges;
      while (static_cast<int>(edges.size()) < params.m) {
        const int src = static_cast<int>(rng.below(params.n));
        const int dst = static_cast<int>(rng.below(params.n));
        if (src == dst || used.count({src, dst})) continue;
        used.insert({src, dst});
        edges.push_back({src, dst, draw_probability(params, rng)});
      }
      std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
      });
      return InfluenceGraph(params.n, std::move(edges), GraphKind::General);
    }
  }
  throw std::invalid_argument("unknown graph kind");
}

namespace {

bool underlying_tree(const InfluenceGraph& g) {
  const int n = g.node_count();
  if (g.edge_count() != n - 1) return false;
  // Union-find over the undirected skeleton: n-1 edges and no cycle.
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    const int a = find(e.src), b = find(e.dst);
    if (a == b) return false;
    parent[a] = b;
  }
  return true;
}

bool is_in_arborescence(const InfluenceGraph& g) {
  if (!underlying_tree(g)) return false;
  int roots = 0;
  for (int u = 0; u < g.node_count(); ++u) {
    const int d = g.out_degree(u);
    if (d > 1) return false;
    if (d == 0) ++roots;
  }
  return roots == 1;
}

bool is_out_arborescence(const InfluenceGraph& g) {
  if (!underlying_tree(g)) return false;
  int roots = 0;
  for (int u = 0; u < g.node_count(); ++u) {
    const int d = g.in_degree(u);
    if (d > 1) return false;
    if (d == 0) ++roots;
  }
  return roots == 1;
}

bool is_line(const InfluenceGraph& g) {
  return is_in_arborescence(g) && is_out_arborescence(g);
}

bool is_bipartite(const InfluenceGraph& g) {
  // One-directional bipartite: no node both receives and sends.
  for (int u = 0; u < g.node_count(); ++u)
    if (g.in_degree(u) > 0 && g.out_degree(u) > 0) return false;
  return true;
}

}  // namespace

GraphKind validate_kind(const InfluenceGraph& g) {
  if (is_line(g)) return GraphKind::Line;
  if (is_in_arborescence(g)) return GraphKind::InArborescence;
  if (is_out_arborescence(g)) return GraphKind::OutArborescence;
  if (is_bipartite(g)) return GraphKind::Bipartite;
  return GraphKind::General;
}

bool satisfies_kind(const InfluenceGraph& g, GraphKind kind) {
  switch (kind) {
    case GraphKind::General: return true;
    case GraphKind::Line: return is_line(g);
    case GraphKind::InArborescence: return is_in_arborescence(g);
    case GraphKind::OutArborescence: return is_out_arborescence(g);
    case GraphKind::Bipartite: return is_bipartite(g);
  }
  return false;
}

void validate(const InfluenceGraph& g) {
  if (g.node_count() < 1) throw std::invalid_argument("graph needs at least one node");
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : g.edges()) {
    if (e.src == e.dst) throw std::invalid_argument("self-loop");
    if (e.p < 0.0 || e.p > 1.0) throw std::invalid_argument("edge probability outside [0,1]");
    if (!seen.insert({e.src, e.dst}).second) throw std::invalid_argument("duplicate edge");
  }
  const GraphKind actual = validate_kind(g);
  switch (g.kind()) {
    case GraphKind::General:
      return;
    case GraphKind::Line:
      if (actual != GraphKind::Line) throw std::invalid_argument("not a line");
      return;
    case GraphKind::InArborescence:
      if (!is_in_arborescence(g)) throw std::invalid_argument("not an in-arborescence");
      return;
    case GraphKind::OutArborescence:
      if (!is_out_arborescence(g)) throw std::invalid_argument("not an out-arborescence");
      return;
    case GraphKind::Bipartite:
      if (!is_bipartite(g)) throw std::invalid_argument("not one-directional bipartite");
      return;
  }
}

double reach_prob_path(const InfluenceGraph& g, int src, int dst) {
  const GraphKind structural = validate_kind(g);
  if (structural != GraphKind::Line && structural != GraphKind::InArborescence &&
      structural != GraphKind::OutArborescence)
    throw std::invalid_argument("reach_prob_path needs a unique-path graph kind");
  if (src == dst) return 1.0;
  if (structural == GraphKind::OutArborescence) {
    // Walk up from dst toward the root; in-degrees are <= 1.
    double prob = 1.0;
    int cur = dst;
    while (true) {
      int in_edge = -1;
      for (int e = 0; e < g.edge_count(); ++e)
        if (g.edge(e).dst == cur) { in_edge = e; break; }
      if (in_edge < 0) return 0.0;
      prob *= g.edge(in_edge).p;
      cur = g.edge(in_edge).src;
      if (cur == src) return prob;
    }
  }
  // Line or in-arborescence: follow the unique out-edges from src.
  double prob = 1.0;
  int cur = src;
  while (g.out_degree(cur) == 1) {
    const Edge& e = g.edge(*g.out_begin(cur));
    prob *= e.p;
    cur = e.dst;
    if (cur == dst) return prob;
  }
  return 0.0;
}

std::vector<int> line_order(const InfluenceGraph& g) {
  if (validate_kind(g) != GraphKind::Line) throw std::invalid_argument("not a line");
  int head = -1;
  for (int u = 0; u < g.node_count(); ++u)
    if (g.in_degree(u) == 0) head = u;
  std::vector<int> order;
  order.reserve(g.node_count());
  int cur = head;
  order.push_back(cur);
  while (g.out_degree(cur) == 1) {
    cur = g.edge(*g.out_begin(cur)).dst;
    order.push_back(cur);
  }
  return order;
}

std::string graph_to_json(const InfluenceGraph& g) {
  json j;
  j["version"] = 1;
  j["kind"] = kind_name(g.kind());
  j["nodes"] = g.node_count();
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"src", e.src}, {"dst", e.dst}, {"p", e.p}});
  j["edges"] = std::move(edges);
  return j.dump();
}

InfluenceGraph graph_from_json(const std::string& text) {
  const json j = json::parse(text);
  if (j.at("version").get<int>() != 1) throw std::invalid_argument("unsupported graph version");
  const GraphKind kind = kind_from_name(j.at("kind").get<std::string>());
  const int nodes = j.at("nodes").get<int>();
  std::vector<Edge> edges;
  for (const json& je : j.at("edges"))
    edges.push_back({je.at("src").get<int>(), je.at("dst").get<int>(), je.at("p").get<double>()});
  InfluenceGraph g(nodes, std::move(edges), kind);
  validate(g);
  return g;
}

void save_graph(const InfluenceGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << graph_to_json(g) << "\n";
}

InfluenceGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return graph_from_json(buf.str());
}

}  // namespace adgap
