#include "adgap/feedback.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace adgap {

bool PartialRealization::is_seed(int u) const {
  return std::find(seeds_.begin(), seeds_.end(), u) != seeds_.end();
}

std::vector<int> PartialRealization::active_set() const {
  std::vector<int> out;
  out.reserve(active_count_);
  for (int u = 0; u < static_cast<int>(active_.size()); ++u)
    if (active_[u]) out.push_back(u);
  return out;
}

std::uint64_t PartialRealization::active_mask() const {
  if (active_.size() > 64) throw std::invalid_argument("active_mask needs node count <= 64");
  std::uint64_t mask = 0;
  for (int u = 0; u < static_cast<int>(active_.size()); ++u)
    if (active_[u]) mask |= 1ULL << u;
  return mask;
}

int PartialRealization::unobserved_count() const {
  int count = 0;
  for (EdgeState s : edge_states_)
    if (s == EdgeState::Unobserved) ++count;
  return count;
}

void observe_in_place(const InfluenceGraph& g, const LiveEdgeGraph& live,
                      PartialRealization& psi, int u, bool check_consistency) {
  if (u < 0 || u >= g.node_count()) throw std::invalid_argument("seed out of range");
  if (psi.is_seed(u)) throw std::invalid_argument("node is already a seed");
  if (check_consistency) {
    for (int e = 0; e < g.edge_count(); ++e) {
      const EdgeState s = psi.edge_states_[e];
      if (s == EdgeState::Live && !live.live(e))
        throw std::invalid_argument("live-edge graph inconsistent with observation");
      if (s == EdgeState::Blocked && live.live(e))
        throw std::invalid_argument("live-edge graph inconsistent with observation");
    }
  }
  psi.seeds_.push_back(u);
  if (psi.active_[u]) return;  // cascade from u was already revealed
  psi.active_[u] = 1;
  ++psi.active_count_;
  std::vector<int> stack{u};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const int* it = g.out_begin(v); it != g.out_end(v); ++it) {
      const int e = *it;
      if (psi.edge_states_[e] == EdgeState::Unobserved)
        psi.edge_states_[e] = live.live(e) ? EdgeState::Live : EdgeState::Blocked;
      const int w = g.edge(e).dst;
      if (psi.edge_states_[e] == EdgeState::Live && !psi.active_[w]) {
        psi.active_[w] = 1;
        ++psi.active_count_;
        stack.push_back(w);
      }
    }
  }
}

PartialRealization observe(const InfluenceGraph& g, const LiveEdgeGraph& live,
                           const PartialRealization& psi, int u) {
  PartialRealization next = psi;
  observe_in_place(g, live, next, u, /*check_consistency=*/true);
  return next;
}

bool is_subrealization(const PartialRealization& psi, const PartialRealization& psi_prime) {
  for (int s : psi.seeds())
    if (!psi_prime.is_seed(s)) return false;
  const auto& a = psi.edge_states();
  const auto& b = psi_prime.edge_states();
  for (std::size_t e = 0; e < a.size(); ++e)
    if (a[e] != EdgeState::Unobserved && b[e] != a[e]) return false;
  return true;
}

std::vector<int> boundary(const InfluenceGraph& g, const PartialRealization& psi) {
  std::vector<int> out;
  for (int v = 0; v < g.node_count(); ++v) {
    if (!psi.active(v)) continue;
    for (const int* it = g.out_begin(v); it != g.out_end(v); ++it) {
      if (!psi.active(g.edge(*it).dst)) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

void consistent_extensions(const InfluenceGraph& g, const PartialRealization& psi,
                           const std::function<void(const LiveEdgeGraph&, double)>& visit,
                           const Caps& caps) {
  std::vector<int> unobserved;
  for (int e = 0; e < g.edge_count(); ++e)
    if (psi.edge_state(e) == EdgeState::Unobserved) unobserved.push_back(e);
  const int u = static_cast<int>(unobserved.size());
  if (u > caps.max_enum_edges)
    throw CapExceeded("extension enumeration over " + std::to_string(u) +
                      " unobserved edges exceeds cap " + std::to_string(caps.max_enum_edges));
  LiveEdgeGraph live(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e)
    if (psi.edge_state(e) == EdgeState::Live) live.set_live(e, true);
  for (std::uint64_t mask = 0; mask < (1ULL << u); ++mask) {
    double w = 1.0;
    for (int i = 0; i < u; ++i) {
      const int e = unobserved[i];
      const bool on = (mask >> i) & 1;
      live.set_live(e, on);
      w *= on ? g.edge(e).p : 1.0 - g.edge(e).p;
    }
    visit(live, w);
  }
}

namespace {

// Depth-first branch over frontier edges. `pending` holds edge ids whose
// source is newly active and whose state is still undecided.
void cascade_branch(const InfluenceGraph& g, std::uint64_t base_active,
                    std::uint64_t added, std::vector<int>& pending, std::size_t depth,
                    double prob, const std::function<void(std::uint64_t, double)>& visit) {
  while (depth < pending.size()) {
    const int e = pending[depth];
    const int dst = g.edge(e).dst;
    if ((base_active | added) & (1ULL << dst)) {
      // Target already active: the edge state is revealed but cannot change
      // anything downstream, so both branches collapse into one.
      ++depth;
      continue;
    }
    const double p = g.edge(e).p;
    if (p > 0.0) {
      const std::size_t mark = pending.size();
      std::uint64_t live_added = added | (1ULL << dst);
      for (const int* it = g.out_begin(dst); it != g.out_end(dst); ++it)
        pending.push_back(*it);
      cascade_branch(g, base_active, live_added, pending, depth + 1, prob * p, visit);
      pending.resize(mark);
    }
    if (p < 1.0) {
      prob *= 1.0 - p;
      ++depth;
      continue;
    }
    return;  // p == 1: the blocked branch has zero mass
  }
  visit(added, prob);
}

}  // namespace

void enumerate_cascade_outcomes(const InfluenceGraph& g, std::uint64_t active_mask, int u,
                                const std::function<void(std::uint64_t, double)>& visit) {
  if (g.node_count() > 64)
    throw std::invalid_argument("cascade enumeration needs node count <= 64");
  if (active_mask & (1ULL << u)) {
    visit(0, 1.0);
    return;
  }
  std::vector<int> pending;
  for (const int* it = g.out_begin(u); it != g.out_end(u); ++it) pending.push_back(*it);
  cascade_branch(g, active_mask, 1ULL << u, pending, 0, 1.0, visit);
}

double conditional_marginal_gain(const InfluenceGraph& g, const PartialRealization& psi,
                                 int u, const Caps& caps) {
  (void)caps;
  if (psi.active(u)) return 0.0;
  double gain = 0.0;
  enumerate_cascade_outcomes(g, psi.active_mask(), u, [&](std::uint64_t added, double prob) {
    gain += prob * std::popcount(added);
  });
  return gain;
}

double conditional_marginal_gain_mc(const InfluenceGraph& g, const PartialRealization& psi,
                                    int u, long samples, std::uint64_t seed) {
  if (psi.active(u)) return 0.0;
  const McStats stats = mc_accumulate(samples, seed, /*stream=*/3, 1, [&](Rng& rng) {
    thread_local CascadeWorkspace ws;
    LiveEdgeGraph live(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
      if (psi.edge_state(e) == EdgeState::Live)
        live.set_live(e, true);
      else if (psi.edge_state(e) == EdgeState::Unobserved)
        live.set_live(e, rng.bernoulli(g.edge(e).p));
    }
    ws.reset(g.node_count());
    for (int s : psi.active_set()) ws.activate(g, live, s);
    const int before = ws.active_count();
    ws.activate(g, live, u);
    return static_cast<long>(ws.active_count() - before);
  });
  return stats.mean;
}

}  // namespace adgap
