#include "adgap/cascade.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace adgap {

LiveEdgeGraph sample_live_edges(const InfluenceGraph& g, Rng& rng) {
  LiveEdgeGraph live(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e)
    if (rng.bernoulli(g.edge(e).p)) live.set_live(e, true);
  return live;
}

void enumerate_live_edges(const InfluenceGraph& g,
                          const std::function<void(const LiveEdgeGraph&)>& visit,
                          const Caps& caps) {
  const int m = g.edge_count();
  if (m > caps.max_enum_edges)
    throw CapExceeded("live-edge enumeration over " + std::to_string(m) +
                      " edges exceeds cap " + std::to_string(caps.max_enum_edges));
  LiveEdgeGraph live(m);
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    double w = 1.0;
    for (int e = 0; e < m; ++e) {
      const bool on = (mask >> e) & 1;
      live.set_live(e, on);
      w *= on ? g.edge(e).p : 1.0 - g.edge(e).p;
    }
    live.weight = w;
    visit(live);
  }
}

void CascadeWorkspace::reset(int node_count) {
  active_.assign(node_count, 0);
  stack_.clear();
  active_count_ = 0;
}

int CascadeWorkspace::activate(const InfluenceGraph& g, const LiveEdgeGraph& live, int seed) {
  if (active_[seed]) return 0;
  int added = 0;
  active_[seed] = 1;
  ++added;
  stack_.push_back(seed);
  while (!stack_.empty()) {
    const int v = stack_.back();
    stack_.pop_back();
    for (const int* it = g.out_begin(v); it != g.out_end(v); ++it) {
      const Edge& e = g.edge(*it);
      if (live.live(*it) && !active_[e.dst]) {
        active_[e.dst] = 1;
        ++added;
        stack_.push_back(e.dst);
      }
    }
  }
  active_count_ += added;
  return added;
}

std::vector<int> reachable(const InfluenceGraph& g, const LiveEdgeGraph& live,
                           const std::vector<int>& seeds) {
  CascadeWorkspace ws;
  ws.reset(g.node_count());
  for (int s : seeds) ws.activate(g, live, s);
  std::vector<int> out;
  out.reserve(ws.active_count());
  for (int u = 0; u < g.node_count(); ++u)
    if (ws.active(u)) out.push_back(u);
  return out;
}

SpreadEstimate spread_exact(const InfluenceGraph& g, const std::vector<int>& seeds,
                            const Caps& caps) {
  double total = 0.0;
  CascadeWorkspace ws;
  enumerate_live_edges(g, [&](const LiveEdgeGraph& live) {
    ws.reset(g.node_count());
    for (int s : seeds) ws.activate(g, live, s);
    total += *live.weight * ws.active_count();
  }, caps);
  return {total, 0.0, Method::Exact, 0};
}

std::vector<double> per_node_activation_exact(const InfluenceGraph& g,
                                              const std::vector<int>& seeds,
                                              const Caps& caps) {
  std::vector<double> probs(g.node_count(), 0.0);
  CascadeWorkspace ws;
  enumerate_live_edges(g, [&](const LiveEdgeGraph& live) {
    ws.reset(g.node_count());
    for (int s : seeds) ws.activate(g, live, s);
    for (int u = 0; u < g.node_count(); ++u)
      if (ws.active(u)) probs[u] += *live.weight;
  }, caps);
  return probs;
}

McStats mc_accumulate(long samples, std::uint64_t master_seed, std::uint64_t stream,
                      int threads, const std::function<long(Rng&)>& sample_once) {
  std::vector<std::int64_t> unused;
  return mc_accumulate_tallied(
      samples, master_seed, stream, threads, 0,
      [&](Rng& rng, std::vector<std::int64_t>&) { return sample_once(rng); }, unused);
}

McStats mc_accumulate_tallied(long samples, std::uint64_t master_seed, std::uint64_t stream,
                              int threads, std::size_t slots,
                              const std::function<long(Rng&, std::vector<std::int64_t>&)>& sample_once,
                              std::vector<std::int64_t>& tallies) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  constexpr long kChunk = 1024;
  const long chunks = (samples + kChunk - 1) / kChunk;
  threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, chunks)));

  // Integer sums are associative, so per-chunk partials can be merged in any
  // order without changing the result.
  std::vector<std::int64_t> sums(threads, 0), sumsqs(threads, 0);
  std::vector<std::vector<std::int64_t>> counts(threads, std::vector<std::int64_t>(slots, 0));
  std::atomic<long> next_chunk{0};

  auto worker = [&](int wid) {
    while (true) {
      const long c = next_chunk.fetch_add(1);
      if (c >= chunks) break;
      Rng rng(substream_seed(master_seed, stream, static_cast<std::uint64_t>(c)));
      const long begin = c * kChunk;
      const long end = std::min(samples, begin + kChunk);
      for (long i = begin; i < end; ++i) {
        const long v = sample_once(rng, counts[wid]);
        sums[wid] += v;
        sumsqs[wid] += static_cast<std::int64_t>(v) * v;
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }

  std::int64_t sum = 0, sumsq = 0;
  for (int w = 0; w < threads; ++w) {
    sum += sums[w];
    sumsq += sumsqs[w];
  }
  tallies.assign(slots, 0);
  for (int w = 0; w < threads; ++w)
    for (std::size_t s = 0; s < slots; ++s) tallies[s] += counts[w][s];

  McStats stats;
  stats.samples = samples;
  stats.mean = static_cast<double>(sum) / samples;
  if (samples > 1) {
    const double var =
        (static_cast<double>(sumsq) - static_cast<double>(sum) * stats.mean) / (samples - 1);
    stats.stderr_value = std::sqrt(std::max(0.0, var) / samples);
  }
  return stats;
}

SpreadEstimate spread_mc(const InfluenceGraph& g, const std::vector<int>& seeds,
                         long samples, std::uint64_t seed, int threads) {
  const McStats stats = mc_accumulate(samples, seed, /*stream=*/1, threads, [&](Rng& rng) {
    thread_local CascadeWorkspace ws;
    const LiveEdgeGraph live = sample_live_edges(g, rng);
    ws.reset(g.node_count());
    for (int s : seeds) ws.activate(g, live, s);
    return static_cast<long>(ws.active_count());
  });
  return {stats.mean, stats.stderr_value, Method::MonteCarlo, stats.samples};
}

std::vector<double> per_node_activation_mc(const InfluenceGraph& g,
                                           const std::vector<int>& seeds, long samples,
                                           std::uint64_t seed, int threads) {
  std::vector<std::int64_t> counts;
  mc_accumulate_tallied(
      samples, seed, /*stream=*/2, threads, g.node_count(),
      [&](Rng& rng, std::vector<std::int64_t>& tally) {
        thread_local CascadeWorkspace ws;
        const LiveEdgeGraph live = sample_live_edges(g, rng);
        ws.reset(g.node_count());
        for (int s : seeds) ws.activate(g, live, s);
        for (int u = 0; u < g.node_count(); ++u)
          if (ws.active(u)) ++tally[u];
        return static_cast<long>(ws.active_count());
      },
      counts);
  std::vector<double> probs(g.node_count());
  for (int u = 0; u < g.node_count(); ++u)
    probs[u] = static_cast<double>(counts[u]) / samples;
  return probs;
}

double line_spread_closed_form(const InfluenceGraph& g, const std::vector<int>& seeds) {
  const std::vector<int> order = line_order(g);
  const int n = g.node_count();
  if (n > 1) {
    const double q0 = g.edge(0).p;
    for (const Edge& e : g.edges())
      if (std::abs(e.p - q0) > 1e-15)
        throw std::invalid_argument("line closed form requires uniform edge probabilities");
  }
  std::vector<std::uint8_t> is_seed(n, 0);
  for (int s : seeds) {
    if (s < 0 || s >= n) throw std::invalid_argument("seed out of range");
    is_seed[s] = 1;
  }
  const double q = n > 1 ? g.edge(0).p : 0.0;
  double total = 0.0;
  long long dist = -1;  // distance to nearest seed predecessor; -1 = none yet
  for (int pos = 0; pos < n; ++pos) {
    const int node = order[pos];
    if (is_seed[node])
      dist = 0;
    else if (dist >= 0)
      ++dist;
    if (dist == 0)
      total += 1.0;
    else if (dist > 0)
      total += std::pow(q, static_cast<double>(dist));
  }
  return total;
}

}  // namespace adgap
