#include "netdelay/topology.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <thread>

#include "netdelay/queueing.hpp"

namespace netdelay {

Topology largest_connected_component(int node_count,
                                     const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> component(node_count, -1);
  std::vector<std::vector<int>> adjacency(node_count);
  for (const auto& [a, b] : edges) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  int best_root = -1;
  int best_size = 0;
  std::vector<int> stack;
  for (int start = 0; start < node_count; ++start) {
    if (component[start] >= 0) continue;
    int size = 0;
    stack.push_back(start);
    component[start] = start;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++size;
      for (int w : adjacency[v]) {
        if (component[w] < 0) {
          component[w] = start;
          stack.push_back(w);
        }
      }
    }
    // Strict > keeps the component with the smallest original root on ties;
    // roots are visited in increasing index order.
    if (size > best_size) {
      best_size = size;
      best_root = start;
    }
  }

  Topology result;
  std::vector<int> new_index(node_count, -1);
  for (int v = 0; v < node_count; ++v) {
    if (component[v] == best_root) new_index[v] = result.node_count++;
  }
  for (const auto& [a, b] : edges) {
    if (new_index[a] >= 0 && new_index[b] >= 0)
      result.edges.emplace_back(std::min(new_index[a], new_index[b]),
                                std::max(new_index[a], new_index[b]));
  }
  return result;
}

Topology er_graph(int n, double p, Rng& rng) {
  if (n < 2) throw std::invalid_argument("er_graph requires n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("er_graph requires p in (0, 1]");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  Topology lcc = largest_connected_component(n, edges);
  if (lcc.node_count < 2)
    throw DegenerateGraph("largest connected component has fewer than 2 nodes");
  return lcc;
}

Topology ba_graph(int n, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("ba_graph requires m >= 1");
  if (n < m + 1) throw std::invalid_argument("ba_graph requires n >= m + 1");

  Topology topo;
  topo.node_count = n;
  std::vector<int> degree(n, 0);
  auto add_edge = [&](int a, int b) {
    topo.edges.emplace_back(std::min(a, b), std::max(a, b));
    ++degree[a];
    ++degree[b];
  };

  // Complete seed graph on the first m+1 nodes.
  for (int i = 0; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) add_edge(i, j);

  std::vector<int> chosen;
  for (int v = m + 1; v < n; ++v) {
    chosen.clear();
    int degree_total = 2 * static_cast<int>(topo.edges.size());
    // m distinct targets, degree-proportional, degrees frozen while v picks.
    while (static_cast<int>(chosen.size()) < m) {
      auto ticket = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(degree_total)));
      int target = -1;
      for (int w = 0; w < v; ++w) {
        ticket -= degree[w];
        if (ticket < 0) {
          target = w;
          break;
        }
      }
      if (std::find(chosen.begin(), chosen.end(), target) != chosen.end()) continue;
      chosen.push_back(target);
    }
    for (int w : chosen) add_edge(v, w);
  }
  return topo;
}

QueueNetwork randomize_network(const Topology& topo, const GenConfig& cfg, Rng& rng) {
  const int n = topo.node_count;
  if (n < 2) throw std::invalid_argument("randomize_network requires at least 2 nodes");

  QueueNetwork net;
  net.node_count = n;
  std::vector<int> degree(n, 0);
  for (const auto& [a, b] : topo.edges) {
    ++degree[a];
    ++degree[b];
  }
  for (const auto& [a, b] : topo.edges) {
    net.arcs.push_back({a, b, 1.0 / (degree[a] + 1)});
    net.arcs.push_back({b, a, 1.0 / (degree[b] + 1)});
  }

  net.external_intensity.resize(n);
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    net.external_intensity[v] = rng.uniform_open();
    total += net.external_intensity[v];
  }
  for (int v = 0; v < n; ++v) net.external_intensity[v] /= total;

  // Positive exit probability at every node keeps the routing spectral
  // radius below 1, so the balance system is never singular here.
  net.service_rate.assign(n, 1.0);  // placeholder so validate() passes
  std::vector<double> lambda = solve_intensities(net);
  for (int v = 0; v < n; ++v) {
    double utilization = rng.uniform_open(cfg.u_lo, cfg.u_hi);
    net.service_rate[v] = lambda[v] / utilization;
  }
  return net;
}

Sample generate_sample(const GenConfig& cfg, std::uint64_t seed) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng = make_rng(seed, "sample", static_cast<std::uint64_t>(attempt));
    Topology topo;
    try {
      if (cfg.family == GraphFamily::ER) {
        const double p = cfg.p > 0.0 ? cfg.p : 2.0 / cfg.n;
        topo = er_graph(cfg.n, p, rng);
      } else {
        const int n = static_cast<int>(rng.uniform_int(cfg.n_min, cfg.n_max));
        topo = ba_graph(n, cfg.m, rng);
      }
    } catch (const DegenerateGraph&) {
      continue;
    }
    Sample sample;
    sample.net = randomize_network(topo, cfg, rng);
    sample.label = average_delay(sample.net, solve_intensities(sample.net)).average_delay;
    sample.meta.family = cfg.family == GraphFamily::ER ? "er" : "ba";
    sample.meta.seed = seed;
    sample.meta.n = sample.net.node_count;
    return sample;
  }
  throw GenerationFailed("no usable topology after 100 attempts");
}

std::uint64_t sample_seed(const GenConfig& cfg, std::uint64_t sample_index) {
  return derive_seed(cfg.base_seed, "dataset-sample", sample_index);
}

std::vector<Sample> generate_dataset(const GenConfig& cfg, int count, int threads) {
  std::vector<Sample> samples(count);
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i)
      samples[i] = generate_sample(cfg, sample_seed(cfg, static_cast<std::uint64_t>(i)));
    return samples;
  }
  std::vector<std::thread> pool;
  std::atomic<int> failures{0};
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) {
        try {
          samples[i] = generate_sample(cfg, sample_seed(cfg, static_cast<std::uint64_t>(i)));
        } catch (...) {
          failures.fetch_add(1);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failures.load() > 0) throw GenerationFailed("sample generation failed in worker thread");
  return samples;
}

}  // namespace netdelay
