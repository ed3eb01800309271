#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netdelay/rng.hpp"
#include "netdelay/sample.hpp"

// Random topology generation and parameter randomization.
//
// Pipeline for one sample: draw a topology (Erdos-Renyi or Barabasi-Albert),
// keep the largest connected component, expand undirected edges into arc
// pairs, assign uniform routing with an implicit exit probability, draw
// normalized external demands, solve for internal intensities, and set
// service rates from random target utilizations. Every step is a pure
// function of the RNG stream, so generation of distinct samples can run in
// parallel.

namespace netdelay {

// Undirected simple graph; edges stored as (lo, hi) pairs.
struct Topology {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
};

enum class GraphFamily { ER, BA };

struct GenConfig {
  GraphFamily family = GraphFamily::ER;
  int n = 40;            // ER node count before LCC extraction
  int n_min = 10;        // BA node count range (inclusive)
  int n_max = 40;
  double p = 0.0;        // ER edge probability; 0 means the 2/n default
  int m = 2;             // BA attachments per new node
  double u_lo = 0.3;     // target utilization range
  double u_hi = 0.9;
  std::uint64_t base_seed = 0;
};

class DegenerateGraph : public std::runtime_error {
 public:
  explicit DegenerateGraph(const std::string& what) : std::runtime_error(what) {}
};

class GenerationFailed : public std::runtime_error {
 public:
  explicit GenerationFailed(const std::string& what) : std::runtime_error(what) {}
};

// G(n, p): each of the C(n,2) node pairs is an edge independently with
// probability p. Returns the largest connected component, re-indexed
// 0..k-1 in original node order. Throws DegenerateGraph when the component
// has fewer than 2 nodes.
Topology er_graph(int n, double p, Rng& rng);

// Barabasi-Albert preferential attachment. The seed graph is the complete
// graph on m+1 nodes; each subsequent node attaches to m distinct existing
// nodes chosen with probability proportional to current degree. Connected
// by construction, so the edge count is exactly C(m+1,2) + m*(n-m-1).
Topology ba_graph(int n, int m, Rng& rng);

// Induced subgraph on the largest connected component. Ties are broken in
// favor of the component containing the smallest original node index;
// surviving nodes are re-indexed preserving their original order. Isolated
// nodes count as singleton components.
Topology largest_connected_component(int node_count,
                                     const std::vector<std::pair<int, int>>& edges);

// Turns a connected topology into a stable queueing network:
//   - every undirected edge becomes two directed arcs;
//   - a node with out-degree d routes with probability 1/(d+1) per arc,
//     leaving probability 1/(d+1) for exiting the network;
//   - external demands are uniform(0,1) draws normalized to sum to 1;
//   - service rates are lambda_v / u_v with u_v ~ U(u_lo, u_hi).
QueueNetwork randomize_network(const Topology& topo, const GenConfig& cfg, Rng& rng);

// Full pipeline for one labeled sample; deterministic in (cfg, seed).
// Retries internally (fresh derived stream per attempt) when the LCC
// degenerates, up to 100 times, then throws GenerationFailed.
Sample generate_sample(const GenConfig& cfg, std::uint64_t seed);

// Per-sample seed stream for dataset generation: index-derived from the
// config's base seed, independent of generation order.
std::uint64_t sample_seed(const GenConfig& cfg, std::uint64_t sample_index);

// Generates `count` samples, optionally across threads. Output order is by
// sample index and independent of thread count.
std::vector<Sample> generate_dataset(const GenConfig& cfg, int count, int threads = 1);

}  // namespace netdelay
