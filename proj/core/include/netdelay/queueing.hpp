#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Exact analytic model of open networks of M/M/1 queues: traffic balance
// plus Little's law. Used as the label oracle for every dataset in the
// project. All functions are pure; safe to call from any number of threads.

namespace netdelay {

struct Arc {
  int src = 0;
  int dst = 0;
  double routing = 0.0;  // probability of forwarding src -> dst
};

// Directed queueing network. The residual routing mass 1 - sum_w r_vw at a
// node is the probability of leaving the network there; it is implicit and
// never stored.
struct QueueNetwork {
  int node_count = 0;
  std::vector<Arc> arcs;
  std::vector<double> external_intensity;  // per-node arrival rate from outside
  std::vector<double> service_rate;        // per-node, strictly positive
};

struct TrafficSolution {
  std::vector<double> intensity;     // per-node total arrival rate
  std::vector<double> queue_length;  // per-node mean number in system
  double average_delay = 0.0;        // network-wide mean sojourn time
};

class SingularSystem : public std::runtime_error {
 public:
  explicit SingularSystem(const std::string& what) : std::runtime_error(what) {}
};

class NoConvergence : public std::runtime_error {
 public:
  NoConvergence(const std::string& what, int iterations)
      : std::runtime_error(what), iterations(iterations) {}
  int iterations;
};

class UnstableNode : public std::runtime_error {
 public:
  UnstableNode(int node, double intensity, double service_rate)
      : std::runtime_error("node " + std::to_string(node) + " is unstable: arrival rate " +
                           std::to_string(intensity) + " >= service rate " +
                           std::to_string(service_rate)),
        node(node) {}
  int node;
};

// Checks every structural invariant of a QueueNetwork. Returns one message
// per violated constraint, empty when the network is valid. Violations are
// data, not exceptions.
std::vector<std::string> validate(const QueueNetwork& net);

// Solves the traffic balance equations
//
//   lambda_v = Lambda_v + sum_w r_wv lambda_w
//
// by a direct dense LU solve of (I - R^T) lambda = Lambda. Throws
// SingularSystem when the system is singular to working precision (a closed
// routing loop with no exit). Requires validate(net) to be empty.
std::vector<double> solve_intensities(const QueueNetwork& net);

// Same fixed point by iteration lambda <- Lambda + R^T lambda starting from
// Lambda, stopping when the max component change drops below tol. Throws
// NoConvergence after max_iter sweeps.
std::vector<double> solve_intensities_fixed_point(const QueueNetwork& net, double tol = 1e-12,
                                                  int max_iter = 10000);

// Little's law. L_v = lambda_v / (mu_v - lambda_v), W = sum L / sum Lambda.
// Throws UnstableNode if any lambda_v >= mu_v.
TrafficSolution average_delay(const QueueNetwork& net, const std::vector<double>& intensity);

}  // namespace netdelay
