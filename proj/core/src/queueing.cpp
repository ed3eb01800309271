#include "netdelay/queueing.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace netdelay {

namespace {

// Union-find for the weak-connectivity check.
class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

std::vector<std::string> validate(const QueueNetwork& net) {
  std::vector<std::string> violations;
  const int n = net.node_count;
  if (n < 1) {
    violations.push_back("node_count must be positive, got " + std::to_string(n));
    return violations;
  }
  if (static_cast<int>(net.external_intensity.size()) != n)
    violations.push_back("external_intensity has " + std::to_string(net.external_intensity.size()) +
                         " entries for " + std::to_string(n) + " nodes");
  if (static_cast<int>(net.service_rate.size()) != n)
    violations.push_back("service_rate has " + std::to_string(net.service_rate.size()) +
                         " entries for " + std::to_string(n) + " nodes");
  if (!violations.empty()) return violations;

  std::set<std::pair<int, int>> seen;
  std::vector<double> row_sum(n, 0.0);
  for (std::size_t i = 0; i < net.arcs.size(); ++i) {
    const Arc& a = net.arcs[i];
    if (a.src < 0 || a.src >= n || a.dst < 0 || a.dst >= n) {
      violations.push_back("arc " + std::to_string(i) + " endpoint out of range");
      continue;
    }
    if (a.src == a.dst)
      violations.push_back("self-loop at node " + std::to_string(a.src));
    if (!seen.insert({a.src, a.dst}).second)
      violations.push_back("duplicate arc " + std::to_string(a.src) + "->" + std::to_string(a.dst));
    if (!(a.routing >= 0.0 && a.routing <= 1.0))
      violations.push_back("routing probability " + fmt(a.routing) + " on arc " +
                           std::to_string(a.src) + "->" + std::to_string(a.dst) +
                           " outside [0, 1]");
    else
      row_sum[a.src] += a.routing;
  }
  for (int v = 0; v < n; ++v) {
    if (row_sum[v] > 1.0 + 1e-12)
      violations.push_back("routing row sum " + fmt(row_sum[v]) + " > 1 at node " +
                           std::to_string(v));
  }

  double total_external = 0.0;
  for (int v = 0; v < n; ++v) {
    if (!(net.external_intensity[v] >= 0.0))
      violations.push_back("external intensity " + fmt(net.external_intensity[v]) + " at node " +
                           std::to_string(v) + " must be nonnegative");
    else
      total_external += net.external_intensity[v];
    if (!(net.service_rate[v] > 0.0))
      violations.push_back("service rate must be positive at node " + std::to_string(v));
  }
  if (!(total_external > 0.0))
    violations.push_back("total external intensity must be positive");

  if (n > 1) {
    DisjointSet ds(n);
    for (const Arc& a : net.arcs)
      if (a.src >= 0 && a.src < n && a.dst >= 0 && a.dst < n) ds.unite(a.src, a.dst);
    const int root = ds.find(0);
    for (int v = 1; v < n; ++v) {
      if (ds.find(v) != root) {
        violations.push_back("graph is not weakly connected (node " + std::to_string(v) +
                             " unreachable from node 0)");
        break;
      }
    }
  }
  return violations;
}

std::vector<double> solve_intensities(const QueueNetwork& net) {
  const int n = net.node_count;
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  for (const Arc& a : net.arcs) system(a.dst, a.src) -= a.routing;  // I - R^T

  const double max_norm = system.cwiseAbs().maxCoeff();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
  const double pivot_floor = 1e-12 * max_norm;
  for (int i = 0; i < n; ++i) {
    if (std::abs(lu.matrixLU()(i, i)) < pivot_floor)
      throw SingularSystem("traffic balance system is singular to working precision "
                           "(closed routing loop with no exit)");
  }

  Eigen::Map<const Eigen::VectorXd> external(net.external_intensity.data(), n);
  Eigen::VectorXd lambda = lu.solve(external);

  // Residual of the balance equations, scaled by the solution magnitude.
  Eigen::VectorXd residual = system * lambda - external;
  const double tol = 1e-10 * std::max(1.0, lambda.cwiseAbs().maxCoeff());
  if (residual.cwiseAbs().maxCoeff() >= tol)
    throw SingularSystem("traffic balance solve did not meet residual tolerance");

  return std::vector<double>(lambda.data(), lambda.data() + n);
}

std::vector<double> solve_intensities_fixed_point(const QueueNetwork& net, double tol,
                                                  int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  const int n = net.node_count;
  std::vector<double> lambda = net.external_intensity;
  std::vector<double> next(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    std::copy(net.external_intensity.begin(), net.external_intensity.end(), next.begin());
    for (const Arc& a : net.arcs) next[a.dst] += a.routing * lambda[a.src];
    double max_change = 0.0;
    for (int v = 0; v < n; ++v) max_change = std::max(max_change, std::abs(next[v] - lambda[v]));
    lambda.swap(next);
    if (max_change < tol) return lambda;
  }
  throw NoConvergence("fixed-point iteration did not converge in " + std::to_string(max_iter) +
                          " sweeps (routing spectral radius too close to 1)",
                      max_iter);
}

TrafficSolution average_delay(const QueueNetwork& net, const std::vector<double>& intensity) {
  const int n = net.node_count;
  if (static_cast<int>(intensity.size()) != n)
    throw std::invalid_argument("intensity vector size does not match node count");
  TrafficSolution sol;
  sol.intensity = intensity;
  sol.queue_length.resize(n);
  double total_queue = 0.0;
  double total_external = 0.0;
  for (int v = 0; v < n; ++v) {
    if (intensity[v] >= net.service_rate[v])
      throw UnstableNode(v, intensity[v], net.service_rate[v]);
    sol.queue_length[v] = intensity[v] / (net.service_rate[v] - intensity[v]);
    total_queue += sol.queue_length[v];
    total_external += net.external_intensity[v];
  }
  sol.average_delay = total_queue / total_external;
  return sol;
}

}  // namespace netdelay
