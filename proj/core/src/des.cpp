#include "netdelay/des.hpp"

#include <cmath>
#include <cstddef>
#include <deque>
#include <queue>
#include <stdexcept>

namespace netdelay {

namespace {

enum class EventKind : std::uint8_t { ExternalArrival, ServiceDone };

struct Event {
  double time;
  std::uint64_t sequence;  // tie-break: insertion order
  EventKind kind;
  int node;
};

struct EventLater {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.sequence > b.sequence;
  }
};

struct Packet {
  std::int64_t injection_index;
  double injected_at;
};

}  // namespace

SimResult simulate(const QueueNetwork& net, std::int64_t packets, std::int64_t warmup, Rng& rng) {
  if (packets <= 0) throw std::invalid_argument("packets must be positive");
  if (!(warmup >= 0 && warmup < packets))
    throw std::invalid_argument("require packets > warmup >= 0");

  const int n = net.node_count;
  std::vector<std::vector<std::pair<int, double>>> routes(n);  // (target, cumulative prob)
  for (const Arc& a : net.arcs) {
    double cum = routes[a.src].empty() ? 0.0 : routes[a.src].back().second;
    routes[a.src].emplace_back(a.dst, cum + a.routing);
  }

  std::priority_queue<Event, std::vector<Event>, EventLater> events;
  std::uint64_t sequence = 0;
  auto schedule = [&](double time, EventKind kind, int node) {
    events.push(Event{time, sequence++, kind, node});
  };

  std::vector<std::deque<Packet>> queue(n);
  std::vector<double> busy_integral(n, 0.0);      // integral of queue length over time
  std::vector<double> last_change(n, 0.0);
  std::vector<double> sojourn(static_cast<std::size_t>(packets), 0.0);

  for (int v = 0; v < n; ++v) {
    if (net.external_intensity[v] > 0.0)
      schedule(rng.exponential(net.external_intensity[v]), EventKind::ExternalArrival, v);
  }

  std::int64_t injected = 0;
  std::int64_t exited = 0;
  double now = 0.0;

  auto account = [&](int v, double time) {
    busy_integral[v] += static_cast<double>(queue[v].size()) * (time - last_change[v]);
    last_change[v] = time;
  };

  auto arrive = [&](int v, Packet pkt, double time) {
    account(v, time);
    queue[v].push_back(pkt);
    if (queue[v].size() == 1)
      schedule(time + rng.exponential(net.service_rate[v]), EventKind::ServiceDone, v);
  };

  while (!events.empty()) {
    Event ev = events.top();
    events.pop();
    now = ev.time;
    if (ev.kind == EventKind::ExternalArrival) {
      if (injected >= packets) continue;  // injection cap reached, let the network drain
      Packet pkt{injected++, now};
      arrive(ev.node, pkt, now);
      if (injected < packets)
        schedule(now + rng.exponential(net.external_intensity[ev.node]),
                 EventKind::ExternalArrival, ev.node);
    } else {
      account(ev.node, now);
      Packet pkt = queue[ev.node].front();
      queue[ev.node].pop_front();
      if (!queue[ev.node].empty())
        schedule(now + rng.exponential(net.service_rate[ev.node]), EventKind::ServiceDone,
                 ev.node);
      // Route onward or exit; the draw is memoryless per completion.
      const double u = rng.uniform();
      const auto& out = routes[ev.node];
      int target = -1;
      for (const auto& [node, cum] : out) {
        if (u < cum) {
          target = node;
          break;
        }
      }
      if (target >= 0) {
        arrive(target, pkt, now);
      } else {
        sojourn[static_cast<std::size_t>(pkt.injection_index)] = now - pkt.injected_at;
        ++exited;
      }
    }
  }
  if (exited != packets)
    throw std::logic_error("simulation drained without completing all packets");

  SimResult result;
  result.horizon = now;
  result.warmup_discarded = warmup;
  result.packets_completed = packets - warmup;
  result.mean_queue_length.resize(n);
  for (int v = 0; v < n; ++v) {
    account(v, now);
    result.mean_queue_length[v] = now > 0.0 ? busy_integral[v] / now : 0.0;
  }

  double total = 0.0;
  for (std::int64_t i = warmup; i < packets; ++i) total += sojourn[static_cast<std::size_t>(i)];
  result.average_delay = total / static_cast<double>(result.packets_completed);

  // Batch means over injection order: 20 contiguous batches.
  const int batches = 20;
  const std::int64_t kept = result.packets_completed;
  if (kept >= batches) {
    std::vector<double> batch_mean(batches, 0.0);
    for (int b = 0; b < batches; ++b) {
      const std::int64_t lo = warmup + kept * b / batches;
      const std::int64_t hi = warmup + kept * (b + 1) / batches;
      double s = 0.0;
      for (std::int64_t i = lo; i < hi; ++i) s += sojourn[static_cast<std::size_t>(i)];
      batch_mean[b] = s / static_cast<double>(hi - lo);
    }
    double mean = 0.0;
    for (double m : batch_mean) mean += m;
    mean /= batches;
    double var = 0.0;
    for (double m : batch_mean) var += (m - mean) * (m - mean);
    var /= (batches - 1);
    result.standard_error = std::sqrt(var / batches);
  }
  return result;
}

}  // namespace netdelay
