#pragma once

#include <cstdint>
#include <vector>

#include "netdelay/queueing.hpp"
#include "netdelay/rng.hpp"

// Discrete-event simulation of the queueing model exactly as analyzed:
// Poisson external arrivals per node, exponential single-server FIFO
// service with infinite buffers, independent per-completion routing. Serves
// as the empirical cross-check of the analytic delay.

namespace netdelay {

struct SimResult {
  double average_delay = 0.0;            // mean sojourn of counted packets
  double standard_error = 0.0;           // batch-means SE (20 batches)
  std::vector<double> mean_queue_length; // per-node time average over the run
  std::int64_t packets_completed = 0;    // packets contributing to the mean
  std::int64_t warmup_discarded = 0;
  double horizon = 0.0;                  // simulated time until the last exit
};

// Injects exactly `packets` external packets, runs until all of them leave,
// and estimates the average network delay from the packets injected after
// the first `warmup`. Deterministic in (net, packets, warmup, seed): the
// event queue breaks time ties by insertion sequence.
SimResult simulate(const QueueNetwork& net, std::int64_t packets, std::int64_t warmup, Rng& rng);

}  // namespace netdelay
