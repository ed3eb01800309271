#pragma once

#include <cstdint>
#include <string>

#include "netdelay/queueing.hpp"

namespace netdelay {

struct SampleMeta {
  std::string family;  // "er", "ba", or "sndlib"
  std::uint64_t seed = 0;
  int n = 0;           // node count of the final network
  std::string source;  // instance name for sndlib topologies, empty otherwise
};

// A labeled training/evaluation example: one queueing network together with
// its analytic average delay in raw time units.
struct Sample {
  QueueNetwork net;
  double label = 0.0;
  SampleMeta meta;
};

}  // namespace netdelay
