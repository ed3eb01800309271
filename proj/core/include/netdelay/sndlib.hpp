#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "netdelay/topology.hpp"

// Reader for SNDlib native (plain-text) topology files. Only the NODES and
// LINKS sections are consumed; META, DEMANDS and the remaining sections are
// skipped, as are '#' comments and all link attributes. Parallel links
// collapse to one undirected edge. The XML variant is not supported.

namespace netdelay {

struct NamedTopology {
  Topology topology;
  std::vector<std::string> node_names;  // index -> declared name
  std::string source;                   // file name or caller-supplied tag
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

class UnknownNode : public std::runtime_error {
 public:
  UnknownNode(const std::string& name, int line)
      : std::runtime_error("line " + std::to_string(line) + ": link endpoint '" + name +
                           "' is not declared in NODES"),
        name(name) {}
  std::string name;
};

NamedTopology parse_sndlib(const std::string& text, const std::string& source = "");

NamedTopology load_sndlib_file(const std::string& path);

// Applies the standard randomization to a parsed topology once per seed and
// labels each resulting network analytically. Utilization bounds come from
// cfg; the topology itself must be connected.
std::vector<Sample> sndlib_eval_set(const NamedTopology& topo, const GenConfig& cfg,
                                    const std::vector<std::uint64_t>& seeds);

}  // namespace netdelay
