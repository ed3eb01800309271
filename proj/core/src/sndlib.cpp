#include "netdelay/sndlib.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "netdelay/queueing.hpp"

namespace netdelay {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::string spaced;
  spaced.reserve(line.size() + 8);
  for (char c : line) {
    if (c == '(' || c == ')') {
      spaced.push_back(' ');
      spaced.push_back(c);
      spaced.push_back(' ');
    } else {
      spaced.push_back(c);
    }
  }
  std::istringstream is(spaced);
  std::vector<std::string> tokens;
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return tokens;
}

int paren_depth_change(const std::vector<std::string>& tokens) {
  int change = 0;
  for (const auto& t : tokens) {
    if (t == "(") ++change;
    if (t == ")") --change;
  }
  return change;
}

}  // namespace

NamedTopology parse_sndlib(const std::string& text, const std::string& source) {
  NamedTopology result;
  result.source = source;
  std::unordered_map<std::string, int> node_index;
  std::set<std::pair<int, int>> seen_edges;

  enum class Section { None, Nodes, Links, Skipped };
  Section section = Section::None;
  int skip_depth = 0;

  std::istringstream is(text);
  std::string raw_line;
  int line_no = 0;
  while (std::getline(is, raw_line)) {
    ++line_no;
    const auto hash = raw_line.find('#');
    std::string line = hash == std::string::npos ? raw_line : raw_line.substr(0, hash);
    if (!line.empty() && line[0] == '?') continue;  // format header
    std::vector<std::string> tokens = tokenize(line);
    if (tokens.empty()) continue;

    switch (section) {
      case Section::None: {
        const std::string& kw = tokens[0];
        if (kw == "NODES") {
          section = Section::Nodes;
        } else if (kw == "LINKS") {
          section = Section::Links;
        } else if (kw == "META" || kw == "DEMANDS" || kw == "ADMISSIBLE_PATHS") {
          section = Section::Skipped;
          skip_depth = paren_depth_change(tokens);
          if (skip_depth <= 0) section = Section::None;
        } else {
          throw ParseError("unexpected token '" + kw + "' outside any section", line_no);
        }
        break;
      }
      case Section::Skipped: {
        skip_depth += paren_depth_change(tokens);
        if (skip_depth <= 0) section = Section::None;
        break;
      }
      case Section::Nodes: {
        if (tokens[0] == ")") {
          section = Section::None;
          break;
        }
        const std::string& name = tokens[0];
        if (name == "(") throw ParseError("node entry must start with a name", line_no);
        if (node_index.count(name))
          throw ParseError("duplicate node name '" + name + "'", line_no);
        if (tokens.size() > 1 &&
            !(tokens.size() == 5 && tokens[1] == "(" && tokens[4] == ")"))
          throw ParseError("malformed node entry for '" + name + "'", line_no);
        node_index.emplace(name, static_cast<int>(result.node_names.size()));
        result.node_names.push_back(name);
        break;
      }
      case Section::Links: {
        if (tokens[0] == ")") {
          section = Section::None;
          break;
        }
        if (tokens.size() < 5 || tokens[1] != "(" || tokens[4] != ")")
          throw ParseError("malformed link entry", line_no);
        const std::string& src = tokens[2];
        const std::string& dst = tokens[3];
        auto it_src = node_index.find(src);
        if (it_src == node_index.end()) throw UnknownNode(src, line_no);
        auto it_dst = node_index.find(dst);
        if (it_dst == node_index.end()) throw UnknownNode(dst, line_no);
        if (it_src->second == it_dst->second) break;  // degenerate self-link
        const int lo = std::min(it_src->second, it_dst->second);
        const int hi = std::max(it_src->second, it_dst->second);
        if (seen_edges.insert({lo, hi}).second)
          result.topology.edges.emplace_back(lo, hi);
        break;
      }
    }
  }
  if (section != Section::None) throw ParseError("unterminated section at end of input", line_no);
  if (result.node_names.empty()) throw ParseError("no NODES section found", line_no);
  result.topology.node_count = static_cast<int>(result.node_names.size());
  return result;
}

NamedTopology load_sndlib_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos) name = name.substr(0, dot);
  return parse_sndlib(buffer.str(), name);
}

std::vector<Sample> sndlib_eval_set(const NamedTopology& topo, const GenConfig& cfg,
                                    const std::vector<std::uint64_t>& seeds) {
  const Topology& t = topo.topology;
  Topology lcc = largest_connected_component(t.node_count, t.edges);
  if (lcc.node_count != t.node_count)
    throw DegenerateGraph("topology '" + topo.source + "' is not connected");

  std::vector<Sample> samples;
  samples.reserve(seeds.size());
  for (std::uint64_t seed : seeds) {
    Rng rng = make_rng(seed, "sndlib-sample");
    Sample s;
    s.net = randomize_network(t, cfg, rng);
    s.label = average_delay(s.net, solve_intensities(s.net)).average_delay;
    s.meta.family = "sndlib";
    s.meta.seed = seed;
    s.meta.n = t.node_count;
    s.meta.source = topo.source;
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace netdelay
