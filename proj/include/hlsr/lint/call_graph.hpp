#pragma once

#include <set>
#include <string>
#include <vector>

#include "hlsr/lint/source_unit.hpp"

namespace hlsr::lint {

struct CallEdge {
  std::string from;
  std::string to;
  SourceLoc loc;
};

/// Nodes are the functions defined in the unit, in definition order.
/// Calls to undefined functions are edges into `externals` (sinks).
struct CallGraph {
  std::vector<std::string> nodes;
  std::vector<CallEdge> edges;
  std::set<std::string> externals;

  bool has_edge(const std::string& from, const std::string& to) const;
  /// Strongly connected components that contain a cycle (size > 1, or a self loop).
  /// Members are listed in node order; components are ordered by their first member.
  std::vector<std::vector<std::string>> cycles() const;
};

CallGraph build_call_graph(const SourceUnit& unit);

}  // namespace hlsr::lint
