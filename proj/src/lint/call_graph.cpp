#include "hlsr/lint/call_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace hlsr::lint {

bool CallGraph::has_edge(const std::string& from, const std::string& to) const {
  return std::any_of(edges.begin(), edges.end(), [&](const CallEdge& e) { return e.from == from && e.to == to; });
}

std::vector<std::vector<std::string>> CallGraph::cycles() const {
  std::map<std::string, std::size_t> id;
  for (std::size_t i = 0; i < nodes.size(); ++i) id[nodes[i]] = i;
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  std::vector<bool> self(nodes.size(), false);
  for (const auto& e : edges) {
    auto a = id.find(e.from), b = id.find(e.to);
    if (a == id.end() || b == id.end()) continue;
    adj[a->second].push_back(b->second);
    if (a->second == b->second) self[a->second] = true;
  }

  // Tarjan's algorithm.
  std::vector<int> index(nodes.size(), -1), low(nodes.size(), 0);
  std::vector<bool> on_stack(nodes.size(), false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  int counter = 0;
  std::function<void(std::size_t)> connect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        connect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < nodes.size(); ++v)
    if (index[v] < 0) connect(v);

  std::vector<std::vector<std::size_t>> cyclic;
  for (auto& c : comps) {
    if (c.size() > 1 || self[c[0]]) {
      std::sort(c.begin(), c.end());
      cyclic.push_back(c);
    }
  }
  std::sort(cyclic.begin(), cyclic.end());
  std::vector<std::vector<std::string>> out;
  for (const auto& c : cyclic) {
    std::vector<std::string> names;
    for (std::size_t i : c) names.push_back(nodes[i]);
    out.push_back(std::move(names));
  }
  return out;
}

CallGraph build_call_graph(const SourceUnit& unit) {
  CallGraph g;
  for (const auto& f : unit.functions) g.nodes.push_back(f.name);
  for (const auto& f : unit.functions) {
    for (const auto& c : f.calls) {
      g.edges.push_back({f.name, c.callee, c.loc});
      if (c.external) g.externals.insert(c.callee);
    }
  }
  return g;
}

}  // namespace hlsr::lint
