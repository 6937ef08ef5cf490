#pragma once

#include <vector>

namespace kep {

template <typename Allowed, typename Fn>
void for_each_proper_path(const CompatibilityGraph& g, int arcs, const Allowed& allowed, const Fn& fn) {
  if (arcs < 1) return;
  std::vector<NodeId> path;
  std::vector<char> on_path(static_cast<std::size_t>(g.num_nodes()), 0);
  auto extend = [&](auto& self, NodeId v) -> void {
    path.push_back(v);
    on_path[static_cast<std::size_t>(v)] = 1;
    if (static_cast<int>(path.size()) == arcs + 1) {
      fn(static_cast<const std::vector<NodeId>&>(path));
    } else {
      for (int a : g.out_arcs(v)) {
        const NodeId t = g.arc(a).target;
        if (!on_path[static_cast<std::size_t>(t)] && allowed(t)) self(self, t);
      }
    }
    on_path[static_cast<std::size_t>(v)] = 0;
    path.pop_back();
  };
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (allowed(v)) extend(extend, v);
  }
}

}  // namespace kep
