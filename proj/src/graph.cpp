#include "dsr/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>

namespace dsr {

namespace {

using Adjacency = std::vector<std::vector<std::pair<int, int>>>;

EdgeIndicator make_indicator(const Feeder& feeder, std::vector<int> edge_positions,
                             IndicatorKind kind, int source, int target) {
  EdgeIndicator ind;
  ind.kind = kind;
  ind.source = source;
  ind.target = target;
  ind.bits.assign(feeder.edges.size(), 0);
  std::sort(edge_positions.begin(), edge_positions.end());
  for (int pos : edge_positions) ind.bits[pos] = 1;
  ind.edges = std::move(edge_positions);
  return ind;
}

bool lex_less(const EdgeIndicator& a, const EdgeIndicator& b) {
  return a.edges < b.edges;
}

// All simple paths source -> target, appended as indicators.
void all_simple_paths(const Feeder& feeder, const Adjacency& adj, int source,
                      int target, std::size_t budget, std::size_t& used,
                      std::vector<EdgeIndicator>& out) {
  std::vector<int> path;
  std::vector<uint8_t> visited(feeder.buses.size(), 0);
  std::function<void(int)> dfs = [&](int u) {
    if (u == target) {
      if (++used > budget) throw Error("path budget exceeded");
      out.push_back(make_indicator(feeder, path, IndicatorKind::Path,
                                   feeder.buses[source].id,
                                   feeder.buses[target].id));
      return;
    }
    visited[u] = 1;
    for (auto [pos, w] : adj[u]) {
      if (visited[w]) continue;
      path.push_back(pos);
      dfs(w);
      path.pop_back();
    }
    visited[u] = 0;
  };
  dfs(source);
}

// Paths from each source to each of its targets, canonically ordered:
// grouped by source ascending, then lexicographically by edge list.
std::vector<EdgeIndicator> enumerate_paths(
    const Feeder& feeder,
    const std::vector<std::pair<int, std::vector<int>>>& source_targets,
    std::size_t budget) {
  const Adjacency adj = feeder.adjacency();
  std::vector<EdgeIndicator> out;
  std::size_t used = 0;
  for (const auto& [source, targets] : source_targets) {
    std::vector<EdgeIndicator> group;
    for (int target : targets)
      all_simple_paths(feeder, adj, source, target, budget, used, group);
    std::sort(group.begin(), group.end(), lex_less);
    out.insert(out.end(), group.begin(), group.end());
  }
  return out;
}

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool join(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

bool outranks(const Bus& a, const Bus& b) {
  if (a.rating != b.rating) return a.rating > b.rating;
  return a.id < b.id;
}

std::vector<EdgeIndicator> enumerate_cycles(const Feeder& feeder,
                                            std::size_t budget) {
  const Adjacency adj = feeder.adjacency();
  std::vector<EdgeIndicator> out;
  std::vector<int> path;
  std::vector<uint8_t> on_path(feeder.buses.size(), 0);

  // Every simple cycle is reported exactly once: it is discovered from its
  // smallest bus s (other vertices restricted to > s), and of the two
  // traversal directions only the one whose first edge id is smaller than
  // its closing edge id is kept.
  for (int s = 0; s < static_cast<int>(feeder.buses.size()); ++s) {
    std::function<void(int)> dfs = [&](int u) {
      on_path[u] = 1;
      for (auto [pos, w] : adj[u]) {
        if (!path.empty() && pos == path.back()) continue;  // no U-turn
        if (w == s) {
          if (!path.empty() &&
              feeder.edges[path.front()].id < feeder.edges[pos].id) {
            if (out.size() >= budget) throw Error("cycle budget exceeded");
            path.push_back(pos);
            out.push_back(make_indicator(feeder, path, IndicatorKind::Cycle, -1, -1));
            path.pop_back();
          }
          continue;
        }
        if (w < s || on_path[w]) continue;
        path.push_back(pos);
        dfs(w);
        path.pop_back();
      }
      on_path[u] = 0;
    };
    dfs(s);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<EdgeIndicator> enumerate_nbs_paths(const Feeder& feeder,
                                               std::size_t budget) {
  std::vector<std::pair<int, std::vector<int>>> source_targets;
  for (int i : feeder.nbs_buses()) {
    std::vector<int> targets = feeder.bs_buses();
    targets.insert(targets.begin(), 0);  // the root is always a target
    source_targets.push_back({i, targets});
  }
  return enumerate_paths(feeder, source_targets, budget);
}

std::vector<EdgeIndicator> enumerate_bs_paths(const Feeder& feeder,
                                              std::size_t budget) {
  std::vector<std::pair<int, std::vector<int>>> source_targets;
  for (int i : feeder.bs_buses()) {
    std::vector<int> targets{0};
    for (int j : feeder.bs_buses())
      if (j != i && outranks(feeder.buses[j], feeder.buses[i]))
        targets.push_back(j);
    source_targets.push_back({i, targets});
  }
  return enumerate_paths(feeder, source_targets, budget);
}

bool is_forest(const Feeder& feeder, const std::vector<uint8_t>& y) {
  Dsu dsu(feeder.buses.size());
  for (std::size_t pos = 0; pos < feeder.edges.size(); ++pos)
    if (y[pos] && !dsu.join(feeder.edges[pos].from, feeder.edges[pos].to))
      return false;
  return true;
}

std::vector<std::vector<int>> energized_components(const Feeder& feeder,
                                                   const std::vector<uint8_t>& x,
                                                   const std::vector<uint8_t>& y) {
  Dsu dsu(feeder.buses.size());
  for (std::size_t pos = 0; pos < feeder.edges.size(); ++pos) {
    const Edge& e = feeder.edges[pos];
    if (y[pos] && x[e.from] && x[e.to]) dsu.join(e.from, e.to);
  }
  std::map<int, std::vector<int>> by_root;
  for (const Bus& b : feeder.buses)
    if (x[b.id]) by_root[dsu.find(b.id)].push_back(b.id);
  std::vector<std::vector<int>> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace dsr
