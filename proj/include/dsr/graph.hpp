#ifndef DSR_GRAPH_HPP
#define DSR_GRAPH_HPP

#include <cstddef>
#include <vector>

#include "dsr/feeder.hpp"

namespace dsr {

enum class IndicatorKind { Cycle, Path };

/// Membership vector over edges describing one simple cycle or one simple
/// path of the infrastructure graph. Edge direction is ignored.
struct EdgeIndicator {
  std::vector<uint8_t> bits;  // per edge position
  IndicatorKind kind = IndicatorKind::Cycle;
  int source = -1, target = -1;  // path endpoints (bus ids); -1 for cycles
  std::vector<int> edges;        // member edge positions, ascending

  std::size_t size() const { return edges.size(); }
};

/// All simple cycles of the undirected graph, each exactly once, in
/// canonical order (lexicographic on the ascending edge-position list).
/// Throws "cycle budget exceeded" past the cap.
std::vector<EdgeIndicator> enumerate_cycles(const Feeder& feeder,
                                            std::size_t budget = 10000);

/// All simple paths from each non-black-start generator bus to every bus in
/// S_B and to the root, grouped by source bus ascending, canonical order
/// within each group.
std::vector<EdgeIndicator> enumerate_nbs_paths(const Feeder& feeder,
                                               std::size_t budget = 100000);

/// All simple paths from each black-start bus i to the root and to every
/// black-start bus of strictly higher rank (rating desc, ties to the
/// smaller bus id), grouped by source bus ascending.
std::vector<EdgeIndicator> enumerate_bs_paths(const Feeder& feeder,
                                              std::size_t budget = 100000);

/// True iff the closed-edge subgraph is acyclic (union-find; independent of
/// enumerate_cycles). y is indexed by edge position.
bool is_forest(const Feeder& feeder, const std::vector<uint8_t>& y);

/// Connected components of the closed-edge subgraph restricted to energized
/// buses. Each island is an ascending list of bus ids; islands are ordered
/// by their smallest bus id.
std::vector<std::vector<int>> energized_components(const Feeder& feeder,
                                                   const std::vector<uint8_t>& x,
                                                   const std::vector<uint8_t>& y);

/// True iff rating of bus a outranks bus b (higher rating, ties to the
/// smaller id). Shared ordering for path targets and PV selection.
bool outranks(const Bus& a, const Bus& b);

}  // namespace dsr

#endif
