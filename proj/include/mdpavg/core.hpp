#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mdpavg/mdp.hpp"

namespace mdpavg {

/// Vertices of `alive` with a directed path inside `alive` to some target.
///
/// Backward breadth-first search over in-edges. `targets` must be a subset of
/// `alive`. When `work` is given, the in-degree of every reached vertex is added
/// to it (one count per scanned edge).
VertexMask reverse_reachable(const Digraph& graph, const VertexMask& targets, const VertexMask& alive,
                             std::uint64_t* work = nullptr);

/// Random attractor of `u` inside the subgraph induced by `alive`.
///
/// Least fixed point that adds random vertices with some edge into the set and
/// player-1 vertices whose alive successors all lie in the set.
VertexMask random_attractor(const Mdp& mdp, const VertexMask& u, const VertexMask& alive);

struct SolveResult {
  VertexMask winning;
  std::size_t iterations = 0;
  /// Attractor removed at each continuing iteration, in removal order.
  std::vector<std::vector<Vertex>> removals;
  /// Edge scans across all reachability and attractor passes.
  std::uint64_t work = 0;
  /// |Z| of the first iteration: the reverse reachable set of B in the full graph.
  std::size_t first_reach_size = 0;
};

/// Classical almost-sure Büchi algorithm: repeatedly compute the vertices
/// reaching B, stop if that is everything alive, else delete the random
/// attractor of the rest.
///
/// If a removal empties the graph the final empty reachability pass still
/// counts as an iteration and the winning set is empty.
SolveResult classical_buchi(const Mdp& mdp);

/// Bottom strongly-connected components of the subgraph induced by `alive`.
/// Each component is sorted; components are ordered by their smallest vertex.
std::vector<std::vector<Vertex>> bsccs(const Digraph& graph, const VertexMask& alive);

inline constexpr std::uint64_t kOracleStrategyLimit = 10'000'000;

/// Almost-sure winning set by brute force over pure memoryless strategies.
///
/// A vertex wins under a strategy iff every bottom SCC of the induced chain
/// reachable from it contains a Büchi vertex. Throws CapacityError when the
/// number of strategies exceeds kOracleStrategyLimit.
VertexMask oracle_almost_sure(const Mdp& mdp);

/// Instance family on which the classical algorithm needs stages+1 iterations.
///
/// Vertex 0 is a Büchi player-1 vertex with a self-loop. Stage i (1-based)
/// owns player-1 vertices u_i = 3i-2, c_i = 3i-1 and random vertex r_i = 3i:
/// u_i -> {c_i, r_{i-1}}, c_i -> {u_i, r_{i-1}}, r_i -> {u_i, 0}; stage 1 has
/// no r_0 edges. Iteration i drains stage i.
Mdp gen_worst_case(std::size_t stages);

}  // namespace mdpavg
