#include "mdpavg/core.hpp"

#include <algorithm>
#include <string>

#include "mdpavg/error.hpp"

namespace mdpavg {
namespace {

void check_subset(const VertexMask& sub, const VertexMask& super, std::size_t n, const char* what) {
  if (sub.size() != n || super.size() != n) throw InputError(std::string(what) + ": mask size mismatch");
  for (std::size_t v = 0; v < n; ++v) {
    if (sub[v] && !super[v]) {
      throw InputError(std::string(what) + ": vertex " + std::to_string(v) + " is not alive");
    }
  }
}

VertexMask backward_reach(const Digraph& graph, const VertexMask& targets, const VertexMask& alive,
                          std::uint64_t& work) {
  const std::size_t n = graph.size();
  VertexMask in(n, 0);
  std::vector<Vertex> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (targets[v]) {
      in[v] = 1;
      queue.push_back(static_cast<Vertex>(v));
    }
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex w = queue[head];
    work += graph.in_degree(w);
    for (Vertex p : graph.predecessors(w)) {
      if (alive[p] && !in[p]) {
        in[p] = 1;
        queue.push_back(p);
      }
    }
  }
  return in;
}

// `alive_outdeg[v]` is the number of successors of v inside `alive`. On return
// it is correct for alive minus the attractor, for every vertex left alive.
VertexMask attractor_impl(const Mdp& mdp, const VertexMask& u, const VertexMask& alive,
                          std::vector<std::uint32_t>& alive_outdeg, std::uint64_t& work) {
  VertexMask in(u);
  std::vector<Vertex> queue = mask_members(u);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex w = queue[head];
    work += mdp.graph().in_degree(w);
    for (Vertex p : mdp.predecessors(w)) {
      if (!alive[p] || in[p]) continue;
      if (mdp.kind(p) == VertexKind::Random || --alive_outdeg[p] == 0) {
        in[p] = 1;
        queue.push_back(p);
      }
    }
  }
  return in;
}

std::vector<std::uint32_t> alive_out_degrees(const Digraph& graph, const VertexMask& alive) {
  std::vector<std::uint32_t> deg(graph.size(), 0);
  for (std::size_t v = 0; v < graph.size(); ++v) {
    if (!alive[v]) continue;
    for (Vertex w : graph.successors(static_cast<Vertex>(v))) deg[v] += alive[w] ? 1 : 0;
  }
  return deg;
}

// Iterative Tarjan over the alive-induced subgraph. `succ(v)` yields a range of
// successors; `emit` receives each SCC as it is completed (reverse topological
// order) and returns nothing.
template <typename Succ, typename Emit>
void tarjan(std::size_t n, const VertexMask& alive, Succ&& succ, Emit&& emit) {
  constexpr std::uint32_t kUnvisited = 0xffffffffu;
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<Vertex> stack;
  struct Frame {
    Vertex v;
    std::size_t next;
  };
  std::vector<Frame> call;
  std::vector<Vertex> component;
  std::uint32_t counter = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (!alive[root] || index[root] != kUnvisited) continue;
    call.push_back({static_cast<Vertex>(root), 0});
    index[root] = low[root] = counter++;
    stack.push_back(static_cast<Vertex>(root));
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& frame = call.back();
      const Vertex v = frame.v;
      auto out = succ(v);
      if (frame.next < out.size()) {
        const Vertex w = out[frame.next++];
        if (!alive[w]) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        component.clear();
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          component.push_back(w);
        } while (w != v);
        emit(component);
      }
      call.pop_back();
      if (!call.empty()) {
        const Vertex parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
}

// Marks the members of every bottom SCC that has no Büchi vertex.
template <typename Succ>
void mark_losing_bottoms(std::size_t n, const VertexMask& alive, const VertexMask& buchi, Succ&& succ,
                         std::vector<std::uint32_t>& comp_of, VertexMask& bad) {
  std::fill(comp_of.begin(), comp_of.end(), 0xffffffffu);
  std::fill(bad.begin(), bad.end(), 0);
  std::uint32_t next_id = 0;
  tarjan(n, alive, succ, [&](const std::vector<Vertex>& comp) {
    const std::uint32_t id = next_id++;
    for (Vertex v : comp) comp_of[v] = id;
    // Tarjan emits a component only after all components it can reach, so any
    // edge leaving `comp` points to an already-labelled component.
    bool bottom = true;
    bool accepting = false;
    for (Vertex v : comp) {
      accepting = accepting || buchi[v];
      for (Vertex w : succ(v)) {
        if (alive[w] && comp_of[w] != id) bottom = false;
      }
    }
    if (bottom && !accepting) {
      for (Vertex v : comp) bad[v] = 1;
    }
  });
}

}  // namespace

VertexMask reverse_reachable(const Digraph& graph, const VertexMask& targets, const VertexMask& alive,
                             std::uint64_t* work) {
  check_subset(targets, alive, graph.size(), "reverse_reachable");
  std::uint64_t scans = 0;
  VertexMask result = backward_reach(graph, targets, alive, scans);
  if (work) *work += scans;
  return result;
}

VertexMask random_attractor(const Mdp& mdp, const VertexMask& u, const VertexMask& alive) {
  check_subset(u, alive, mdp.size(), "random_attractor");
  auto outdeg = alive_out_degrees(mdp.graph(), alive);
  // A player-1 vertex with no alive successor satisfies "all successors in
  // the set" vacuously. Never happens inside classical_buchi.
  VertexMask seed = u;
  for (std::size_t v = 0; v < mdp.size(); ++v) {
    if (alive[v] && outdeg[v] == 0 && mdp.kind(static_cast<Vertex>(v)) == VertexKind::Player1) seed[v] = 1;
  }
  std::uint64_t scans = 0;
  return attractor_impl(mdp, seed, alive, outdeg, scans);
}

SolveResult classical_buchi(const Mdp& mdp) {
  const std::size_t n = mdp.size();
  SolveResult result;
  VertexMask alive = full_mask(n);
  std::vector<std::uint32_t> outdeg(n);
  for (std::size_t v = 0; v < n; ++v) outdeg[v] = static_cast<std::uint32_t>(mdp.graph().out_degree(static_cast<Vertex>(v)));

  for (;;) {
    ++result.iterations;
    VertexMask targets(n, 0);
    for (std::size_t v = 0; v < n; ++v) targets[v] = alive[v] && mdp.is_buchi(static_cast<Vertex>(v));
    VertexMask reach = backward_reach(mdp.graph(), targets, alive, result.work);
    if (result.iterations == 1) result.first_reach_size = mask_count(reach);

    VertexMask rest(n, 0);
    bool any = false;
    for (std::size_t v = 0; v < n; ++v) {
      rest[v] = alive[v] && !reach[v];
      any = any || rest[v];
    }
    if (!any) {
      result.winning = std::move(reach);
      return result;
    }
    VertexMask attr = attractor_impl(mdp, rest, alive, outdeg, result.work);
    std::vector<Vertex> removed;
    for (std::size_t v = 0; v < n; ++v) {
      if (attr[v]) {
        removed.push_back(static_cast<Vertex>(v));
        alive[v] = 0;
      }
    }
    result.removals.push_back(std::move(removed));
  }
}

std::vector<std::vector<Vertex>> bsccs(const Digraph& graph, const VertexMask& alive) {
  const std::size_t n = graph.size();
  if (alive.size() != n) throw InputError("bsccs: mask size mismatch");
  std::vector<std::uint32_t> comp_of(n, 0xffffffffu);
  std::uint32_t next_id = 0;
  std::vector<std::vector<Vertex>> out;
  auto succ = [&](Vertex v) { return graph.successors(v); };
  tarjan(n, alive, succ, [&](const std::vector<Vertex>& comp) {
    const std::uint32_t id = next_id++;
    for (Vertex v : comp) comp_of[v] = id;
    for (Vertex v : comp) {
      for (Vertex w : graph.successors(v)) {
        if (alive[w] && comp_of[w] != id) return;
      }
    }
    auto sorted = comp;
    std::sort(sorted.begin(), sorted.end());
    out.push_back(std::move(sorted));
  });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

VertexMask oracle_almost_sure(const Mdp& mdp) {
  const std::size_t n = mdp.size();
  std::vector<Vertex> controlled;
  std::uint64_t strategies = 1;
  for (std::size_t v = 0; v < n; ++v) {
    if (mdp.kind(static_cast<Vertex>(v)) != VertexKind::Player1) continue;
    controlled.push_back(static_cast<Vertex>(v));
    strategies *= mdp.graph().out_degree(static_cast<Vertex>(v));
    if (strategies > kOracleStrategyLimit) {
      throw CapacityError("oracle: more than " + std::to_string(kOracleStrategyLimit) +
                          " memoryless strategies");
    }
  }

  // choice[v] is the successor rank picked at player-1 vertex v. The odometer
  // advances the highest-id vertex fastest, giving lexicographic order by
  // vertex id then neighbour rank.
  std::vector<std::size_t> choice(n, 0);
  auto succ = [&](Vertex v) -> std::span<const Vertex> {
    auto all = mdp.successors(v);
    if (mdp.kind(v) == VertexKind::Player1) return all.subspan(choice[v], 1);
    return all;
  };

  const VertexMask alive = full_mask(n);
  VertexMask winning(n, 0);
  std::vector<std::uint32_t> comp_of(n);
  VertexMask bad(n), reaches_bad(n);
  std::vector<Vertex> queue;
  for (;;) {
    mark_losing_bottoms(n, alive, mdp.buchi(), succ, comp_of, bad);
    // Backward closure of the losing bottoms in the induced chain.
    reaches_bad = bad;
    queue = mask_members(bad);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex w = queue[head];
      for (Vertex p : mdp.predecessors(w)) {
        if (reaches_bad[p]) continue;
        if (mdp.kind(p) == VertexKind::Player1 && mdp.successors(p)[choice[p]] != w) continue;
        reaches_bad[p] = 1;
        queue.push_back(p);
      }
    }
    bool all = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (!reaches_bad[v]) winning[v] = 1;
      all = all && winning[v];
    }
    if (all) break;

    std::size_t pos = controlled.size();
    while (pos > 0) {
      const Vertex v = controlled[pos - 1];
      if (++choice[v] < mdp.graph().out_degree(v)) break;
      choice[v] = 0;
      --pos;
    }
    if (pos == 0) break;
  }
  return winning;
}

Mdp gen_worst_case(std::size_t stages) {
  if (stages == 0) throw InputError("gen_worst_case: stages must be positive");
  const std::size_t n = 3 * stages + 1;
  std::vector<std::vector<Vertex>> succ(n);
  std::vector<VertexKind> kinds(n, VertexKind::Player1);
  VertexMask buchi(n, 0);
  succ[0] = {0};
  buchi[0] = 1;
  for (std::size_t i = 1; i <= stages; ++i) {
    const auto u = static_cast<Vertex>(3 * i - 2);
    const auto c = static_cast<Vertex>(3 * i - 1);
    const auto r = static_cast<Vertex>(3 * i);
    succ[u] = {c};
    succ[c] = {u};
    if (i > 1) {
      const auto prev = static_cast<Vertex>(3 * (i - 1));
      succ[u].push_back(prev);
      succ[c].push_back(prev);
    }
    succ[r] = {u, 0};
    kinds[r] = VertexKind::Random;
  }
  return Mdp(succ, std::move(kinds), std::move(buchi));
}

}  // namespace mdpavg
