#include "mdpavg/mdp.hpp"

#include <algorithm>
#include <string>

#include "mdpavg/error.hpp"

namespace mdpavg {

VertexMask make_mask(std::size_t n, std::span<const Vertex> members) {
  VertexMask mask(n, 0);
  for (Vertex v : members) {
    if (v >= n) throw InputError("vertex " + std::to_string(v) + " out of range");
    mask[v] = 1;
  }
  return mask;
}

VertexMask full_mask(std::size_t n) { return VertexMask(n, 1); }

std::vector<Vertex> mask_members(const VertexMask& mask) {
  std::vector<Vertex> out;
  for (std::size_t v = 0; v < mask.size(); ++v) {
    if (mask[v]) out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

std::size_t mask_count(const VertexMask& mask) {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(), [](auto b) { return b != 0; }));
}

Digraph::Digraph(const std::vector<std::vector<Vertex>>& successors) {
  const std::size_t n = successors.size();
  out_offset_.assign(n + 1, 0);
  in_offset_.assign(n + 1, 0);
  std::vector<std::uint8_t> seen(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex w : successors[v]) {
      if (w >= n) {
        throw InputError("edge " + std::to_string(v) + "->" + std::to_string(w) + " leaves the graph");
      }
      if (seen[w]) {
        throw InputError("duplicate edge " + std::to_string(v) + "->" + std::to_string(w));
      }
      seen[w] = 1;
      ++in_offset_[w + 1];
    }
    for (Vertex w : successors[v]) seen[w] = 0;
    out_offset_[v + 1] = out_offset_[v] + successors[v].size();
  }
  out_target_.reserve(out_offset_[n]);
  for (const auto& succ : successors) out_target_.insert(out_target_.end(), succ.begin(), succ.end());

  for (std::size_t v = 0; v < n; ++v) in_offset_[v + 1] += in_offset_[v];
  in_source_.resize(out_target_.size());
  std::vector<std::size_t> cursor(in_offset_.begin(), in_offset_.end() - 1);
  for (std::size_t v = 0; v < n; ++v) {
    for (Vertex w : successors[v]) in_source_[cursor[w]++] = static_cast<Vertex>(v);
  }
}

bool Digraph::has_edge(Vertex from, Vertex to) const {
  auto succ = successors(from);
  return std::find(succ.begin(), succ.end(), to) != succ.end();
}

std::vector<std::vector<Vertex>> Digraph::adjacency() const {
  std::vector<std::vector<Vertex>> adj(size());
  for (std::size_t v = 0; v < size(); ++v) {
    auto succ = successors(static_cast<Vertex>(v));
    adj[v].assign(succ.begin(), succ.end());
  }
  return adj;
}

Mdp::Mdp(Digraph graph, std::vector<VertexKind> kinds, VertexMask buchi)
    : graph_(std::move(graph)), kinds_(std::move(kinds)), buchi_(std::move(buchi)) {
  const std::size_t n = graph_.size();
  if (kinds_.size() != n) throw InputError("kind vector does not cover every vertex");
  if (buchi_.size() != n) throw InputError("Büchi mask does not cover every vertex");
  for (auto& b : buchi_) b = b ? 1 : 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (graph_.out_degree(static_cast<Vertex>(v)) == 0) {
      throw InputError("vertex " + std::to_string(v) + " has no outgoing edge");
    }
  }
}

}  // namespace mdpavg
