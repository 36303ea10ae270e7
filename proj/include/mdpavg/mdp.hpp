#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace mdpavg {

using Vertex = std::uint32_t;

/// Membership mask over vertex ids; nonzero means "in the set".
using VertexMask = std::vector<std::uint8_t>;

VertexMask make_mask(std::size_t n, std::span<const Vertex> members = {});
VertexMask full_mask(std::size_t n);
std::vector<Vertex> mask_members(const VertexMask& mask);
std::size_t mask_count(const VertexMask& mask);

/// Directed graph in compressed adjacency form with both edge directions.
///
/// Successor order is kept exactly as given so that text round trips are
/// lossless. Duplicate successors and out-of-range endpoints are rejected.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(const std::vector<std::vector<Vertex>>& successors);

  std::size_t size() const noexcept { return out_offset_.empty() ? 0 : out_offset_.size() - 1; }
  std::size_t edge_count() const noexcept { return out_target_.size(); }

  std::span<const Vertex> successors(Vertex v) const {
    return {out_target_.data() + out_offset_[v], out_target_.data() + out_offset_[v + 1]};
  }
  std::span<const Vertex> predecessors(Vertex v) const {
    return {in_source_.data() + in_offset_[v], in_source_.data() + in_offset_[v + 1]};
  }
  std::size_t out_degree(Vertex v) const { return out_offset_[v + 1] - out_offset_[v]; }
  std::size_t in_degree(Vertex v) const { return in_offset_[v + 1] - in_offset_[v]; }

  bool has_edge(Vertex from, Vertex to) const;
  std::vector<std::vector<Vertex>> adjacency() const;

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.out_offset_ == b.out_offset_ && a.out_target_ == b.out_target_;
  }

 private:
  std::vector<std::size_t> out_offset_;
  std::vector<Vertex> out_target_;
  std::vector<std::size_t> in_offset_;
  std::vector<Vertex> in_source_;
};

enum class VertexKind : std::uint8_t { Player1, Random };

/// Game graph of a Markov decision process with a Büchi vertex set.
///
/// Transition probabilities are not represented: almost-sure analysis only
/// depends on which edges exist. Every vertex must have an out-edge.
class Mdp {
 public:
  Mdp(Digraph graph, std::vector<VertexKind> kinds, VertexMask buchi);
  Mdp(const std::vector<std::vector<Vertex>>& successors, std::vector<VertexKind> kinds,
      VertexMask buchi)
      : Mdp(Digraph(successors), std::move(kinds), std::move(buchi)) {}

  std::size_t size() const noexcept { return graph_.size(); }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  const Digraph& graph() const noexcept { return graph_; }

  std::span<const Vertex> successors(Vertex v) const { return graph_.successors(v); }
  std::span<const Vertex> predecessors(Vertex v) const { return graph_.predecessors(v); }
  VertexKind kind(Vertex v) const { return kinds_[v]; }
  const std::vector<VertexKind>& kinds() const noexcept { return kinds_; }
  bool is_buchi(Vertex v) const { return buchi_[v] != 0; }
  const VertexMask& buchi() const noexcept { return buchi_; }

  friend bool operator==(const Mdp& a, const Mdp& b) {
    return a.graph_ == b.graph_ && a.kinds_ == b.kinds_ && a.buchi_ == b.buchi_;
  }

 private:
  Digraph graph_;
  std::vector<VertexKind> kinds_;
  VertexMask buchi_;
};

}  // namespace mdpavg
