#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mdpavg/mdp.hpp"

namespace mdpavg {

/// One degree class of the constant out-degree model: `count` vertices of
/// out-degree `degree`, of which the first `targets` are Büchi vertices.
struct DegreeClass {
  std::uint32_t degree = 0;
  std::size_t count = 0;
  std::size_t targets = 0;

  friend bool operator==(const DegreeClass&, const DegreeClass&) = default;
};

/// Constant out-degree model on `vertices` vertices.
///
/// Vertex ids are assigned to classes in order: the first `count` ids of the
/// first class, then the next class, and so on.
struct DegreeSpec {
  std::size_t vertices = 0;
  std::vector<DegreeClass> classes;

  /// Throws SpecError unless degrees are strictly increasing with
  /// 2 <= d_min <= d_max < n, class counts sum to n, 0 <= t_i <= a_i and t >= 1.
  void validate() const;

  std::size_t distinct_degrees() const noexcept { return classes.size(); }
  std::size_t target_count() const noexcept;
  std::uint32_t min_degree() const noexcept { return classes.front().degree; }
  std::uint32_t max_degree() const noexcept { return classes.back().degree; }

  /// First vertex id of class i.
  std::size_t class_offset(std::size_t i) const noexcept;
  std::vector<std::uint32_t> vertex_degrees() const;
  std::vector<Vertex> target_vertices() const;

  /// `d:a:t,d:a:t,...`; `vertices` = 0 means "sum of the counts".
  static DegreeSpec parse(std::string_view classes, std::size_t vertices = 0);
  std::string to_string() const;

  friend bool operator==(const DegreeSpec&, const DegreeSpec&) = default;
};

/// Directed G(n,p) on `vertices` vertices with a Büchi set of `target_count`
/// vertices and per-vertex player-1 probability.
struct GnpSpec {
  std::size_t vertices = 0;
  double edge_prob = 0.0;
  double player1_prob = 0.5;
  std::size_t target_count = 1;

  void validate() const;
};

struct SampledGraph {
  Digraph graph;
  std::vector<Vertex> targets;
};

/// Each vertex gets a uniformly random d_v-subset of all n vertices (itself
/// included) as its successor set, independently across vertices. Successor
/// lists are sorted. Targets are the first t_i ids of each class.
SampledGraph sample_constant_outdegree(const DegreeSpec& spec, std::uint64_t seed);

/// Each ordered pair (u, v), u != v, is an edge independently with probability
/// p. Uses geometric skipping, so the cost is proportional to the edge count.
Digraph sample_gnp(std::size_t vertices, double edge_prob, std::uint64_t seed);
inline Digraph sample_gnp(const GnpSpec& spec, std::uint64_t seed) {
  spec.validate();
  return sample_gnp(spec.vertices, spec.edge_prob, seed);
}

/// Either a number of Büchi vertices to place uniformly or an explicit set.
using TargetChoice = std::variant<std::size_t, std::vector<Vertex>>;

/// Turns a sampled graph into an MDP: each vertex is player 1 with probability
/// `player1_prob`, else random; the Büchi set is drawn uniformly among subsets
/// of the requested size (or taken as given); vertices without out-edges get a
/// self-loop.
Mdp to_mdp(const Digraph& graph, double player1_prob, const TargetChoice& targets, std::uint64_t seed);

}  // namespace mdpavg
