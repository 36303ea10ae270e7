#include <cmath>
#include <map>

#include "doctest.h"
#include "mdpavg/core.hpp"
#include "mdpavg/error.hpp"
#include "mdpavg/models.hpp"
#include "mdpavg/rng.hpp"

using namespace mdpavg;

namespace {

DegreeSpec uniform_spec(std::size_t n, std::uint32_t d, std::size_t t) {
  return DegreeSpec{n, {{d, n, t}}};
}

}  // namespace

TEST_CASE("degree spec validation and parsing") {
  CHECK_NOTHROW(uniform_spec(5, 2, 1).validate());
  CHECK_THROWS_AS((DegreeSpec{5, {{2, 4, 1}}}.validate()), SpecError);  // counts sum to n-1
  CHECK_THROWS_AS(uniform_spec(5, 1, 1).validate(), SpecError);
  CHECK_THROWS_AS(uniform_spec(5, 5, 1).validate(), SpecError);
  CHECK_THROWS_AS(uniform_spec(5, 2, 0).validate(), SpecError);
  CHECK_THROWS_AS(uniform_spec(5, 2, 6).validate(), SpecError);
  CHECK_THROWS_AS((DegreeSpec{6, {{3, 3, 1}, {2, 3, 0}}}.validate()), SpecError);
  CHECK_THROWS_AS((DegreeSpec{6, {{3, 3, 1}, {3, 3, 0}}}.validate()), SpecError);

  auto s = DegreeSpec::parse("2:3:1,3:4:0");
  CHECK(s.vertices == 7);
  CHECK(s.classes == std::vector<DegreeClass>{{2, 3, 1}, {3, 4, 0}});
  CHECK(s.to_string() == "2:3:1,3:4:0");
  CHECK(DegreeSpec::parse(s.to_string()) == s);
  CHECK(s.vertex_degrees() == std::vector<std::uint32_t>{2, 2, 2, 3, 3, 3, 3});
  CHECK(s.class_offset(1) == 3);

  CHECK_THROWS_AS(DegreeSpec::parse("2:3"), SpecError);
  CHECK_THROWS_AS(DegreeSpec::parse("2:x:1"), SpecError);
  CHECK_THROWS_AS(DegreeSpec::parse("2:5:1", 6), SpecError);
  CHECK_THROWS_AS(DegreeSpec::parse(""), SpecError);
}

TEST_CASE("constant out-degree graphs have the requested degrees and targets") {
  const DegreeSpec spec{9, {{2, 4, 1}, {3, 5, 2}}};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto g = sample_constant_outdegree(spec, seed);
    REQUIRE(g.graph.size() == 9);
    for (Vertex v = 0; v < 9; ++v) CHECK(g.graph.out_degree(v) == (v < 4 ? 2u : 3u));
    CHECK(g.targets == std::vector<Vertex>{0, 4, 5});
  }
  CHECK(sample_constant_outdegree(spec, 7).graph == sample_constant_outdegree(spec, 7).graph);
  CHECK_FALSE(sample_constant_outdegree(spec, 7).graph == sample_constant_outdegree(spec, 8).graph);
}

TEST_CASE("neighbour sets are uniform over all 2-subsets") {
  const auto spec = uniform_spec(5, 2, 1);
  const int samples = 100000;
  std::map<std::vector<Vertex>, int> freq;
  int self = 0;
  for (int i = 0; i < samples; ++i) {
    auto g = sample_constant_outdegree(spec, derive_seed(42, i));
    auto s = g.graph.successors(0);
    std::vector<Vertex> key(s.begin(), s.end());
    ++freq[key];
    self += g.graph.has_edge(0, 0);
  }
  REQUIRE(freq.size() == 10);
  const double expected = samples / 10.0;
  double chi2 = 0;
  for (auto& [k, c] : freq) chi2 += (c - expected) * (c - expected) / expected;
  // 9 degrees of freedom, alpha = 0.01.
  CHECK(chi2 < 21.666);
  // Self-loop appears in 4 of the 10 subsets.
  CHECK(std::abs(self / double(samples) - 0.4) < 4 * std::sqrt(0.24 / samples));
}

TEST_CASE("probability of avoiding a fixed set matches C(n-k,d)/C(n,d)") {
  // n = 5, S = {0, 1}, vertex 4 has degree 2: C(3,2)/C(5,2) = 3/10.
  const auto spec = uniform_spec(5, 2, 1);
  const int samples = 100000;
  int avoid = 0;
  for (int i = 0; i < samples; ++i) {
    auto g = sample_constant_outdegree(spec, derive_seed(9, i));
    bool hit = false;
    for (Vertex w : g.graph.successors(4)) hit = hit || w < 2;
    avoid += !hit;
  }
  CHECK(std::abs(avoid / double(samples) - 0.3) < 4 * std::sqrt(0.21 / samples));
}

TEST_CASE("G(n,p) edge counts") {
  CHECK(sample_gnp(10, 0.0, 1).edge_count() == 0);
  auto full = sample_gnp(10, 1.0, 1);
  CHECK(full.edge_count() == 90);
  for (Vertex v = 0; v < 10; ++v) CHECK_FALSE(full.has_edge(v, v));
  CHECK(sample_gnp(1, 0.5, 3).edge_count() == 0);
  CHECK_THROWS_AS(sample_gnp(5, 1.5, 1), SpecError);

  const int samples = 1000;
  double sum = 0;
  for (int i = 0; i < samples; ++i) {
    auto g = sample_gnp(100, 0.5, derive_seed(5, i));
    for (Vertex v = 0; v < 100; ++v) REQUIRE_FALSE(g.has_edge(v, v));
    sum += g.edge_count();
  }
  // Binomial(9900, 1/2): sd = sqrt(2475), standard error of the mean = sd / sqrt(samples).
  const double se = std::sqrt(9900 * 0.25 / samples);
  CHECK(std::abs(sum / samples - 4950.0) < 3 * se);

  CHECK(sample_gnp(50, 0.1, 11) == sample_gnp(50, 0.1, 11));

  GnpSpec bad{10, 0.5, 0.5, 0};
  CHECK_THROWS_AS(bad.validate(), SpecError);
  bad.target_count = 11;
  CHECK_THROWS_AS(bad.validate(), SpecError);
}

TEST_CASE("per-pair edge frequency in G(n,p) is p") {
  const int samples = 20000;
  const double p = 0.3;
  std::vector<int> hits(4 * 4, 0);
  for (int i = 0; i < samples; ++i) {
    auto g = sample_gnp(4, p, derive_seed(77, i));
    for (Vertex u = 0; u < 4; ++u)
      for (Vertex v : g.successors(u)) ++hits[u * 4 + v];
  }
  for (Vertex u = 0; u < 4; ++u) {
    for (Vertex v = 0; v < 4; ++v) {
      if (u == v) {
        CHECK(hits[u * 4 + v] == 0);
      } else {
        CHECK(std::abs(hits[u * 4 + v] / double(samples) - p) < 4 * std::sqrt(p * (1 - p) / samples));
      }
    }
  }
}

TEST_CASE("to_mdp") {
  std::vector<std::vector<Vertex>> adj{{1}, {}, {0, 1}};
  Digraph g(adj);
  auto m = to_mdp(g, 0.0, std::size_t{1}, 3);
  CHECK(m.graph().has_edge(1, 1));
  CHECK(m.edge_count() == 4);
  for (Vertex v = 0; v < 3; ++v) CHECK(m.kind(v) == VertexKind::Random);
  CHECK(mask_count(m.buchi()) == 1);

  auto all_p1 = to_mdp(g, 1.0, std::vector<Vertex>{0, 2}, 3);
  for (Vertex v = 0; v < 3; ++v) CHECK(all_p1.kind(v) == VertexKind::Player1);
  CHECK(mask_members(all_p1.buchi()) == std::vector<Vertex>{0, 2});

  CHECK_THROWS_AS(to_mdp(g, 0.5, std::size_t{4}, 1), InputError);
  CHECK_THROWS_AS(to_mdp(g, 0.5, std::vector<Vertex>{3}, 1), InputError);

  const std::size_t n = 10000;
  auto big = to_mdp(sample_gnp(n, 0.0, 1), 0.5, std::size_t{17}, 99);
  std::size_t p1 = 0;
  for (Vertex v = 0; v < n; ++v) p1 += big.kind(v) == VertexKind::Player1;
  CHECK(std::abs(double(p1) - n / 2.0) <= 4 * std::sqrt(n / 4.0));
  CHECK(mask_count(big.buchi()) == 17);
}

TEST_CASE("self-loop patching adds no paths between distinct vertices") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = sample_gnp(8, 0.15, seed);
    auto m = to_mdp(g, 0.5, std::size_t{1}, seed);
    const auto all = full_mask(8);
    for (Vertex t = 0; t < 8; ++t) {
      VertexMask tgt(8, 0);
      tgt[t] = 1;
      CHECK(reverse_reachable(g, tgt, all) == reverse_reachable(m.graph(), tgt, all));
    }
  }
}

TEST_CASE("uniform target placement") {
  // Each vertex is in a 2-subset of 5 vertices with probability 2/5.
  Digraph g(std::vector<std::vector<Vertex>>(5));
  const int samples = 50000;
  std::vector<int> hits(5, 0);
  for (int i = 0; i < samples; ++i) {
    auto m = to_mdp(g, 0.5, std::size_t{2}, derive_seed(3, i));
    for (Vertex v = 0; v < 5; ++v) hits[v] += m.is_buchi(v);
  }
  for (int h : hits) CHECK(std::abs(h / double(samples) - 0.4) < 4 * std::sqrt(0.24 / samples));
}
