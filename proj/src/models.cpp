#include "mdpavg/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "mdpavg/error.hpp"
#include "mdpavg/rng.hpp"

namespace mdpavg {
namespace {

// Floyd's sampling of a uniform k-subset of [0, n); `scratch` is an all-zero
// mask of size n on entry and on exit.
void floyd_subset(Engine& rng, std::size_t n, std::size_t k, std::vector<Vertex>& out,
                  std::vector<std::uint8_t>& scratch) {
  out.clear();
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<Vertex>(uniform_below(rng, j + 1));
    const Vertex pick = scratch[t] ? static_cast<Vertex>(j) : t;
    scratch[pick] = 1;
    out.push_back(pick);
  }
  for (Vertex v : out) scratch[v] = 0;
}

std::size_t parse_size(std::string_view tok, std::string_view field) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty()) {
    throw SpecError("degree spec: bad " + std::string(field) + " '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

std::size_t DegreeSpec::target_count() const noexcept {
  std::size_t t = 0;
  for (const auto& c : classes) t += c.targets;
  return t;
}

std::size_t DegreeSpec::class_offset(std::size_t i) const noexcept {
  std::size_t off = 0;
  for (std::size_t j = 0; j < i; ++j) off += classes[j].count;
  return off;
}

void DegreeSpec::validate() const {
  if (classes.empty()) throw SpecError("degree spec has no classes");
  std::size_t total = 0;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const auto& c = classes[i];
    if (i > 0 && c.degree <= classes[i - 1].degree) {
      throw SpecError("degrees must be strictly increasing");
    }
    if (c.targets > c.count) throw SpecError("class with more targets than vertices");
    total += c.count;
  }
  if (total != vertices) {
    throw SpecError("class counts sum to " + std::to_string(total) + ", expected n = " +
                    std::to_string(vertices));
  }
  if (min_degree() < 2) throw SpecError("minimum degree must be at least 2");
  if (max_degree() >= vertices) throw SpecError("maximum degree must be below n");
  if (target_count() == 0) throw SpecError("at least one target vertex is required");
}

std::vector<std::uint32_t> DegreeSpec::vertex_degrees() const {
  std::vector<std::uint32_t> deg;
  deg.reserve(vertices);
  for (const auto& c : classes) deg.insert(deg.end(), c.count, c.degree);
  return deg;
}

std::vector<Vertex> DegreeSpec::target_vertices() const {
  std::vector<Vertex> out;
  std::size_t off = 0;
  for (const auto& c : classes) {
    for (std::size_t j = 0; j < c.targets; ++j) out.push_back(static_cast<Vertex>(off + j));
    off += c.count;
  }
  return out;
}

DegreeSpec DegreeSpec::parse(std::string_view text, std::size_t vertices) {
  DegreeSpec spec;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = text.substr(start, comma - start);
    const std::size_t c1 = item.find(':');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : item.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw SpecError("degree spec entries look like d:a:t, got '" + std::string(item) + "'");
    }
    DegreeClass c;
    c.degree = static_cast<std::uint32_t>(parse_size(item.substr(0, c1), "degree"));
    c.count = parse_size(item.substr(c1 + 1, c2 - c1 - 1), "count");
    c.targets = parse_size(item.substr(c2 + 1), "target count");
    spec.classes.push_back(c);
    start = comma + 1;
  }
  std::size_t total = 0;
  for (const auto& c : spec.classes) total += c.count;
  spec.vertices = vertices == 0 ? total : vertices;
  spec.validate();
  return spec;
}

std::string DegreeSpec::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i) out << ',';
    out << classes[i].degree << ':' << classes[i].count << ':' << classes[i].targets;
  }
  return out.str();
}

void GnpSpec::validate() const {
  if (vertices == 0) throw SpecError("G(n,p) needs at least one vertex");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw SpecError("edge probability outside [0,1]");
  if (!(player1_prob >= 0.0 && player1_prob <= 1.0)) throw SpecError("player-1 probability outside [0,1]");
  if (target_count < 1 || target_count > vertices) throw SpecError("target count outside [1, n]");
}

SampledGraph sample_constant_outdegree(const DegreeSpec& spec, std::uint64_t seed) {
  spec.validate();
  Engine rng = make_engine(seed);
  const std::size_t n = spec.vertices;
  std::vector<std::vector<Vertex>> succ(n);
  std::vector<std::uint8_t> scratch(n, 0);
  std::size_t v = 0;
  for (const auto& c : spec.classes) {
    for (std::size_t j = 0; j < c.count; ++j, ++v) {
      floyd_subset(rng, n, c.degree, succ[v], scratch);
      std::sort(succ[v].begin(), succ[v].end());
    }
  }
  return {Digraph(succ), spec.target_vertices()};
}

Digraph sample_gnp(std::size_t n, double p, std::uint64_t seed) {
  if (n == 0) throw SpecError("G(n,p) needs at least one vertex");
  if (!(p >= 0.0 && p <= 1.0)) throw SpecError("edge probability outside [0,1]");
  std::vector<std::vector<Vertex>> succ(n);
  if (n == 1 || p == 0.0) return Digraph(succ);
  const std::uint64_t per_row = n - 1;
  auto add = [&](std::uint64_t slot) {
    const auto u = static_cast<Vertex>(slot / per_row);
    auto w = static_cast<Vertex>(slot % per_row);
    if (w >= u) ++w;  // skip the diagonal
    succ[u].push_back(w);
  };
  const std::uint64_t slots = n * per_row;
  if (p == 1.0) {
    for (std::uint64_t s = 0; s < slots; ++s) add(s);
    return Digraph(succ);
  }
  // Gap to the next present pair is geometric with success probability p.
  Engine rng = make_engine(seed);
  const double log_q = std::log1p(-p);
  double pos = -1.0;
  for (;;) {
    const double r = 1.0 - uniform01(rng);  // (0, 1]
    pos += 1.0 + std::floor(std::log(r) / log_q);
    if (pos >= static_cast<double>(slots)) break;
    add(static_cast<std::uint64_t>(pos));
  }
  return Digraph(succ);
}

Mdp to_mdp(const Digraph& graph, double player1_prob, const TargetChoice& targets, std::uint64_t seed) {
  const std::size_t n = graph.size();
  if (!(player1_prob >= 0.0 && player1_prob <= 1.0)) throw InputError("player-1 probability outside [0,1]");
  Engine rng = make_engine(seed);

  std::vector<VertexKind> kinds(n);
  for (auto& k : kinds) k = bernoulli(rng, player1_prob) ? VertexKind::Player1 : VertexKind::Random;

  VertexMask buchi(n, 0);
  if (const auto* count = std::get_if<std::size_t>(&targets)) {
    if (*count > n) throw InputError("target count exceeds the vertex count");
    std::vector<Vertex> picked;
    std::vector<std::uint8_t> scratch(n, 0);
    floyd_subset(rng, n, *count, picked, scratch);
    for (Vertex v : picked) buchi[v] = 1;
  } else {
    buchi = make_mask(n, std::get<std::vector<Vertex>>(targets));
  }

  auto succ = graph.adjacency();
  for (std::size_t v = 0; v < n; ++v) {
    if (succ[v].empty()) succ[v].push_back(static_cast<Vertex>(v));
  }
  return Mdp(succ, std::move(kinds), std::move(buchi));
}

}  // namespace mdpavg
