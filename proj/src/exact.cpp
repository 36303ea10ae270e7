#include "mdpavg/exact.hpp"

#include <bit>
#include <limits>

#include "mdpavg/error.hpp"

namespace mdpavg {
namespace {

using Bits = std::uint64_t;

// All d-subsets of [0, n) as bitmasks, n <= 64.
std::vector<Bits> subsets_of_size(std::size_t n, std::size_t d) {
  std::vector<Bits> out;
  if (d > n) return out;
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < d; ++i) idx[i] = i;
  for (;;) {
    Bits m = 0;
    for (std::size_t i : idx) m |= Bits{1} << i;
    out.push_back(m);
    std::size_t i = d;
    while (i > 0 && idx[i - 1] == n - d + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

// Product of the sizes, or limit+1 once it exceeds the limit.
std::uint64_t capped_product(const std::vector<std::uint64_t>& sizes, std::uint64_t limit) {
  std::uint64_t prod = 1;
  for (std::uint64_t s : sizes) {
    if (s != 0 && prod > limit / s) return limit + 1;
    prod *= s;
  }
  return prod;
}

// Grow `reached` with every vertex of `domain` that has a successor in it.
Bits close_backwards(Bits reached, Bits domain, const std::vector<Bits>& succ) {
  for (bool grew = true; grew;) {
    grew = false;
    for (Bits rest = domain & ~reached; rest; rest &= rest - 1) {
      const int v = std::countr_zero(rest);
      if (succ[v] & reached) {
        reached |= Bits{1} << v;
        grew = true;
      }
    }
  }
  return reached;
}

void check_probability(const Rational& p) {
  if (p < 0 || p > 1) throw DomainError("probability " + to_fraction(p) + " outside [0,1]");
}

// Odometer over choice[i] in [0, sizes[i]); calls f after each setting.
template <class F>
void for_each_choice(const std::vector<std::size_t>& sizes, F&& f) {
  std::vector<std::size_t> choice(sizes.size(), 0);
  for (std::size_t s : sizes)
    if (s == 0) return;
  for (;;) {
    f(choice);
    std::size_t i = sizes.size();
    while (i > 0) {
      if (++choice[i - 1] < sizes[i - 1]) break;
      choice[i - 1] = 0;
      --i;
    }
    if (i == 0) return;
  }
}

}  // namespace

std::vector<Rational> r_np_table(std::size_t n, const Rational& p) {
  if (n == 0) throw DomainError("R(n,p) needs n >= 1");
  check_probability(p);
  const Rational q = 1 - p;
  std::vector<Rational> r(n);
  r[0] = 1;
  for (std::size_t m = 2; m <= n; ++m) {
    Rational sum = 0;
    for (std::size_t i = 1; i < m; ++i) {
      sum += Rational(binomial(m - 1, i - 1)) * power(q, i * (m - i)) * r[i - 1];
    }
    r[m - 1] = 1 - sum;
  }
  return r;
}

Rational r_np_exact(std::size_t n, const Rational& p) { return r_np_table(n, p).back(); }

Rational brute_force_r_np(std::size_t n, const Rational& p, std::size_t target) {
  if (n == 0) throw DomainError("R(n,p) needs n >= 1");
  if (n > kBruteForceMaxVertices) {
    throw CapacityError("brute force over labelled digraphs supports n <= " +
                        std::to_string(kBruteForceMaxVertices));
  }
  if (target >= n) throw InputError("target vertex out of range");
  check_probability(p);

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v) pairs.emplace_back(u, v);
  const std::size_t m = pairs.size();
  const Bits everyone = (Bits{1} << n) - 1;

  std::vector<std::uint64_t> by_edges(m + 1, 0);
  std::vector<Bits> succ(n);
  for (Bits g = 0; g < (Bits{1} << m); ++g) {
    std::fill(succ.begin(), succ.end(), 0);
    for (Bits e = g; e; e &= e - 1) {
      const auto& [u, v] = pairs[std::countr_zero(e)];
      succ[u] |= Bits{1} << v;
    }
    if (close_backwards(Bits{1} << target, everyone, succ) == everyone) ++by_edges[std::popcount(g)];
  }

  const Rational q = 1 - p;
  Rational total = 0;
  for (std::size_t e = 0; e <= m; ++e) {
    if (by_edges[e]) total += Rational(BigInt(static_cast<unsigned long>(by_edges[e]))) * power(p, e) * power(q, m - e);
  }
  return total;
}

Rational t_term(std::size_t n, const Rational& p, std::size_t i) {
  if (i < 1 || i + 1 > n) throw DomainError("t_i needs 1 <= i <= n-1");
  check_probability(p);
  return Rational(binomial(n - 1, i - 1)) * power(1 - p, i * (n - i));
}

Rational g_term(std::size_t n, const Rational& p, std::size_t i) {
  if (i < 1 || i > n / 2) throw DomainError("g_i needs 1 <= i <= n/2");
  check_probability(p);
  return Rational(binomial(n, i)) * power(1 - p, i * (n - i));
}

void validate_composition(const DegreeSpec& spec, const Composition& comp) {
  if (comp.size() != spec.classes.size()) throw SpecError("composition needs one count per degree class");
  for (std::size_t i = 0; i < comp.size(); ++i) {
    if (comp[i] < spec.classes[i].targets || comp[i] > spec.classes[i].count) {
      throw SpecError("composition entry " + std::to_string(i) + " outside [t_i, a_i]");
    }
  }
}

std::vector<Composition> compositions(const DegreeSpec& spec, std::size_t k) {
  std::vector<Composition> out;
  Composition cur(spec.classes.size());
  // Remaining capacity of classes i.. so that pruning stays cheap.
  std::vector<std::size_t> min_rest(spec.classes.size() + 1, 0), max_rest(spec.classes.size() + 1, 0);
  for (std::size_t i = spec.classes.size(); i-- > 0;) {
    min_rest[i] = min_rest[i + 1] + spec.classes[i].targets;
    max_rest[i] = max_rest[i + 1] + spec.classes[i].count;
  }
  auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
    if (i == spec.classes.size()) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (std::size_t ki = spec.classes[i].targets; ki <= spec.classes[i].count && ki <= left; ++ki) {
      const std::size_t rest = left - ki;
      if (rest < min_rest[i + 1] || rest > max_rest[i + 1]) continue;
      cur[i] = ki;
      self(self, i + 1, rest);
    }
  };
  rec(rec, 0, k);
  return out;
}

Rational r_multi_exact(const DegreeSpec& spec, const Composition& comp) {
  spec.validate();
  validate_composition(spec, comp);
  const std::size_t n = spec.vertices;

  // Only non-target members of S make choices that matter: a target is already
  // reached, and paths stop at the first target they meet.
  Bits in_s = 0, targets = 0;
  std::vector<std::size_t> movers;
  std::vector<std::uint32_t> mover_degree;
  for (std::size_t c = 0; c < spec.classes.size(); ++c) {
    const std::size_t off = spec.class_offset(c);
    for (std::size_t j = 0; j < comp[c]; ++j) {
      const std::size_t v = off + j;
      if (j < spec.classes[c].targets) {
        if (v < 64) targets |= Bits{1} << v;
      } else {
        movers.push_back(v);
        mover_degree.push_back(spec.classes[c].degree);
      }
      if (v < 64) in_s |= Bits{1} << v;
    }
  }
  if (movers.empty()) return 1;

  std::vector<std::uint64_t> sizes;
  for (auto d : mover_degree) {
    const BigInt c = binomial(n, d);
    sizes.push_back(c.fits_ulong_p() ? c.get_ui() : std::numeric_limits<std::uint64_t>::max());
  }
  if (n > 64 || capped_product(sizes, kEnumerationLimit) > kEnumerationLimit) {
    throw CapacityError("neighbour-set enumeration for R(k_1..k_x) exceeds " +
                        std::to_string(kEnumerationLimit) + " cases");
  }

  std::vector<std::vector<Bits>> options;
  std::vector<std::size_t> counts;
  for (auto d : mover_degree) {
    options.push_back(subsets_of_size(n, d));
    counts.push_back(options.back().size());
  }

  std::vector<Bits> succ(n, 0);
  std::uint64_t good = 0, total = 0;
  for_each_choice(counts, [&](const std::vector<std::size_t>& choice) {
    for (std::size_t i = 0; i < movers.size(); ++i) succ[movers[i]] = options[i][choice[i]];
    ++total;
    if ((close_backwards(targets, in_s, succ) & in_s) == in_s) ++good;
  });
  return ratio(BigInt(static_cast<unsigned long>(good)), BigInt(static_cast<unsigned long>(total)));
}

Rational a_term_exact(const DegreeSpec& spec, const Composition& comp) {
  spec.validate();
  validate_composition(spec, comp);
  const std::size_t n = spec.vertices;
  std::size_t k = 0;
  for (auto ki : comp) k += ki;
  Rational term = 1;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const auto& c = spec.classes[i];
    term *= Rational(binomial(c.count - c.targets, comp[i] - c.targets));
    // Vertices outside S must avoid S entirely; 0^0 = 1 when a_i = k_i.
    const Rational avoid = ratio(binomial(n - k, c.degree), binomial(n, c.degree));
    term *= power(avoid, c.count - comp[i]);
  }
  if (term == 0) return term;
  return term * r_multi_exact(spec, comp);
}

Rational alpha_k_exact(const DegreeSpec& spec, std::size_t k) {
  spec.validate();
  if (k < spec.target_count() || k > spec.vertices) return 0;
  Rational alpha = 0;
  for (const auto& comp : compositions(spec, k)) alpha += a_term_exact(spec, comp);
  return alpha;
}

std::vector<Rational> alpha_by_enumeration(const DegreeSpec& spec) {
  spec.validate();
  const std::size_t n = spec.vertices;
  const auto degrees = spec.vertex_degrees();
  std::vector<std::uint64_t> sizes;
  for (auto d : degrees) {
    const BigInt c = binomial(n, d);
    sizes.push_back(c.fits_ulong_p() ? c.get_ui() : std::numeric_limits<std::uint64_t>::max());
  }
  if (n > 64 || capped_product(sizes, kEnumerationLimit) > kEnumerationLimit) {
    throw CapacityError("graph enumeration exceeds " + std::to_string(kEnumerationLimit) + " graphs");
  }

  std::vector<std::vector<Bits>> by_degree(n + 1);
  std::vector<std::size_t> counts(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (by_degree[degrees[v]].empty()) by_degree[degrees[v]] = subsets_of_size(n, degrees[v]);
    counts[v] = by_degree[degrees[v]].size();
  }
  Bits targets = 0;
  for (Vertex t : spec.target_vertices()) targets |= Bits{1} << t;
  const Bits everyone = n == 64 ? ~Bits{0} : (Bits{1} << n) - 1;

  std::vector<std::uint64_t> hist(n + 1, 0);
  std::uint64_t total = 0;
  std::vector<Bits> succ(n);
  for_each_choice(counts, [&](const std::vector<std::size_t>& choice) {
    for (std::size_t v = 0; v < n; ++v) succ[v] = by_degree[degrees[v]][choice[v]];
    ++total;
    ++hist[std::popcount(close_backwards(targets, everyone, succ))];
  });

  std::vector<Rational> out(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    out[k] = ratio(BigInt(static_cast<unsigned long>(hist[k])), BigInt(static_cast<unsigned long>(total)));
  }
  return out;
}

AlphaFormulaReport check_alpha_formula_report(const DegreeSpec& spec) {
  AlphaFormulaReport rep;
  rep.enumerated = alpha_by_enumeration(spec);
  Rational sum = 0;
  for (std::size_t k = 0; k <= spec.vertices; ++k) {
    rep.formula.push_back(alpha_k_exact(spec, k));
    sum += rep.formula.back();
  }
  rep.sums_to_one = sum == 1;
  rep.matches = rep.formula == rep.enumerated;
  return rep;
}

}  // namespace mdpavg
