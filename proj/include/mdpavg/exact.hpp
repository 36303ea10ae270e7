#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mdpavg/models.hpp"
#include "mdpavg/rational.hpp"

namespace mdpavg {

/// R(1..n) for G(n,p): probability that every vertex reaches a fixed target.
/// Element i-1 holds R(i,p). O(n^2) exact operations.
std::vector<Rational> r_np_table(std::size_t n, const Rational& p);

/// R(n,p) = 1 - sum_{i=1}^{n-1} C(n-1,i-1) (1-p)^{i(n-i)} R(i,p).
Rational r_np_exact(std::size_t n, const Rational& p);

inline constexpr std::size_t kBruteForceMaxVertices = 5;

/// R(n,p) by summing over all 2^{n(n-1)} labelled digraphs. Throws
/// CapacityError for n > kBruteForceMaxVertices.
Rational brute_force_r_np(std::size_t n, const Rational& p, std::size_t target = 0);

/// t_i = C(n-1,i-1)(1-p)^{i(n-i)}, 1 <= i <= n-1.
Rational t_term(std::size_t n, const Rational& p, std::size_t i);
/// g_i = C(n,i)(1-p)^{i(n-i)}, 1 <= i <= n/2.
Rational g_term(std::size_t n, const Rational& p, std::size_t i);

/// Per-class vertex counts k_i of a vertex set S.
using Composition = std::vector<std::size_t>;

/// Throws SpecError unless comp has one entry per class with t_i <= k_i <= a_i.
void validate_composition(const DegreeSpec& spec, const Composition& comp);

/// All compositions with the given total, in lexicographic order.
std::vector<Composition> compositions(const DegreeSpec& spec, std::size_t k);

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

/// Probability that every vertex of S reaches B through S, where S is the set
/// made of the first k_i ids of each class. Exhaustive over neighbour sets.
Rational r_multi_exact(const DegreeSpec& spec, const Composition& comp);

/// One summand of alpha_k: prod C(a_i-t_i, k_i-t_i) (C(n-k,d_i)/C(n,d_i))^{a_i-k_i}
/// times R(k_1..k_x), with 0^0 = 1.
Rational a_term_exact(const DegreeSpec& spec, const Composition& comp);

/// Probability that the reverse reachable set of B has exactly k vertices,
/// from the composition sum. 0 for k < t.
Rational alpha_k_exact(const DegreeSpec& spec, std::size_t k);

/// The same distribution from classifying every graph of the model.
/// Element k is the probability mass of reverse reachable sets of size k.
std::vector<Rational> alpha_by_enumeration(const DegreeSpec& spec);

struct AlphaFormulaReport {
  std::vector<Rational> formula;     ///< indexed by k, 0..n
  std::vector<Rational> enumerated;  ///< indexed by k, 0..n
  bool sums_to_one = false;
  bool matches = false;
  bool ok() const { return sums_to_one && matches; }
};

AlphaFormulaReport check_alpha_formula_report(const DegreeSpec& spec);
inline bool check_alpha_formula(const DegreeSpec& spec) { return check_alpha_formula_report(spec).ok(); }

}  // namespace mdpavg
