#include <cmath>

#include "doctest.h"
#include "mdpavg/core.hpp"
#include "mdpavg/error.hpp"
#include "mdpavg/exact.hpp"

using namespace mdpavg;

namespace {

Rational q(const char* s) { return parse_rational(s); }

DegreeSpec uniform_spec(std::size_t n, std::uint32_t d, std::size_t t) { return DegreeSpec{n, {{d, n, t}}}; }

// Every d-subset of [0, n) as a sorted vertex list.
std::vector<std::vector<Vertex>> subsets(std::size_t n, std::size_t d) {
  std::vector<std::vector<Vertex>> out;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (static_cast<std::size_t>(__builtin_popcount(m)) != d) continue;
    std::vector<Vertex> s;
    for (Vertex v = 0; v < n; ++v)
      if (m >> v & 1) s.push_back(v);
    out.push_back(s);
  }
  return out;
}

// Distribution of |reverse reachable set| over all graphs of the model, using
// list-based graphs and the solver's own reachability routine.
std::vector<Rational> classify_all_graphs(const DegreeSpec& spec) {
  const std::size_t n = spec.vertices;
  const auto deg = spec.vertex_degrees();
  std::vector<std::vector<std::vector<Vertex>>> opts(n);
  for (std::size_t v = 0; v < n; ++v) opts[v] = subsets(n, deg[v]);
  const auto targets = make_mask(n, spec.target_vertices());
  const auto all = full_mask(n);
  std::vector<unsigned long> hist(n + 1, 0);
  unsigned long total = 0;
  std::vector<std::size_t> idx(n, 0);
  for (;;) {
    std::vector<std::vector<Vertex>> adj(n);
    for (std::size_t v = 0; v < n; ++v) adj[v] = opts[v][idx[v]];
    ++hist[mask_count(reverse_reachable(Digraph(adj), targets, all))];
    ++total;
    std::size_t v = 0;
    while (v < n && ++idx[v] == opts[v].size()) idx[v++] = 0;
    if (v == n) break;
  }
  std::vector<Rational> out;
  for (auto h : hist) out.push_back(ratio(BigInt(h), BigInt(total)));
  return out;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(q("2/4") == Rational(1, 2));
  CHECK(q("7") == 7);
  CHECK(q("-3/9") == Rational(-1, 3));
  CHECK(to_fraction(q("6/8")) == "3/4");
  CHECK(to_fraction(q("5")) == "5");
  CHECK(to_decimal(q("1/3")) == "0.333333333333");
  CHECK(to_decimal(q("1/2")) == "0.5");
  CHECK_THROWS_AS(q("1/0"), InputError);
  CHECK_THROWS_AS(q("a/2"), InputError);
  CHECK_THROWS_AS(q("1/"), InputError);
  CHECK_THROWS_AS(q("0.5"), InputError);
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(3, 5) == 0);
  CHECK(power(Rational(0), 0) == 1);
  CHECK(power(Rational(2, 3), 3) == Rational(8, 27));
  CHECK(log_of(Rational(1)) == doctest::Approx(0.0));
  CHECK(log_of(power(Rational(1, 2), 5000)) == doctest::Approx(-5000 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("R(n,p) small values") {
  for (const char* p : {"0", "1/2", "1/3", "1"}) CHECK(r_np_exact(1, q(p)) == 1);
  CHECK(r_np_exact(2, q("1/2")) == Rational(1, 2));
  CHECK(r_np_exact(3, q("1/2")) == Rational(1, 2));
  CHECK(brute_force_r_np(1, q("1/3")) == 1);
  CHECK(brute_force_r_np(2, q("1/2")) == Rational(1, 2));
  CHECK(brute_force_r_np(3, q("1/2")) == Rational(1, 2));
  CHECK(r_np_exact(5, q("0")) == 0);
  CHECK_THROWS_AS(r_np_exact(0, q("1/2")), DomainError);
  CHECK_THROWS_AS(r_np_exact(3, q("3/2")), DomainError);
  CHECK_THROWS_AS(brute_force_r_np(6, q("1/2")), CapacityError);
  CHECK_THROWS_AS(brute_force_r_np(3, q("1/2"), 3), InputError);
}

TEST_CASE("recurrence equals brute force for n <= 5") {
  for (const char* p : {"1/2", "1/3", "9/10"}) {
    const auto table = r_np_table(5, q(p));
    for (std::size_t n = 1; n <= 5; ++n) {
      CAPTURE(n);
      CAPTURE(p);
      CHECK(table[n - 1] == brute_force_r_np(n, q(p)));
    }
  }
  // The target label does not matter.
  CHECK(brute_force_r_np(4, q("1/3"), 2) == r_np_exact(4, q("1/3")));
}

TEST_CASE("R(n,p) range, monotonicity and the un-rearranged identity") {
  std::vector<std::vector<Rational>> grid;
  for (int j = 0; j <= 10; ++j) grid.push_back(r_np_table(30, Rational(j, 10)));
  for (std::size_t n = 1; n <= 30; ++n) {
    CHECK(grid[10][n - 1] == 1);
    for (int j = 0; j <= 10; ++j) {
      CHECK(grid[j][n - 1] >= 0);
      CHECK(grid[j][n - 1] <= 1);
      if (j) CHECK(grid[j][n - 1] >= grid[j - 1][n - 1]);
    }
  }
  for (const char* p : {"1/2", "1/7", "5/6"}) {
    const auto r = r_np_table(60, q(p));
    const Rational one_minus = 1 - q(p);
    for (std::size_t n = 1; n <= 60; ++n) {
      Rational sum = 0;
      for (std::size_t i = 1; i <= n; ++i) sum += Rational(binomial(n - 1, i - 1)) * power(one_minus, i * (n - i)) * r[i - 1];
      CHECK(sum == 1);
    }
  }
}

TEST_CASE("tail of R(n,1/2) against (3/4)^n") {
  const auto r = r_np_table(100, q("1/2"));
  for (std::size_t n = 17; n <= 100; ++n) {
    CAPTURE(n);
    CHECK(1 - r[n - 1] < power(Rational(3, 4), n));
  }
  // Smallest n from which the bound holds up to 100 is 7; n = 6 misses it.
  for (std::size_t n = 7; n < 17; ++n) CHECK(1 - r[n - 1] < power(Rational(3, 4), n));
  CHECK_FALSE(1 - r[5] < power(Rational(3, 4), 6));
}

TEST_CASE("t_i and g_i") {
  const auto h = q("1/2");
  CHECK(t_term(4, h, 1) == Rational(1, 8));
  CHECK(t_term(4, h, 3) == Rational(3, 8));
  CHECK(t_term(4, h, 3) == 3 * t_term(4, h, 1));
  CHECK(g_term(4, h, 2) == Rational(3, 8));
  for (std::size_t n = 2; n <= 30; ++n) {
    for (std::size_t i = 1; i <= n / 2; ++i) {
      CHECK(g_term(n, q("2/7"), i) == t_term(n, q("2/7"), i) + t_term(n, q("2/7"), n - i));
      CHECK(t_term(n, h, n - i) * i == t_term(n, h, i) * (n - i));
    }
  }
  CHECK_THROWS_AS(t_term(4, h, 0), DomainError);
  CHECK_THROWS_AS(t_term(4, h, 4), DomainError);
  CHECK_THROWS_AS(g_term(5, h, 3), DomainError);
}

TEST_CASE("compositions") {
  const DegreeSpec spec{7, {{2, 3, 1}, {3, 4, 0}}};
  auto c = compositions(spec, 3);
  CHECK(c == std::vector<Composition>{{1, 2}, {2, 1}, {3, 0}});
  CHECK(compositions(spec, 0).empty());
  CHECK(compositions(spec, 7) == std::vector<Composition>{{3, 4}});
  CHECK_THROWS_AS(validate_composition(spec, {0, 1}), SpecError);
  CHECK_THROWS_AS(validate_composition(spec, {1}), SpecError);
}

TEST_CASE("R(k_1..k_x)") {
  CHECK(r_multi_exact(uniform_spec(5, 2, 1), {1}) == 1);
  CHECK(r_multi_exact(DegreeSpec{7, {{2, 3, 1}, {3, 4, 1}}}, {1, 1}) == 1);
  // u's 10 neighbour sets; the 4 containing the target give a path.
  CHECK(r_multi_exact(uniform_spec(5, 2, 1), {2}) == Rational(2, 5));

  // n = 3, S = V: enumerate the two non-targets' neighbour sets directly.
  const auto opts = subsets(3, 2);
  int good = 0, total = 0;
  for (auto& a : opts) {
    for (auto& b : opts) {
      std::vector<std::vector<Vertex>> adj{{0, 1}, a, b};
      good += mask_count(reverse_reachable(Digraph(adj), make_mask(3, std::vector<Vertex>{0}), full_mask(3))) == 3;
      ++total;
    }
  }
  CHECK(total == 9);
  CHECK(r_multi_exact(uniform_spec(3, 2, 1), {3}) == Rational(good, total));

  CHECK_THROWS_AS(r_multi_exact(uniform_spec(40, 3, 1), {40}), CapacityError);
}

TEST_CASE("alpha_k formula against whole-graph classification") {
  const auto spec3 = uniform_spec(3, 2, 1);
  const auto classified = classify_all_graphs(spec3);
  Rational sum = 0;
  for (std::size_t k = 0; k <= 3; ++k) {
    CHECK(alpha_k_exact(spec3, k) == classified[k]);
    sum += alpha_k_exact(spec3, k);
  }
  CHECK(sum == 1);
  CHECK(alpha_by_enumeration(spec3) == classified);

  for (auto spec : {uniform_spec(3, 2, 1), uniform_spec(3, 2, 2), uniform_spec(4, 2, 1), uniform_spec(4, 2, 2),
                    uniform_spec(5, 2, 1), uniform_spec(5, 2, 2), DegreeSpec{5, {{2, 2, 1}, {3, 3, 0}}},
                    DegreeSpec{5, {{2, 3, 0}, {3, 2, 1}}}}) {
    CAPTURE(spec.to_string());
    const auto rep = check_alpha_formula_report(spec);
    CHECK(rep.sums_to_one);
    CHECK(rep.matches);
  }
  CHECK(alpha_by_enumeration(uniform_spec(5, 2, 1)) == classify_all_graphs(uniform_spec(5, 2, 1)));
  CHECK_THROWS_AS(alpha_by_enumeration(uniform_spec(12, 3, 1)), CapacityError);
}
