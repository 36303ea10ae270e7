#include <cmath>

#include "doctest.h"
#include "mdpavg/bounds.hpp"
#include "mdpavg/error.hpp"

using namespace mdpavg;

namespace {

constexpr double kE = 2.718281828459045;

DegreeSpec uniform_spec(std::size_t n, std::uint32_t d, std::size_t t) { return DegreeSpec{n, {{d, n, t}}}; }
DegreeSpec split_spec(std::size_t n, std::size_t t) { return DegreeSpec{n, {{2, n / 2, t}, {3, n - n / 2, 0}}}; }

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace

TEST_CASE("R upper bounds") {
  const auto spec = uniform_spec(5, 2, 1);
  auto trivial = r_upper_bound(spec, {1});
  CHECK(trivial.bound1 == 1.0);
  CHECK(trivial.bound2 == 1.0);

  auto b = r_upper_bound(spec, {2});
  CHECK(b.bound1 == doctest::Approx(8.0 / 9.0).epsilon(1e-14));
  CHECK(b.bound2 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  CHECK(to_double(r_multi_exact(spec, {2})) <= b.bound1);

  CHECK_THROWS_AS(r_upper_bound(spec, {4}), DomainError);
  CHECK_THROWS_AS(r_upper_bound(spec, {0}), SpecError);

  // Exact R never exceeds either bound wherever the hypothesis k <= n - d_max holds.
  for (auto s : {uniform_spec(5, 2, 1), uniform_spec(5, 2, 2), uniform_spec(4, 2, 1), DegreeSpec{5, {{2, 2, 1}, {3, 3, 0}}},
                 DegreeSpec{6, {{2, 3, 1}, {3, 3, 1}}}}) {
    for (std::size_t k = s.target_count(); k + s.max_degree() <= s.vertices; ++k) {
      for (const auto& comp : compositions(s, k)) {
        const auto ub = r_upper_bound(s, comp);
        CAPTURE(s.to_string());
        CAPTURE(k);
        CHECK(to_double(r_multi_exact(s, comp)) <= ub.bound1 + 1e-9);
        CHECK(ub.bound1 <= ub.bound2 + 1e-9);
      }
    }
  }
}

TEST_CASE("tiny-scale alpha_k against the union bound and the very-large-k bound") {
  // alpha_k <= n^x max a and a <= (x e l / n)^l with l = n - k, for every k.
  for (auto s : {uniform_spec(5, 2, 1), uniform_spec(5, 2, 2), DegreeSpec{5, {{2, 2, 1}, {3, 3, 0}}}}) {
    const double n = static_cast<double>(s.vertices), x = static_cast<double>(s.distinct_degrees());
    for (std::size_t k = s.target_count(); k < s.vertices; ++k) {
      Rational max_a = 0;
      for (const auto& comp : compositions(s, k)) {
        const Rational a = a_term_exact(s, comp);
        if (a > max_a) max_a = a;
        const double l = n - k;
        CHECK(to_double(a) <= std::pow(x * kE * l / n, l) + 1e-12);
      }
      CHECK(alpha_k_exact(s, k) <= max_a * Rational(static_cast<unsigned long>(std::pow(n, x))));
    }
  }
  // The stated k ranges are all empty at this size.
  CHECK_FALSE(small_k_range(uniform_spec(5, 2, 1)));
  CHECK_THROWS_AS(very_large_k_certificate(uniform_spec(5, 2, 1), 3), DomainError);
}

TEST_CASE("small-k quantities") {
  const auto spec = uniform_spec(10000, 3, 1);
  const std::size_t k = static_cast<std::size_t>(std::ceil(30 * std::log(10000.0)));
  CHECK(k == 277);
  const auto cert = small_k_quantities(spec, k);
  // Single class: L = (n - t) d e^{dk/n}, base = L/(n-d) e^{1 - d(n-t)/n}.
  const double n = 10000, d = 3;
  const double L = (n - 1) * d * std::exp(d * k / n);
  const double base = L / (n - d) * std::exp(1 - d * (n - 1) / n);
  CHECK(cert.quantity("L") == doctest::Approx(L).epsilon(1e-12));
  CHECK(cert.quantity("base") == doctest::Approx(base).epsilon(1e-12));
  CHECK(cert.quantity("log_envelope") == doctest::Approx(-std::log(L / (n - d)) + k * std::log(base)).epsilon(1e-12));
  for (const char* v : {"base_le_0.9", "L_over_n_minus_dmax_ge_1", "log_envelope_le_k_log_0.9",
                        "log_nx_envelope_le_minus_2x_log_n", "log_b_at_maximiser_le_log_envelope"}) {
    CAPTURE(v);
    CHECK(cert.verdict(v).pass);
  }

  // The stated range [30 x ln n, c1 n] is empty at n = 10^4.
  CHECK_FALSE(small_k_range(spec));
  CHECK_FALSE(small_k_range(split_spec(10000, 1)));
  CHECK_THROWS_AS(small_k_certificate(spec, 277), DomainError);
  CHECK_THROWS_AS(small_k_certificate(spec, 133), DomainError);

  const auto big = split_spec(1000000, 1);
  const auto range = small_k_range(big);
  REQUIRE(range);
  CHECK(range->first == static_cast<std::size_t>(std::ceil(60 * std::log(1e6))));
  CHECK(range->second == 13333);
  for (std::size_t kk : {range->first, (range->first + range->second) / 2, range->second}) {
    const auto c = small_k_certificate(big, kk);
    CHECK(c.verdict("log_envelope_le_k_log_0.9").pass);
    CHECK(c.all_pass());
  }
  CHECK_THROWS_AS(small_k_certificate(big, range->second + 1), DomainError);
  CHECK_THROWS_AS(small_k_quantities(spec, 0), DomainError);
}

TEST_CASE("b at the continuous maximiser never exceeds the envelope") {
  for (std::size_t n : {2000u, 50000u, 1000000u}) {
    for (auto spec : {uniform_spec(n, 2, 1), uniform_spec(n, 3, 5), split_spec(n, 1)}) {
      for (double frac : {0.001, 0.005, 0.01}) {
        const auto k = std::max<std::size_t>(spec.target_count(), static_cast<std::size_t>(frac * n));
        CHECK(small_k_quantities(spec, k).verdict("log_b_at_maximiser_le_log_envelope").pass);
      }
    }
  }
}

TEST_CASE("large-k chain") {
  const double n = 10000, s = 0.5, y = 1e-4, d = 2;
  const auto cert = large_k_certificate(uniform_spec(10000, 2, 1), 5000);
  // One class: s_1 - y_1 = s - y is forced.
  const double A = 1 - y, u = s - y;
  const double f = std::pow(A / u, u) * std::pow(A / (A - u), A - u) * std::pow(1 - s, d * (A - u)) *
                   std::pow(1 - std::pow(1 - s, d), u);
  CHECK(cert.quantity("f_2") == doctest::Approx(f).epsilon(1e-12));
  CHECK(cert.quantity("eta") == doctest::Approx(f).epsilon(1e-12));
  CHECK(f < 1);
  const double cap = std::pow(1 - s, d - 1) / (1 - std::pow(1 - s, d)) * 2 * s * d * d * u;
  CHECK(cert.quantity("log_term2_cap") == doctest::Approx(cap).epsilon(1e-12));
  CHECK(cert.quantity("log_a_bound") == doctest::Approx(std::log(n + 1) + n * std::log(f) + cap).epsilon(1e-12));
  CHECK(cert.verdict("eta_lt_1").pass);
  CHECK(cert.verdict("log_a_bound_le_minus_3x_log_n").pass);
  CHECK(cert.all_pass());

  CHECK_THROWS_AS(large_k_certificate(uniform_spec(10000, 2, 1), 10000), DomainError);
  CHECK_THROWS_AS(large_k_certificate(uniform_spec(10000, 2, 1), 10), DomainError);

  // Two classes: the maximiser beats every integer composition on a coarse grid.
  const auto spec = split_spec(10000, 1);
  const auto c2 = large_k_certificate(spec, 5000);
  CHECK(c2.all_pass());
  const double eta = c2.quantity("eta");
  for (std::size_t k2 = 1; k2 < 5000; k2 += 97) {
    const double u2 = (k2 - 1) / n, u3 = (5000 - k2) / n;
    const double A2 = (5000 - 1) / n, A3 = 0.5;
    if (u3 > A3 || u2 > A2) continue;
    auto lf = [&](double a, double uu, double dd) {
      double r = dd * (a - uu) * std::log(1 - s) + uu * std::log(1 - std::pow(1 - s, dd));
      if (uu > 0) r += uu * std::log(a / uu);
      if (a - uu > 0) r += (a - uu) * std::log(a / (a - uu));
      return r;
    };
    CHECK(std::exp(lf(A2, u2, 2) + lf(A3, u3, 3)) <= eta * (1 + 1e-12));
  }
}

TEST_CASE("very-large-k bounds") {
  const auto d2 = uniform_spec(10000, 2, 1);
  CHECK_THROWS_AS(very_large_k_certificate(d2, 2), DomainError);
  CHECK_THROWS_AS(very_large_k_certificate(d2, 1354), DomainError);  // > n/e^2

  const auto c3 = very_large_k_certificate(d2, 3);
  CHECK(c3.quantity("h") == doctest::Approx(std::pow(3 * kE, 3)).epsilon(1e-12));
  CHECK(c3.quantity("log_h_over_n2") == doctest::Approx(3 * std::log(3 * kE) - 2 * std::log(1e4)).epsilon(1e-12));
  CHECK(c3.all_pass());

  // (4e/n)^4 < n^{-3} needs n > (4e)^4, about 13968: false at n = 10^4.
  const auto c4 = very_large_k_certificate(d2, 4);
  CHECK(c4.quantity("log_a_bound") == doctest::Approx(4 * std::log(4 * kE / 1e4)).epsilon(1e-12));
  CHECK_FALSE(c4.verdict("log_a_bound_lt_minus_2_plus_x_log_n").pass);
  const auto th = threshold_sweep(
      [](std::size_t n) { return very_large_k_certificate(uniform_spec(n, 2, 1), 4).all_pass(); }, 100, 1000000);
  REQUIRE(th);
  CHECK(*th == static_cast<std::size_t>(std::floor(std::pow(4 * kE, 4))) + 1);
  CHECK(very_large_k_certificate(uniform_spec(20000, 2, 1), 4).all_pass());

  // d = 3 alone: l = 5 from n > (5e)^{5/2}.
  for (std::size_t n : {10000u, 1000000u}) {
    const auto d3 = uniform_spec(n, 3, 1);
    for (std::size_t l : {4u, 5u, 6u, 20u}) CHECK(very_large_k_certificate(d3, l).all_pass());
  }

  // Degrees {2,3}: l = 5 needs n > (2e*5)^5, about 1.48e7.
  const auto split_th = threshold_sweep(
      [](std::size_t n) { return very_large_k_certificate(split_spec(n, 1), 5).all_pass(); }, 1000, 100000000);
  REQUIRE(split_th);
  CHECK(*split_th == static_cast<std::size_t>(std::floor(std::pow(10 * kE, 2.5) * std::pow(10 * kE, 2.5))) + 1);
  CHECK_FALSE(very_large_k_certificate(split_spec(1000000, 1), 5).all_pass());
  CHECK(very_large_k_certificate(split_spec(20000000, 1), 5).all_pass());
  for (std::size_t l : {3u, 4u}) CHECK(very_large_k_certificate(split_spec(10000, 1), l).all_pass());
}

TEST_CASE("G(n,p) certificate") {
  const auto small = gnp_certificate(4, 0.5, Rational(1, 2));
  CHECK(small.verdict("symmetry_exact").pass);
  CHECK(small.verdict("symmetry_rational").pass);
  CHECK(small.quantity("log_t1") == doctest::Approx(std::log(1.0 / 8)).epsilon(1e-12));

  const double p = 3 * std::log(1000.0) / 1000;
  const auto c = gnp_certificate(1000, p);
  CHECK(c.verdict("g_le_t1").pass);
  CHECK(c.verdict("log_t1_le_minus_2_log_n").pass);
  CHECK(c.quantity("log_t1") == doctest::Approx(999 * std::log1p(-p)).epsilon(1e-12));
  CHECK(c.all_pass());

  const auto half = gnp_certificate(50, 0.5, Rational(1, 2));
  CHECK(half.verdict("one_minus_R_lt_0.75_pow_n_exact").pass);
  CHECK(half.all_pass());

  for (std::size_t n : {100u, 300u, 1000u, 3000u, 10000u}) {
    for (double cc : {2.1, 3.0, 5.0}) {
      CAPTURE(n);
      CAPTURE(cc);
      CHECK(gnp_certificate(n, cc * std::log(double(n)) / n).all_pass());
    }
  }
  for (std::size_t n = 17; n <= 100; ++n) {
    CAPTURE(n);
    CHECK(gnp_certificate(n, 0.5, Rational(1, 2)).all_pass());
  }

  // Log space against exact rationals.
  for (auto [n, q] : {std::pair{150u, Rational(1, 10)}, std::pair{60u, Rational(2, 7)}, std::pair{200u, Rational(1, 20)}}) {
    const auto cert = gnp_certificate(n, q.get_d(), q);
    CHECK(cert.verdict("log_space_agrees_with_exact").pass);
    CHECK(cert.quantity("max_log_space_deviation") < 1e-9);
  }

  CHECK_THROWS_AS(gnp_certificate(1, 0.5), DomainError);
  CHECK_THROWS_AS(gnp_certificate(10, 0.0), DomainError);
  CHECK_THROWS_AS(gnp_certificate(10, 1.0), DomainError);
}

TEST_CASE("Stirling inequalities") {
  const auto c = stirling_check(10, 3);
  CHECK(c.quantity("binomial") == 120);
  CHECK(c.quantity("rhs1") == doctest::Approx(std::pow(10 * kE / 3, 3)).epsilon(1e-12));
  CHECK(c.quantity("rhs1") == doctest::Approx(743.9).epsilon(1e-4));
  CHECK(c.quantity("rhs2") == doctest::Approx(11 * std::pow(10.0 / 3, 3) * std::pow(10.0 / 7, 7)).epsilon(1e-12));
  CHECK(c.quantity("rhs2") == doctest::Approx(4947.0).epsilon(1e-4));
  CHECK(c.all_pass());

  const auto eq = stirling_check(7, 7);
  CHECK(eq.quantity("binomial") == 1);
  CHECK(eq.quantity("rhs1") == doctest::Approx(std::exp(7.0)).epsilon(1e-12));
  CHECK(eq.quantity("rhs2") == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(stirling_check(9, 1).quantity("rhs1") == doctest::Approx(9 * kE).epsilon(1e-12));

  for (std::size_t l = 1; l <= 100; ++l)
    for (std::size_t j = 1; j <= l; ++j) REQUIRE(stirling_check(l, j).all_pass());

  CHECK_THROWS_AS(stirling_check(3, 0), DomainError);
  CHECK_THROWS_AS(stirling_check(3, 4), DomainError);
}

TEST_CASE("certificate serialisation") {
  const auto c = stirling_check(10, 3);
  const auto text = to_text(c);
  CHECK(text.find("kind=stirling\n") == 0);
  CHECK(text.find("param.l=10\n") != std::string::npos);
  CHECK(text.find("binomial=120\n") != std::string::npos);
  CHECK(text.find("verdict.binomial_le_rhs1=PASS") != std::string::npos);
  CHECK(text.find("all=PASS\n") != std::string::npos);

  const auto j = to_json(c);
  CHECK(j["kind"] == "stirling");
  CHECK(j["params"]["j"] == "3");
  CHECK(j["quantities"]["binomial"] == 120.0);
  CHECK(j["verdicts"][0]["pass"] == true);
  CHECK(j["all_pass"] == true);
  CHECK(nlohmann::json::parse(j.dump()) == j);
}

TEST_CASE("threshold sweep") {
  CHECK(threshold_sweep([](std::size_t n) { return n >= 1234; }, 10, 100000) == 1234u);
  CHECK(threshold_sweep([](std::size_t) { return true; }, 10, 100) == 10u);
  CHECK_FALSE(threshold_sweep([](std::size_t n) { return n < 50; }, 10, 100));
  CHECK(threshold_sweep([](std::size_t n) { return n >= 100; }, 10, 100) == 100u);
}
