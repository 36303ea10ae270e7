#include "mdpavg/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mdpavg/error.hpp"

namespace mdpavg {
namespace {

constexpr double kE = 2.718281828459045;

std::string num(double v) {
  std::ostringstream out;
  out << std::setprecision(12) << v;
  return out.str();
}

void spec_params(BoundCertificate& cert, const DegreeSpec& spec) {
  cert.param("n", std::to_string(spec.vertices));
  cert.param("degrees", spec.to_string());
}

// log(sum exp(v)) over a non-empty list.
double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(m)) return m;
  double s = 0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// u log(A/u) with the 0 log 0 = 0 convention.
double xlog_ratio(double u, double a) { return u > 0 ? u * (std::log(a) - std::log(u)) : 0.0; }

double resolve_c1(const DegreeSpec& spec, const RangeOptions& opt) { return opt.c1 < 0 ? default_c1(spec) : opt.c1; }
double resolve_c2(const RangeOptions& opt) { return opt.c2 < 0 ? default_c2() : opt.c2; }

}  // namespace

bool BoundCertificate::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

double BoundCertificate::quantity(const std::string& name) const {
  for (const auto& q : quantities)
    if (q.name == name) return q.value;
  throw std::out_of_range("no quantity named " + name);
}

const Verdict& BoundCertificate::verdict(const std::string& name) const {
  for (const auto& v : verdicts)
    if (v.name == name) return v;
  throw std::out_of_range("no verdict named " + name);
}

std::string to_text(const BoundCertificate& cert) {
  std::ostringstream out;
  out << "kind=" << cert.kind << '\n';
  for (const auto& [k, v] : cert.params) out << "param." << k << '=' << v << '\n';
  for (const auto& q : cert.quantities) out << q.name << '=' << num(q.value) << '\n';
  for (const auto& v : cert.verdicts) {
    out << "verdict." << v.name << '=' << (v.pass ? "PASS" : "FAIL") << " lhs=" << num(v.lhs)
        << " rhs=" << num(v.rhs) << '\n';
  }
  for (const auto& n : cert.notes) out << "note=" << n << '\n';
  out << "all=" << (cert.all_pass() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

nlohmann::json to_json(const BoundCertificate& cert) {
  nlohmann::json j;
  j["kind"] = cert.kind;
  j["params"] = nlohmann::json::object();
  for (const auto& [k, v] : cert.params) j["params"][k] = v;
  j["quantities"] = nlohmann::json::object();
  for (const auto& q : cert.quantities) j["quantities"][q.name] = q.value;
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : cert.verdicts) j["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  j["notes"] = cert.notes;
  j["all_pass"] = cert.all_pass();
  return j;
}

double default_c1(const DegreeSpec& spec) { return 0.04 / spec.max_degree(); }
double default_c2() { return 1.0 - 1.0 / (kE * kE); }

RUpperBound r_upper_bound(const DegreeSpec& spec, const Composition& comp) {
  spec.validate();
  validate_composition(spec, comp);
  const double n = static_cast<double>(spec.vertices);
  std::size_t k = 0;
  for (auto ki : comp) k += ki;
  if (k + spec.max_degree() > spec.vertices) {
    throw DomainError("R upper bound needs k <= n - d_max (k = " + std::to_string(k) + ")");
  }
  const double dmax = spec.max_degree();
  RUpperBound b;
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const double u = static_cast<double>(comp[i] - spec.classes[i].targets);
    if (u == 0) continue;
    const double d = spec.classes[i].degree;
    const double miss = std::pow(1.0 - k / (n - d), d);
    b.log_bound1 += u * std::log1p(-miss);
    b.log_bound2 += u * std::log(d * k / (n - dmax));
  }
  b.bound1 = std::exp(b.log_bound1);
  b.bound2 = std::exp(b.log_bound2);
  return b;
}

std::optional<std::pair<std::size_t, std::size_t>> small_k_range(const DegreeSpec& spec, const RangeOptions& opt) {
  spec.validate();
  const double n = static_cast<double>(spec.vertices);
  const double c1 = resolve_c1(spec, opt);
  const double t = static_cast<double>(spec.target_count());
  if (t > c1 * n) return std::nullopt;
  const auto lo = std::max<std::size_t>(static_cast<std::size_t>(std::ceil(30.0 * spec.distinct_degrees() * std::log(n))),
                                        spec.target_count());
  const auto hi = static_cast<std::size_t>(std::floor(c1 * n));
  if (lo > hi) return std::nullopt;
  return std::make_pair(lo, hi);
}

BoundCertificate small_k_quantities(const DegreeSpec& spec, std::size_t k, const RangeOptions& opt) {
  spec.validate();
  const std::size_t t = spec.target_count();
  if (k < t || k > spec.vertices) throw DomainError("small-k evaluation needs t <= k <= n");
  const double n = static_cast<double>(spec.vertices);
  const double x = static_cast<double>(spec.distinct_degrees());
  const double dmax = spec.max_degree();
  const double kd = static_cast<double>(k);
  const double c1 = resolve_c1(spec, opt);

  BoundCertificate cert;
  cert.kind = "small-k";
  spec_params(cert, spec);
  cert.param("k", std::to_string(k));
  cert.param("c1", num(c1));

  double L = 0, D = 0;
  for (const auto& c : spec.classes) {
    const double free = static_cast<double>(c.count - c.targets);
    L += free * c.degree * std::exp(c.degree * kd / n);
    D += c.degree * free / n;
  }
  const double log_ratio = std::log(L) - std::log(n - dmax);
  const double log_base = log_ratio + 1.0 - D;
  const double log_envelope = -static_cast<double>(t) * log_ratio + kd * log_base;

  // b at the real-valued maximiser k_i - t_i = (a_i - t_i) d_i e^{d_i k/n} (k - t) / L.
  double log_b = 0;
  for (const auto& c : spec.classes) {
    const double free = static_cast<double>(c.count - c.targets);
    const double u = free * c.degree * std::exp(c.degree * kd / n) * (kd - t) / L;
    log_b += u + xlog_ratio(u, free) - kd / n * c.degree * (free - u);
    if (u > 0) log_b += u * std::log(c.degree * kd / (n - dmax));
  }

  const double log_n = std::log(n);
  cert.add("x", x);
  cert.add("t", static_cast<double>(t));
  cert.add("range_lo", 30.0 * x * log_n);
  cert.add("range_hi", c1 * n);
  cert.add("L", L);
  cert.add("L_over_n_minus_dmax", std::exp(log_ratio));
  cert.add("base", std::exp(log_base));
  cert.add("log_envelope", log_envelope);
  cert.add("log_b_at_maximiser", log_b);

  cert.check("base_le_0.9", std::exp(log_base) <= 0.9, std::exp(log_base), 0.9);
  cert.check("L_over_n_minus_dmax_ge_1", log_ratio >= 0, std::exp(log_ratio), 1.0);
  cert.check("log_envelope_le_k_log_0.9", log_envelope <= kd * std::log(0.9), log_envelope, kd * std::log(0.9));
  const double lhs = x * log_n + log_envelope;
  cert.check("log_nx_envelope_le_minus_2x_log_n", lhs <= -2 * x * log_n, lhs, -2 * x * log_n);
  cert.check("log_b_at_maximiser_le_log_envelope", log_b <= log_envelope + 1e-9 * std::abs(log_envelope), log_b,
             log_envelope);
  return cert;
}

BoundCertificate small_k_certificate(const DegreeSpec& spec, std::size_t k, const RangeOptions& opt) {
  spec.validate();
  const double n = static_cast<double>(spec.vertices);
  const double c1 = resolve_c1(spec, opt);
  const double lo = 30.0 * spec.distinct_degrees() * std::log(n);
  if (spec.target_count() > c1 * n) throw DomainError("small-k range needs t <= c1 n = " + num(c1 * n));
  if (k < lo || k > c1 * n) {
    throw DomainError("small-k range is [" + num(lo) + ", " + num(c1 * n) + "], k = " + std::to_string(k));
  }
  return small_k_quantities(spec, k, opt);
}

BoundCertificate large_k_certificate(const DegreeSpec& spec, std::size_t k, const RangeOptions& opt) {
  spec.validate();
  const double n = static_cast<double>(spec.vertices);
  const double c1 = resolve_c1(spec, opt);
  const double c2 = resolve_c2(opt);
  const std::size_t t = spec.target_count();
  if (k < c1 * n || k > c2 * n) {
    throw DomainError("large-k range is [" + num(c1 * n) + ", " + num(c2 * n) + "], k = " + std::to_string(k));
  }
  if (t > c2 * n) throw DomainError("large-k range needs t <= c2 n");
  if (k <= t) throw DomainError("large-k evaluation needs k > t");

  const double s = k / n, y = t / n, x = static_cast<double>(spec.distinct_degrees());
  const std::size_t m = spec.classes.size();
  std::vector<double> A(m), w(m), d(m), yi(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = spec.classes[i];
    A[i] = (static_cast<double>(c.count) - static_cast<double>(c.targets)) / n;
    yi[i] = c.targets / n;
    d[i] = c.degree;
    const double q = std::pow(1 - s, d[i]);
    w[i] = (1 - q) / q;
  }

  // Term1^{1/n} is concave in u_i = s_i - y_i; its maximiser on sum u_i = s - y
  // is u_i = A_i w_i / (w_i + mu) for the multiplier mu solving the constraint.
  auto u_of = [&](double log_mu, std::vector<double>& u) {
    double sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = A[i] / (1.0 + std::exp(log_mu - std::log(w[i])));
      sum += u[i];
    }
    return sum;
  };
  std::vector<double> u(m);
  double lo = -800, hi = 800;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    (u_of(mid, u) > s - y ? lo : hi) = mid;
  }
  u_of(0.5 * (lo + hi), u);

  auto log_f = [&](std::size_t i, double ui) {
    const double rest = A[i] - ui;
    return xlog_ratio(ui, A[i]) + xlog_ratio(rest, A[i]) + d[i] * rest * std::log1p(-s) +
           ui * std::log1p(-std::pow(1 - s, d[i]));
  };

  double log_eta = 0, max_log_f = -std::numeric_limits<double>::infinity(), max_c = 0, log_term2 = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lf = log_f(i, u[i]);
    log_eta += lf;
    max_log_f = std::max(max_log_f, lf);
    if (A[i] > 0) {
      const double q = std::pow(1 - s, d[i]);
      max_c = std::max(max_c, std::pow(1 - s, d[i] - 1) / (1 - q) * 2 * s * d[i] * d[i]);
    }
    const double shifted = std::pow(1 - s / (1 - d[i] / n), d[i]);
    log_term2 += n * u[i] * (std::log1p(-shifted) - std::log1p(-std::pow(1 - s, d[i])));
  }
  const double log_term2_cap = max_c * (s - y);

  // Term1^{1/n} at the integer composition closest to the maximiser.
  std::vector<std::size_t> ki(m);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& c = spec.classes[i];
    ki[i] = std::clamp<std::size_t>(c.targets + static_cast<std::size_t>(std::llround(u[i] * n)), c.targets, c.count);
    assigned += ki[i];
  }
  for (std::size_t i = m; i-- > 0 && assigned != k;) {
    const auto& c = spec.classes[i];
    if (assigned < k) {
      const std::size_t add = std::min(k - assigned, c.count - ki[i]);
      ki[i] += add;
      assigned += add;
    } else {
      const std::size_t sub = std::min(assigned - k, ki[i] - c.targets);
      ki[i] -= sub;
      assigned -= sub;
    }
  }
  double log_term1_root_int = 0;
  for (std::size_t i = 0; i < m; ++i) log_term1_root_int += log_f(i, (ki[i] - spec.classes[i].targets) / n);

  const double log_n = std::log(n);
  const double log_a_bound = x * std::log(n + 1) + n * log_eta + log_term2_cap;

  BoundCertificate cert;
  cert.kind = "large-k";
  spec_params(cert, spec);
  cert.param("k", std::to_string(k));
  cert.param("c1", num(c1));
  cert.param("c2", num(c2));
  cert.add("s", s);
  cert.add("y", y);
  for (std::size_t i = 0; i < m; ++i) {
    cert.add("s_minus_y_" + std::to_string(spec.classes[i].degree), u[i]);
    cert.add("f_" + std::to_string(spec.classes[i].degree), std::exp(log_f(i, u[i])));
  }
  cert.add("eta", std::exp(log_eta));
  cert.add("log_term1", n * log_eta);
  cert.add("log_term2_cap", log_term2_cap);
  cert.add("log_term2_at_maximiser", log_term2);
  cert.add("log_a_bound", log_a_bound);

  cert.check("f_le_1", max_log_f <= 1e-12, std::exp(max_log_f), 1.0);
  cert.check("eta_lt_1", log_eta < 0, std::exp(log_eta), 1.0);
  cert.check("term1_root_le_eta", log_term1_root_int <= log_eta + 1e-12, std::exp(log_term1_root_int),
             std::exp(log_eta));
  cert.check("log_term2_le_cap", log_term2 <= log_term2_cap, log_term2, log_term2_cap);
  cert.check("log_a_bound_le_minus_3x_log_n", log_a_bound <= -3 * x * log_n, log_a_bound, -3 * x * log_n);
  return cert;
}

BoundCertificate very_large_k_certificate(const DegreeSpec& spec, std::size_t ell) {
  spec.validate();
  const double n = static_cast<double>(spec.vertices);
  const std::size_t dmin = spec.min_degree(), dmax = spec.max_degree();
  if (ell < dmin + 1) {
    throw DomainError("l = " + std::to_string(ell) + " < d_min + 1: the reverse reachable set is then everything");
  }
  if (ell > n / (kE * kE)) throw DomainError("very-large-k range needs l <= n/e^2 = " + num(n / (kE * kE)));

  const double x = static_cast<double>(spec.distinct_degrees());
  const double l = static_cast<double>(ell);
  const double log_n = std::log(n);
  const double log_a = l * std::log(x * kE * l / n);
  const double log_h = (dmax + 1.0) * std::log(x * kE * (dmax + 1.0));

  BoundCertificate cert;
  cert.kind = "very-large-k";
  spec_params(cert, spec);
  cert.param("l", std::to_string(ell));
  cert.add("k", n - l);
  cert.add("log_a_bound", log_a);
  cert.add("h", std::exp(log_h));
  cert.add("log_h", log_h);
  cert.add("log_h_over_n2", log_h - 2 * log_n);
  if (ell > dmax + 1) {
    const double rhs = -(2 + x) * log_n;
    cert.check("log_a_bound_lt_minus_2_plus_x_log_n", log_a < rhs, log_a, rhs);
  } else {
    // Both sides coincide at l = d_max + 1, where h is defined; compare with a
    // rounding allowance.
    auto le = [](double a, double b) { return a <= b + 1e-12 * std::max(1.0, std::abs(b)); };
    cert.check("log_a_bound_le_log_h_minus_l_log_n", le(log_a, log_h - l * log_n), log_a, log_h - l * log_n);
    const double log_alpha = (l - static_cast<double>(dmin)) * log_n + log_a;
    cert.add("log_alpha_bound", log_alpha);
    cert.check("log_alpha_bound_le_log_h_over_n2", le(log_alpha, log_h - 2 * log_n), log_alpha, log_h - 2 * log_n);
  }
  return cert;
}

BoundCertificate gnp_certificate(std::size_t n, double p, const std::optional<Rational>& exact_p) {
  if (n < 2) throw DomainError("G(n,p) certificate needs n >= 2");
  if (!(p > 0 && p < 1)) throw DomainError("G(n,p) certificate needs 0 < p < 1");
  if (exact_p && (*exact_p <= 0 || *exact_p >= 1)) throw DomainError("G(n,p) certificate needs 0 < p < 1");

  const double nd = static_cast<double>(n);
  const double log_q = std::log1p(-p);
  auto log_t = [&](std::size_t i) {
    return std::lgamma(nd) - std::lgamma(double(i)) - std::lgamma(nd - i + 1) + double(i) * double(n - i) * log_q;
  };
  auto log_g = [&](std::size_t i) {
    return std::lgamma(nd + 1) - std::lgamma(i + 1.0) - std::lgamma(nd - i + 1) + double(i) * double(n - i) * log_q;
  };

  BoundCertificate cert;
  cert.kind = "gnp";
  cert.param("n", std::to_string(n));
  cert.param("p", exact_p ? to_fraction(*exact_p) : num(p));

  // Symmetry t_{n-i} = ((n-i)/i) t_i: equal exponents i(n-i), so it reduces to
  // C(n-1, n-i-1) i = C(n-1, i-1) (n-i), checked with exact integers.
  bool sym = true;
  double max_sym_dev = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (i <= n / 2) {
      sym = sym && binomial(n - 1, n - i - 1) * static_cast<unsigned long>(i) ==
                       binomial(n - 1, i - 1) * static_cast<unsigned long>(n - i);
    }
    max_sym_dev = std::max(max_sym_dev, std::abs(log_t(n - i) - log_t(i) - std::log(double(n - i) / i)));
  }

  const double lt1 = log_t(1);
  double max_g_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 2; i <= n / 2; ++i) max_g_gap = std::max(max_g_gap, log_g(i) - lt1);
  std::vector<double> lts;
  for (std::size_t i = 1; i < n; ++i) lts.push_back(log_t(i));
  const double log_sum_t = log_sum_exp(lts);
  const double log_n = std::log(nd);

  cert.add("log_t1", lt1);
  cert.add("log_sum_t", log_sum_t);
  cert.add("max_log_g_over_t1", std::isfinite(max_g_gap) ? max_g_gap : 0.0);
  cert.add("c", p * nd / log_n);
  cert.add("max_log_symmetry_deviation", max_sym_dev);

  cert.check("symmetry_exact", sym, sym ? 1 : 0, 1);
  cert.check("g_le_t1", !(max_g_gap > 0), std::isfinite(max_g_gap) ? max_g_gap : 0.0, 0.0);
  cert.check("log_t1_le_minus_2_log_n", lt1 <= -2 * log_n, lt1, -2 * log_n);
  cert.check("log_sum_t_le_log_1.5_over_n", log_sum_t <= std::log(1.5 / nd), log_sum_t, std::log(1.5 / nd));

  const bool half = exact_p ? *exact_p == Rational(1, 2) : p == 0.5;
  if (half) {
    const double lhs = std::log(1.5 * nd) + lt1, rhs = nd * std::log(0.75);
    cert.check("log_three_halves_n_t1_lt_n_log_0.75", lhs < rhs, lhs, rhs);
    cert.check("log_sum_t_lt_n_log_0.75", log_sum_t < rhs, log_sum_t, rhs);
    if (n <= kGnpExactMaxVertices) {
      const Rational tail = 1 - r_np_exact(n, Rational(1, 2));
      const Rational bound = power(Rational(3, 4), n);
      cert.add("log_one_minus_R_exact", tail > 0 ? log_of(tail) : -std::numeric_limits<double>::infinity());
      cert.check("one_minus_R_lt_0.75_pow_n_exact", tail < bound, tail > 0 ? log_of(tail) : 0.0, log_of(bound));
    }
  }

  if (exact_p && n <= kGnpExactMaxVertices) {
    const Rational& pe = *exact_p;
    std::vector<Rational> t(n);
    for (std::size_t i = 1; i < n; ++i) t[i] = t_term(n, pe, i);
    bool sym_q = true, g_ok = true;
    Rational sum = 0;
    double max_dev = 0;
    for (std::size_t i = 1; i < n; ++i) {
      sym_q = sym_q && t[n - i] * static_cast<unsigned long>(i) == t[i] * static_cast<unsigned long>(n - i);
      sum += t[i];
      max_dev = std::max(max_dev, std::abs(log_of(t[i]) - log_t(i)));
      if (i >= 2 && i <= n / 2) {
        const Rational g = g_term(n, pe, i);
        g_ok = g_ok && g <= t[1];
        max_dev = std::max(max_dev, std::abs(log_of(g) - log_g(i)));
      }
    }
    const Rational inv_n2(1, static_cast<unsigned long>(n * n));
    cert.add("max_log_space_deviation", max_dev);
    cert.check("symmetry_rational", sym_q, sym_q ? 1 : 0, 1);
    cert.check("g_le_t1_exact", g_ok, g_ok ? 1 : 0, 1);
    cert.check("t1_le_inv_n2_exact", t[1] <= inv_n2, log_of(t[1]), log_of(inv_n2));
    cert.check("sum_t_le_1.5_over_n_exact", sum <= Rational(3, static_cast<unsigned long>(2 * n)), log_of(sum),
               std::log(1.5 / nd));
    // Relative error 1e-9 on the value, as a log difference.
    cert.check("log_space_agrees_with_exact", max_dev <= 1e-9, max_dev, 1e-9);
  }
  return cert;
}

BoundCertificate stirling_check(std::size_t ell, std::size_t j) {
  if (j < 1 || j > ell) throw DomainError("Stirling check needs 1 <= j <= l");
  const BigInt c = binomial(ell, j);
  const long double L = ell, J = j;
  const long double log_c = log_of(Rational(c));
  const long double log_rhs1 = J * (1.0L + std::log(L) - std::log(J));
  // (l/(l-j))^{l-j} is 1 when j = l.
  const long double tail = j == ell ? 0.0L : (L - J) * (std::log(L) - std::log(L - J));
  const long double log_rhs2 = std::log(L + 1) + J * (std::log(L) - std::log(J)) + tail;

  BoundCertificate cert;
  cert.kind = "stirling";
  cert.param("l", std::to_string(ell));
  cert.param("j", std::to_string(j));
  cert.add("binomial", c.get_d());
  cert.add("rhs1", static_cast<double>(std::exp(log_rhs1)));
  cert.add("rhs2", static_cast<double>(std::exp(log_rhs2)));
  cert.check("binomial_le_rhs1", log_c <= log_rhs1, c.get_d(), static_cast<double>(std::exp(log_rhs1)));
  cert.check("binomial_le_rhs2", log_c <= log_rhs2, c.get_d(), static_cast<double>(std::exp(log_rhs2)));
  return cert;
}

std::optional<std::size_t> threshold_sweep(const std::function<bool(std::size_t)>& holds, std::size_t lo,
                                           std::size_t hi, double step) {
  if (lo > hi) throw DomainError("threshold sweep needs lo <= hi");
  std::vector<std::size_t> grid{lo};
  while (grid.back() < hi) {
    const auto next = std::max(grid.back() + 1, static_cast<std::size_t>(grid.back() * step));
    grid.push_back(std::min(next, hi));
  }
  std::optional<std::size_t> last_fail;
  for (std::size_t g = 0; g < grid.size(); ++g)
    if (!holds(grid[g])) last_fail = g;
  if (!last_fail) return lo;
  if (*last_fail + 1 == grid.size()) return std::nullopt;
  std::size_t bad = grid[*last_fail], good = grid[*last_fail + 1];
  while (good - bad > 1) {
    const std::size_t mid = bad + (good - bad) / 2;
    (holds(mid) ? good : bad) = mid;
  }
  return good;
}

}  // namespace mdpavg
