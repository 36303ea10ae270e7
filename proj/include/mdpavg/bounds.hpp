#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mdpavg/exact.hpp"
#include "mdpavg/models.hpp"

namespace mdpavg {

/// A named number. Quantities whose magnitude can leave the double range are
/// stored as natural logs and carry a `log_` prefix.
struct Quantity {
  std::string name;
  double value = 0.0;
};

/// One checked inequality `lhs <op> rhs`; log-space comparisons say so in
/// their name.
struct Verdict {
  std::string name;
  bool pass = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

struct BoundCertificate {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<Quantity> quantities;
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;

  bool all_pass() const;
  /// Throws std::out_of_range for unknown names.
  double quantity(const std::string& name) const;
  const Verdict& verdict(const std::string& name) const;

  void param(std::string key, std::string value) { params.emplace_back(std::move(key), std::move(value)); }
  void add(std::string name, double value) { quantities.push_back({std::move(name), value}); }
  void check(std::string name, bool pass, double lhs, double rhs) {
    verdicts.push_back({std::move(name), pass, lhs, rhs});
  }
};

/// One `key=value` line per parameter, quantity and verdict.
std::string to_text(const BoundCertificate& cert);
nlohmann::json to_json(const BoundCertificate& cert);

/// Upper bounds on R(k_1..k_x) from the "some edge inside S" argument.
struct RUpperBound {
  double bound1 = 1.0;  ///< prod (1-(1-k/(n-d_i))^{d_i})^{k_i-t_i}
  double bound2 = 1.0;  ///< prod (d_i k/(n-d_max))^{k_i-t_i}
  double log_bound1 = 0.0;
  double log_bound2 = 0.0;
};

/// Requires k <= n - d_max (DomainError otherwise).
RUpperBound r_upper_bound(const DegreeSpec& spec, const Composition& comp);

struct RangeOptions {
  /// Negative means the default 0.04 / d_max.
  double c1 = -1.0;
  /// Negative means the default 1 - 1/e^2.
  double c2 = -1.0;
};

double default_c1(const DegreeSpec& spec);
double default_c2();

/// Small-k quantities without the range check: L, the envelope and base of the
/// maximised b, the continuous maximiser's b, and the four verdicts.
BoundCertificate small_k_quantities(const DegreeSpec& spec, std::size_t k, const RangeOptions& opt = {});

/// As above, but throws DomainError unless 30 x ln n <= k <= c1 n and t <= c1 n.
BoundCertificate small_k_certificate(const DegreeSpec& spec, std::size_t k, const RangeOptions& opt = {});

/// Smallest and largest k accepted by small_k_certificate; nullopt when empty.
std::optional<std::pair<std::size_t, std::size_t>> small_k_range(const DegreeSpec& spec, const RangeOptions& opt = {});

/// Large-k chain at k = s n: Term1 at its continuous maximiser over
/// compositions, per-class f(d_i), the Term2 cap and the final a <= n^{-3x}
/// verdict. Throws DomainError unless c1 n <= k <= c2 n and t <= c2 n.
BoundCertificate large_k_certificate(const DegreeSpec& spec, std::size_t k, const RangeOptions& opt = {});

/// Very-large-k bounds at l = n - k. Throws DomainError unless
/// d_min + 1 <= l <= n / e^2.
BoundCertificate very_large_k_certificate(const DegreeSpec& spec, std::size_t ell);

/// G(n,p) chain: symmetry of t_i, g_i <= t_1, t_1 <= 1/n^2, sum t_i <= 1.5/n,
/// and for p = 1/2 the (3/4)^n tail. When `exact_p` is given and n is small
/// enough, t_i and g_i are also evaluated exactly and compared.
BoundCertificate gnp_certificate(std::size_t n, double p, const std::optional<Rational>& exact_p = std::nullopt);

inline constexpr std::size_t kGnpExactMaxVertices = 200;

/// Both binomial inequalities derived from Stirling's bounds.
BoundCertificate stirling_check(std::size_t ell, std::size_t j);

/// Smallest n in [lo, hi] such that `holds` is true at every grid point from n
/// up to hi. The grid is geometric with ratio `step` and is then refined by
/// bisection between the last failing and first passing grid point (assumes
/// the verdict is monotone in n there). nullopt when it fails at hi.
std::optional<std::size_t> threshold_sweep(const std::function<bool(std::size_t)>& holds, std::size_t lo,
                                           std::size_t hi, double step = 1.25);

}  // namespace mdpavg
