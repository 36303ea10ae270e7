#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mdpavg {

/// Every setting of one CLI invocation. Rendered as `key=value` lines, one per
/// field, in a fixed order; parse(to_text()) gives back an equal config.
struct RunConfig {
  std::string command;
  std::string mode;

  std::string model;
  std::size_t n = 0;
  std::string degrees;
  /// Kept as text so `num/den` stays exact.
  std::string p;
  double player1_prob = 0.5;
  std::size_t targets = 1;
  std::size_t stages = 0;

  std::uint64_t seed = 1;
  std::uint64_t trials = 1;
  unsigned jobs = 1;

  std::string input;
  std::string out;
  std::string summary_out;

  std::size_t k = 0;
  std::size_t l = 0;
  std::size_t j = 0;
  double c1 = -1.0;
  double c2 = -1.0;

  bool brute_force = false;
  bool oracle = false;
  bool json = false;
  bool range_check = true;
  int digits = 12;

  std::string to_text() const;
  /// The same lines without newlines, for report headers.
  std::vector<std::string> lines() const;

  /// Skips blank lines and `#` comments. Throws InputError for unknown keys
  /// or malformed values.
  static RunConfig parse(std::string_view text);
  static RunConfig load(const std::string& path);

  /// Sets one field from its text form; same errors as parse.
  void set(std::string_view key, std::string_view value);

  bool operator==(const RunConfig&) const = default;
};

}  // namespace mdpavg
