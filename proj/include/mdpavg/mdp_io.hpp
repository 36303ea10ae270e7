#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mdpavg/mdp.hpp"

namespace mdpavg {

// Plain-text MDP format:
//
//   n
//   id kind buchi succ_count succ_1 ... succ_k      (one line per vertex)
//
// kind is P (player 1) or R (random), buchi is 0 or 1. Everything after '#'
// on a line is a comment; blank lines are skipped. Vertex lines may come in
// any order but every id in [0, n) must appear exactly once.

/// Throws ParseError naming the offending line.
Mdp parse_mdp(std::istream& in);
Mdp parse_mdp(std::string_view text);

/// Canonical rendering; `header` lines are emitted first as `# ...` comments.
void write_mdp(std::ostream& out, const Mdp& mdp, const std::vector<std::string>& header = {});
std::string format_mdp(const Mdp& mdp, const std::vector<std::string>& header = {});

}  // namespace mdpavg
