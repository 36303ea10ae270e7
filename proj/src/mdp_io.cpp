#include "mdpavg/mdp_io.hpp"

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "mdpavg/error.hpp"

namespace mdpavg {
namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t to_uint(std::string_view tok, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected ") + what + ", got '" + std::string(tok) + "'");
  }
  return value;
}

}  // namespace

Mdp parse_mdp(std::istream& in) {
  std::optional<std::size_t> n;
  std::vector<std::vector<Vertex>> succ;
  std::vector<VertexKind> kinds;
  VertexMask buchi;
  std::vector<std::uint8_t> seen;
  std::size_t vertex_lines = 0;
  std::size_t line_no = 0;
  std::string raw;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = tokenize(line);
    if (tok.empty()) continue;

    if (!n) {
      if (tok.size() != 1) throw ParseError(line_no, "first line must hold the vertex count");
      n = to_uint(tok[0], line_no, "vertex count");
      if (*n == 0) throw ParseError(line_no, "vertex count must be positive");
      succ.resize(*n);
      kinds.resize(*n);
      buchi.assign(*n, 0);
      seen.assign(*n, 0);
      continue;
    }
    if (vertex_lines == *n) throw ParseError(line_no, "more vertex lines than the declared count");
    if (tok.size() < 4) throw ParseError(line_no, "expected 'id kind buchi succ_count succ...'");

    const auto id = to_uint(tok[0], line_no, "vertex id");
    if (id >= *n) throw ParseError(line_no, "vertex id " + std::to_string(id) + " out of range");
    if (seen[id]) throw ParseError(line_no, "vertex " + std::to_string(id) + " listed twice");
    seen[id] = 1;

    if (tok[1] == "P") {
      kinds[id] = VertexKind::Player1;
    } else if (tok[1] == "R") {
      kinds[id] = VertexKind::Random;
    } else {
      throw ParseError(line_no, "unknown vertex kind '" + std::string(tok[1]) + "' (expected P or R)");
    }

    if (tok[2] == "1") {
      buchi[id] = 1;
    } else if (tok[2] != "0") {
      throw ParseError(line_no, "Büchi flag must be 0 or 1");
    }

    const auto count = to_uint(tok[3], line_no, "successor count");
    if (count == 0) throw ParseError(line_no, "vertex " + std::to_string(id) + " has no outgoing edge");
    if (tok.size() != 4 + count) {
      throw ParseError(line_no, "successor count " + std::to_string(count) + " does not match " +
                                    std::to_string(tok.size() - 4) + " listed successors");
    }
    for (std::size_t k = 0; k < count; ++k) {
      const auto w = to_uint(tok[4 + k], line_no, "successor id");
      if (w >= *n) throw ParseError(line_no, "successor " + std::to_string(w) + " out of range");
      for (Vertex prev : succ[id]) {
        if (prev == w) throw ParseError(line_no, "duplicate successor " + std::to_string(w));
      }
      succ[id].push_back(static_cast<Vertex>(w));
    }
    ++vertex_lines;
  }
  if (!n) throw ParseError(line_no, "empty input");
  if (vertex_lines != *n) {
    throw ParseError(line_no, "expected " + std::to_string(*n) + " vertex lines, found " +
                                  std::to_string(vertex_lines));
  }
  return Mdp(succ, std::move(kinds), std::move(buchi));
}

Mdp parse_mdp(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_mdp(in);
}

void write_mdp(std::ostream& out, const Mdp& mdp, const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
  out << mdp.size() << '\n';
  for (std::size_t v = 0; v < mdp.size(); ++v) {
    const auto vertex = static_cast<Vertex>(v);
    auto succ = mdp.successors(vertex);
    out << v << ' ' << (mdp.kind(vertex) == VertexKind::Player1 ? 'P' : 'R') << ' '
        << (mdp.is_buchi(vertex) ? 1 : 0) << ' ' << succ.size();
    for (Vertex w : succ) out << ' ' << w;
    out << '\n';
  }
}

std::string format_mdp(const Mdp& mdp, const std::vector<std::string>& header) {
  std::ostringstream out;
  write_mdp(out, mdp, header);
  return out.str();
}

}  // namespace mdpavg
