#include "mdpavg/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

#include "mdpavg/error.hpp"

namespace mdpavg {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw InputError("config: bad value for " + std::string(key) + ": '" + std::string(v) + "'");
  return out;
}

// Shortest text that reads back to the same double.
std::string show(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InputError("config: bad value for " + std::string(key) + ": '" + std::string(v) + "'");
}

struct Field {
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> put;
};

template <class T>
Field number(const char* key, T RunConfig::*m) {
  return {key, [m](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>)
              return show(c.*m);
            else
              return std::to_string(c.*m);
          },
          [key, m](RunConfig& c, std::string_view v) { c.*m = parse_number<T>(key, v); }};
}

Field text(const char* key, std::string RunConfig::*m) {
  return {key, [m](const RunConfig& c) { return c.*m; },
          [m](RunConfig& c, std::string_view v) { c.*m = std::string(v); }};
}

Field flag(const char* key, bool RunConfig::*m) {
  return {key, [m](const RunConfig& c) { return std::string(c.*m ? "true" : "false"); },
          [key, m](RunConfig& c, std::string_view v) { c.*m = parse_bool(key, v); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      text("command", &RunConfig::command),
      text("mode", &RunConfig::mode),
      text("model", &RunConfig::model),
      number("n", &RunConfig::n),
      text("degrees", &RunConfig::degrees),
      text("p", &RunConfig::p),
      number("player1_prob", &RunConfig::player1_prob),
      number("targets", &RunConfig::targets),
      number("stages", &RunConfig::stages),
      number("seed", &RunConfig::seed),
      number("trials", &RunConfig::trials),
      number("jobs", &RunConfig::jobs),
      text("input", &RunConfig::input),
      text("out", &RunConfig::out),
      text("summary_out", &RunConfig::summary_out),
      number("k", &RunConfig::k),
      number("l", &RunConfig::l),
      number("j", &RunConfig::j),
      number("c1", &RunConfig::c1),
      number("c2", &RunConfig::c2),
      flag("brute_force", &RunConfig::brute_force),
      flag("oracle", &RunConfig::oracle),
      flag("json", &RunConfig::json),
      flag("range_check", &RunConfig::range_check),
      number("digits", &RunConfig::digits),
  };
  return table;
}

}  // namespace

std::vector<std::string> RunConfig::lines() const {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(std::string(f.key) + "=" + f.get(*this));
  return out;
}

std::string RunConfig::to_text() const {
  std::string s;
  for (const auto& line : lines()) s += line + "\n";
  return s;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (key == f.key) {
      f.put(*this, value);
      return;
    }
  }
  throw InputError("config: unknown key '" + std::string(key) + "'");
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig c;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InputError("config line " + std::to_string(line_no) + ": expected key=value");
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

}  // namespace mdpavg
