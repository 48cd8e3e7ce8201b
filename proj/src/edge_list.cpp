#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "specsel/error.hpp"
#include "specsel/graph.hpp"

namespace specsel {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
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

bool parse_size(std::string_view s, std::size_t& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string_view> tok;

  while (std::getline(in, line)) {
    ++lineno;
    tok = split_ws(line);
    if (!tok.empty()) break;
  }
  if (tok.empty()) throw ParseError("missing header 'n <N> directed <0|1>'", lineno == 0 ? 1 : lineno);

  std::size_t n = 0, dir = 0;
  if (tok.size() != 4 || tok[0] != "n" || tok[2] != "directed" || !parse_size(tok[1], n) ||
      !parse_size(tok[3], dir) || dir > 1 || n == 0)
    throw ParseError("malformed header, expected 'n <N> directed <0|1>'", lineno);

  Graph g(n, dir == 1);
  while (std::getline(in, line)) {
    ++lineno;
    tok = split_ws(line);
    if (tok.empty()) continue;
    std::size_t i = 0, j = 0;
    if (tok.size() != 2 || !parse_size(tok[0], i) || !parse_size(tok[1], j))
      throw ParseError("expected an 'i j' pair", lineno);
    if (i < 1 || i > n || j < 1 || j > n) throw ParseError("node index out of range 1.." + std::to_string(n), lineno);
    if (i == j) throw ParseError("self-loop", lineno);
    if (g.has_edge(i - 1, j - 1)) throw ParseError("duplicate edge " + std::to_string(i) + " " + std::to_string(j), lineno);
    g.add_edge(i - 1, j - 1);
  }
  return g;
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list '" + path + "'");
  try {
    return read_edge_list(in);
  } catch (const ParseError& e) {
    throw ParseError(e.detail(), e.line(), path);
  }
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n " << g.size() << " directed " << (g.directed() ? 1 : 0) << '\n';
  for (const auto& [i, j] : g.edges()) out << i + 1 << ' ' << j + 1 << '\n';
}

}  // namespace specsel
