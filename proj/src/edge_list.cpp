#include "perturb/edge_list.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

namespace perturb {

EdgeListError::EdgeListError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::uint64_t> parse_fields(std::string_view text, std::size_t line_no) {
  std::vector<std::uint64_t> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
    if (i == text.size()) break;
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + i, text.data() + text.size(), value);
    if (ec != std::errc() || ptr == text.data() + i)
      throw EdgeListError(line_no, "expected a non-negative integer near '" +
                                       std::string(text.substr(i, 16)) + "'");
    i = static_cast<std::size_t>(ptr - text.data());
    if (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r')
      throw EdgeListError(line_no, "unexpected character '" + std::string(1, text[i]) + "'");
    out.push_back(value);
  }
  return out;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw EdgeListError(1, "missing header 'n m'");
  ++line_no;
  const auto header = parse_fields(line, line_no);
  if (header.size() != 2) throw EdgeListError(line_no, "header must be 'n m'");
  const std::uint64_t n = header[0];
  const std::uint64_t m = header[1];
  if (n == 0) throw EdgeListError(line_no, "vertex count must be positive");
  if (m > n * (n - 1) / 2) throw EdgeListError(line_no, "edge count exceeds n(n-1)/2");

  Graph g(n);
  for (std::uint64_t k = 0; k < m; ++k) {
    if (!std::getline(in, line))
      throw EdgeListError(line_no + 1, "expected " + std::to_string(m) + " edges, got " +
                                           std::to_string(k));
    ++line_no;
    const auto f = parse_fields(line, line_no);
    if (f.size() != 2) throw EdgeListError(line_no, "edge line must be 'u v'");
    const auto u = f[0];
    const auto v = f[1];
    if (u >= n || v >= n) throw EdgeListError(line_no, "vertex out of range");
    if (u == v) throw EdgeListError(line_no, "self-loop");
    if (u > v) throw EdgeListError(line_no, "edge must be written with u < v");
    if (!g.add_edge(static_cast<Vertex>(u), static_cast<Vertex>(v)))
      throw EdgeListError(line_no, "duplicate edge");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!parse_fields(line, line_no).empty())
      throw EdgeListError(line_no, "trailing data after the declared edges");
  }
  return g;
}

Graph read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

void write_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(out, g);
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace perturb
