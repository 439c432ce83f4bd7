#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "perturb/graph.hpp"

namespace perturb {

/// Malformed edge-list input; `line()` is 1-based.
class EdgeListError : public std::runtime_error {
 public:
  EdgeListError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Edge-list text format:
//   n m
//   u v      (m lines, 0 <= u < v < n)
// Duplicate edges, self-loops and out-of-range vertices are rejected.
Graph read_edge_list(std::istream& in);
Graph read_edge_list(const std::filesystem::path& path);

void write_edge_list(std::ostream& out, const Graph& g);
void write_edge_list(const std::filesystem::path& path, const Graph& g);

}  // namespace perturb
