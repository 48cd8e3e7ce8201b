#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specsel/matrix.hpp"

namespace specsel {

using Edge = std::pair<std::size_t, std::size_t>;

/// Simple graph on nodes 0..n-1 with bit-packed adjacency rows.
///
/// Undirected graphs keep both (i, j) and (j, i) bits set. Self-loops are
/// rejected. For directed graphs row i holds the out-neighbours of i.
class Graph {
 public:
  Graph(std::size_t n, bool directed);

  static Graph from_edges(std::size_t n, bool directed, std::span<const Edge> edges);
  static Graph complete(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }

  bool has_edge(std::size_t i, std::size_t j) const noexcept {
    return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1U;
  }

  void set_edge(std::size_t i, std::size_t j, bool present);
  void add_edge(std::size_t i, std::size_t j) { set_edge(i, j, true); }
  void remove_edge(std::size_t i, std::size_t j) { set_edge(i, j, false); }
  // Flips the dyad and returns its new state.
  bool toggle(std::size_t i, std::size_t j);

  // Undirected: unordered pairs. Directed: arcs.
  std::size_t edge_count() const noexcept;

  std::size_t out_degree(std::size_t i) const noexcept;
  std::size_t in_degree(std::size_t i) const;

  // |N(i) & N(j)| for undirected graphs, from the packed rows.
  std::size_t common_neighbors(std::size_t i, std::size_t j) const noexcept {
    const std::uint64_t* a = bits_.data() + i * words_;
    const std::uint64_t* b = bits_.data() + j * words_;
    std::size_t count = 0;
    for (std::size_t w = 0; w < words_; ++w) count += std::popcount(a[w] & b[w]);
    return count;
  }

  std::span<const std::uint64_t> row(std::size_t i) const noexcept {
    return {bits_.data() + i * words_, words_};
  }

  // Row-major scan: (i, j) with i < j for undirected graphs, all arcs otherwise.
  std::vector<Edge> edges() const;

  bool operator==(const Graph&) const = default;

 private:
  void check_pair(std::size_t i, std::size_t j) const;

  std::size_t n_;
  bool directed_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

using DegreeVector = std::vector<std::size_t>;

// Entries in {-1, 0, +1}; one column per arc, tail -1, head +1.
struct IncidenceMatrix {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::vector<std::int8_t> entries;  // row-major, nodes x edges

  int operator()(std::size_t node, std::size_t edge) const { return entries[node * edges + edge]; }
};

// Row sums; in+out for directed graphs.
DegreeVector degrees(const Graph& g);

// diag(d) - X. Throws ConfigError for directed graphs.
DenseMatrix laplacian(const Graph& g);

// Column order follows Graph::edges(). Throws ConfigError for undirected graphs.
IncidenceMatrix incidence(const Graph& g);

// B * B^t (n x n). Shares its nonzero spectrum with B^t * B.
DenseMatrix directed_laplacian(const Graph& g);

// Union-find component count. Throws ConfigError for directed graphs.
std::size_t connected_components(const Graph& g);

// Relabels node i as perm[i]. Throws ConfigError unless perm is a bijection.
Graph permute(const Graph& g, std::span<const std::size_t> perm);

// Edge-list text format:
//   n <N> directed <0|1>
//   i j        (1-indexed, one pair per line)
// Blank lines are ignored. Errors carry the offending line number.
Graph read_edge_list(std::istream& in);
Graph read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g);

}  // namespace specsel
