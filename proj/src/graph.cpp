#include "specsel/graph.hpp"

#include <numeric>

#include "specsel/error.hpp"

namespace specsel {

Graph::Graph(std::size_t n, bool directed)
    : n_(n), directed_(directed), words_((n + 63) / 64), bits_(n * words_, 0) {
  if (n == 0) throw ConfigError("graph must have at least one node");
}

Graph Graph::from_edges(std::size_t n, bool directed, std::span<const Edge> edges) {
  Graph g(n, directed);
  for (const auto& [i, j] : edges) g.add_edge(i, j);
  return g;
}

Graph Graph::complete(std::size_t n) {
  Graph g(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

void Graph::check_pair(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw ConfigError("node index out of range");
  if (i == j) throw ConfigError("self-loops are not allowed");
}

void Graph::set_edge(std::size_t i, std::size_t j, bool present) {
  check_pair(i, j);
  auto put = [&](std::size_t a, std::size_t b) {
    std::uint64_t& word = bits_[a * words_ + (b >> 6)];
    const std::uint64_t mask = std::uint64_t{1} << (b & 63);
    word = present ? (word | mask) : (word & ~mask);
  };
  put(i, j);
  if (!directed_) put(j, i);
}

bool Graph::toggle(std::size_t i, std::size_t j) {
  const bool now = !has_edge(i, j);
  set_edge(i, j, now);
  return now;
}

std::size_t Graph::edge_count() const noexcept {
  std::size_t bits = 0;
  for (std::uint64_t w : bits_) bits += std::popcount(w);
  return directed_ ? bits : bits / 2;
}

std::size_t Graph::out_degree(std::size_t i) const noexcept {
  std::size_t d = 0;
  for (std::uint64_t w : row(i)) d += std::popcount(w);
  return d;
}

std::size_t Graph::in_degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += has_edge(j, i) ? 1 : 0;
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = directed_ ? 0 : i + 1; j < n_; ++j)
      if (has_edge(i, j)) out.emplace_back(i, j);
  return out;
}

DegreeVector degrees(const Graph& g) {
  const std::size_t n = g.size();
  DegreeVector d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = g.out_degree(i);
  if (g.directed())
    for (std::size_t i = 0; i < n; ++i) d[i] += g.in_degree(i);
  return d;
}

DenseMatrix laplacian(const Graph& g) {
  if (g.directed()) throw ConfigError("laplacian requires an undirected graph; use directed_laplacian");
  const std::size_t n = g.size();
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (g.has_edge(i, j)) m(i, j) = -1.0;
    m(i, i) = static_cast<double>(g.out_degree(i));
  }
  return m;
}

IncidenceMatrix incidence(const Graph& g) {
  if (!g.directed()) throw ConfigError("incidence requires a directed graph");
  const auto arcs = g.edges();
  IncidenceMatrix b;
  b.nodes = g.size();
  b.edges = arcs.size();
  b.entries.assign(b.nodes * b.edges, 0);
  for (std::size_t col = 0; col < arcs.size(); ++col) {
    b.entries[arcs[col].first * b.edges + col] = -1;
    b.entries[arcs[col].second * b.edges + col] = 1;
  }
  return b;
}

DenseMatrix directed_laplacian(const Graph& g) {
  if (!g.directed()) throw ConfigError("directed_laplacian requires a directed graph");
  // Each arc i->j adds the rank-one term (e_j - e_i)(e_j - e_i)^t; summing
  // them directly avoids materialising B.
  const std::size_t n = g.size();
  DenseMatrix m(n, n);
  for (const auto& [i, j] : g.edges()) {
    m(i, i) += 1.0;
    m(j, j) += 1.0;
    m(i, j) -= 1.0;
    m(j, i) -= 1.0;
  }
  return m;
}

std::size_t connected_components(const Graph& g) {
  if (g.directed()) throw ConfigError("connected_components requires an undirected graph");
  const std::size_t n = g.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t components = n;
  for (const auto& [i, j] : g.edges()) {
    const std::size_t a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

Graph permute(const Graph& g, std::span<const std::size_t> perm) {
  const std::size_t n = g.size();
  if (perm.size() != n) throw ConfigError("permutation length does not match node count");
  std::vector<bool> seen(n, false);
  for (std::size_t p : perm) {
    if (p >= n) throw ConfigError("permutation index out of range");
    if (seen[p]) throw ConfigError("permutation has a duplicate index");
    seen[p] = true;
  }
  Graph out(n, g.directed());
  for (const auto& [i, j] : g.edges()) out.add_edge(perm[i], perm[j]);
  return out;
}

}  // namespace specsel
