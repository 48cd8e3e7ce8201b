#pragma once

// Independent reference implementations used only by the tests. None of them
// share code with the library paths they check.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "specsel/graph.hpp"
#include "specsel/matrix.hpp"

namespace oracle {

// Characteristic polynomial det(xI - A) of an integer matrix, coefficients
// from x^0 up to x^n (leading coefficient 1), by Faddeev-LeVerrier in exact
// integer arithmetic.
std::vector<__int128> charpoly(const std::vector<std::vector<long long>>& a);

// All roots (with multiplicity, ascending) of a monic integer polynomial whose
// roots are all real: exact square-free decomposition over the rationals, then
// bisection between critical points of each square-free factor.
std::vector<long double> real_roots(const std::vector<__int128>& coeffs);

// Laplacian of an undirected graph as an integer matrix.
std::vector<std::vector<long long>> integer_laplacian(const specsel::Graph& g);

// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
std::vector<double> jacobi_eigenvalues(const specsel::DenseMatrix& m);

// Components by breadth-first search.
std::size_t bfs_components(const specsel::Graph& g);

// Edges whose endpoints have exactly t common neighbours, by triple loop.
std::size_t sp_brute(const specsel::Graph& g, std::size_t t);

// Sum over t >= 1 of w[t] * sp_brute(g, t).
double gwesp_brute(const specsel::Graph& g, const std::vector<double>& w);

// Exact distribution of the edge count under
// P(x) ~ exp(theta1 * edges + sum_t w[t] SP_t(x)) on n <= 6 nodes,
// by enumerating all 2^C(n,2) graphs. Index = edge count.
std::vector<double> ergm_edge_distribution(std::size_t n, double theta1, const std::vector<double>& w);

}  // namespace oracle
