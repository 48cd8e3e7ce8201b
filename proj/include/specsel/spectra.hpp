#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "specsel/graph.hpp"
#include "specsel/matrix.hpp"

namespace specsel {

// Eigenvalues sorted ascending, plus the a-priori backward error bound
// (n * eps * ||m||_F) of the solve that produced them.
struct Spectrum {
  std::vector<double> lambda;
  double tol = 0.0;

  std::size_t size() const noexcept { return lambda.size(); }
  double max() const noexcept { return lambda.empty() ? 0.0 : lambda.back(); }
};

/// All eigenvalues of a real symmetric matrix, ascending.
///
/// Householder reduction to tridiagonal form followed by implicit-shift QL.
/// Eigenvectors are not accumulated. Values in [-1e-8 * ||m||_F, 0) are
/// rounded up to exactly zero.
///
/// Throws ConfigError if m is not square or its relative asymmetry exceeds
/// 1e-12, NumericalError if QL fails to converge within 30 * n sweeps.
Spectrum eigenvalues_symmetric(const DenseMatrix& m);

// Eigenvalues of laplacian(g), or of directed_laplacian(g) for directed g.
Spectrum spectrum(const Graph& g);

// Default threshold for treating an eigenvalue as zero: 1e-6 * max(1, lambda_max).
double default_zero_eps(const Spectrum& s);

// Number of eigenvalues strictly below eps.
std::size_t zero_multiplicity(const Spectrum& s, double eps);
std::size_t zero_multiplicity(const Spectrum& s);

/// Spectrum CSV: `model_label,replicate_id,lambda_1,...,lambda_n`.
///
/// Values are printed with 12 significant digits; magnitudes below
/// 1e-10 * max(1, lambda_max) print as 0.
struct SpectrumRow {
  std::string model_label;
  std::size_t replicate_id = 0;
  Spectrum spectrum;
};

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumRow> rows);

}  // namespace specsel
