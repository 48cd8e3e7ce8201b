#include "specsel/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "specsel/error.hpp"

namespace specsel {

namespace {

double frobenius(const DenseMatrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

// Reduces a (symmetric, full storage) to tridiagonal form in place.
// On return d holds the diagonal and e[k] the (k, k+1) off-diagonal.
//
// Both triangles are kept up to date so every inner loop walks a row
// contiguously; that costs ~2n^3 flops instead of 4n^3/3 but vectorises.
void tridiagonalize(DenseMatrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = a.rows();
  d.assign(n, 0.0);
  e.assign(n, 0.0);
  std::vector<double> v(n), p(n);

  for (std::size_t k = 0; k + 2 < n; ++k) {
    const std::size_t m = n - k - 1;
    const double* x = &a(k, k + 1);

    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(x[i]));
    if (scale == 0.0) {
      e[k] = 0.0;
      continue;
    }
    double norm2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = x[i] / scale;
      norm2 += v[i] * v[i];
    }
    const double norm = std::sqrt(norm2);
    const double alpha = v[0] >= 0.0 ? -norm : norm;
    // v = x/scale - alpha e1; ||v||^2 = 2 (norm^2 - alpha x0)
    const double vnorm2 = 2.0 * (norm2 - alpha * v[0]);
    v[0] -= alpha;
    e[k] = alpha * scale;
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // p = beta * A_sub v
    double pv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = &a(k + 1 + i, k + 1);
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += row[j] * v[j];
      p[i] = beta * s;
      pv += p[i] * v[i];
    }
    // w = p - (beta/2)(p.v) v, stored back into p
    const double kappa = 0.5 * beta * pv;
    for (std::size_t i = 0; i < m; ++i) p[i] -= kappa * v[i];

    // A_sub -= v w^t + w v^t
    for (std::size_t i = 0; i < m; ++i) {
      double* row = &a(k + 1 + i, k + 1);
      const double vi = v[i], wi = p[i];
      for (std::size_t j = 0; j < m; ++j) row[j] -= vi * p[j] + wi * v[j];
    }
  }
  if (n >= 2) e[n - 2] = a(n - 2, n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  e[n - 1] = 0.0;
}

// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues land in d.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  const std::size_t n = d.size();
  if (n == 0) return;
  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_sweeps = 30 * n;
  std::size_t sweeps = 0;

  for (std::size_t l = 0; l < n; ++l) {
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) < std::numeric_limits<double>::min()) break;
      }
      if (m == l) break;
      if (++sweeps > max_sweeps)
        throw NumericalError("QL iteration failed to converge after " + std::to_string(max_sweeps) + " sweeps");

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

}  // namespace

Spectrum eigenvalues_symmetric(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw ConfigError("eigenvalues_symmetric requires a square matrix");

  const double norm = frobenius(m);
  if (!std::isfinite(norm)) throw ConfigError("matrix has non-finite entries");
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
  if (asym > 1e-12 * std::max(1.0, norm)) throw ConfigError("matrix is not symmetric");

  Spectrum out;
  if (n == 0) return out;

  DenseMatrix a = m;
  std::vector<double> d, e;
  tridiagonalize(a, d, e);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());

  const double clamp = -1e-8 * norm;
  for (double& x : d)
    if (x < 0.0 && x >= clamp) x = 0.0;

  out.lambda = std::move(d);
  out.tol = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * norm;
  return out;
}

Spectrum spectrum(const Graph& g) {
  return eigenvalues_symmetric(g.directed() ? directed_laplacian(g) : laplacian(g));
}

double default_zero_eps(const Spectrum& s) { return 1e-6 * std::max(1.0, s.max()); }

std::size_t zero_multiplicity(const Spectrum& s, double eps) {
  return static_cast<std::size_t>(std::count_if(s.lambda.begin(), s.lambda.end(), [eps](double x) { return x < eps; }));
}

std::size_t zero_multiplicity(const Spectrum& s) { return zero_multiplicity(s, default_zero_eps(s)); }

void write_spectrum_csv(std::ostream& out, std::span<const SpectrumRow> rows) {
  if (rows.empty()) throw ConfigError("no spectra to write");
  const std::size_t n = rows.front().spectrum.size();
  for (const auto& r : rows)
    if (r.spectrum.size() != n) throw ConfigError("spectra have different lengths");
  for (const auto& r : rows)
    if (r.model_label.find_first_of(",\"\n") != std::string::npos)
      throw ConfigError("model label '" + r.model_label + "' contains CSV metacharacters");

  out << "model_label,replicate_id";
  for (std::size_t i = 1; i <= n; ++i) out << ",lambda_" << i;
  out << '\n';

  char buf[32];
  for (const auto& r : rows) {
    out << r.model_label << ',' << r.replicate_id;
    const double floor = 1e-10 * std::max(1.0, r.spectrum.max());
    for (double x : r.spectrum.lambda) {
      std::snprintf(buf, sizeof buf, "%.12g", std::abs(x) < floor ? 0.0 : x);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace specsel
