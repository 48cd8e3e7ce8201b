#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace oracle {

namespace {

using i128 = __int128;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Exact rational, always reduced with a positive denominator.
struct Rat {
  i128 num = 0;
  i128 den = 1;

  Rat() = default;
  Rat(i128 n, i128 d = 1) : num(n), den(d) {
    if (den == 0) throw std::domain_error("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const i128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  bool zero() const { return num == 0; }
};

Rat operator+(Rat a, Rat b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
Rat operator-(Rat a, Rat b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
Rat operator*(Rat a, Rat b) { return {a.num * b.num, a.den * b.den}; }
Rat operator/(Rat a, Rat b) { return {a.num * b.den, a.den * b.num}; }

using Poly = std::vector<Rat>;  // low degree first, no trailing zeros

void trim(Poly& p) {
  while (!p.empty() && p.back().zero()) p.pop_back();
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * Rat(static_cast<i128>(k)));
  trim(d);
  return d;
}

// Quotient and remainder of a / b.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
  while (a.size() >= b.size() && !a.empty()) {
    const std::size_t shift = a.size() - b.size();
    const Rat c = a.back() / b.back();
    q[shift] = c;
    for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] = a[k + shift] - c * b[k];
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {q, a};
}

Poly monic(Poly p) {
  const Rat lead = p.back();
  for (auto& c : p) c = c / lead;
  return p;
}

Poly gcd(Poly a, Poly b) {
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

Poly sub(const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < r.size(); ++k)
    r[k] = (k < a.size() ? a[k] : Rat()) - (k < b.size() ? b[k] : Rat());
  trim(r);
  return r;
}

long double eval(const std::vector<long double>& p, long double x) {
  long double v = 0;
  for (std::size_t k = p.size(); k-- > 0;) v = v * x + p[k];
  return v;
}

// Roots of a real-rooted polynomial with simple roots. Critical points come
// from the derivative (also real-rooted with simple roots, by Rolle) and
// bracket exactly one root each.
std::vector<long double> simple_roots(const std::vector<long double>& p) {
  const std::size_t deg = p.size() - 1;
  if (deg == 0) return {};
  if (deg == 1) return {-p[0] / p[1]};
  std::vector<long double> d;
  for (std::size_t k = 1; k <= deg; ++k) d.push_back(p[k] * static_cast<long double>(k));
  long double bound = 0;
  for (std::size_t k = 0; k < deg; ++k) bound = std::max(bound, std::fabs(p[k] / p[deg]));
  bound += 1;
  std::vector<long double> knots{-bound};
  for (long double c : simple_roots(d)) knots.push_back(c);
  knots.push_back(bound);

  std::vector<long double> roots;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    long double lo = knots[k], hi = knots[k + 1];
    long double flo = eval(p, lo);
    if (flo == 0) {
      roots.push_back(lo);
      continue;
    }
    for (int it = 0; it < 200; ++it) {
      const long double mid = (lo + hi) / 2;
      const long double fm = eval(p, mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back((lo + hi) / 2);
  }
  return roots;
}

}  // namespace

std::vector<__int128> charpoly(const std::vector<std::vector<long long>>& a) {
  const std::size_t n = a.size();
  // M_1 = I; c_{n-1} = -tr(A); M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k) / k.
  std::vector<i128> c(n + 1, 0);
  c[n] = 1;
  std::vector<std::vector<i128>> m(n, std::vector<i128>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<i128>> am(n, std::vector<i128>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j < n; ++j) am[i][j] += static_cast<i128>(a[i][l]) * m[l][j];
    i128 tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am[i][i];
    if (tr % static_cast<i128>(k) != 0) throw std::logic_error("Faddeev-LeVerrier: inexact division");
    c[n - k] = -tr / static_cast<i128>(k);
    m = am;
    for (std::size_t i = 0; i < n; ++i) m[i][i] += c[n - k];
  }
  return c;
}

std::vector<long double> real_roots(const std::vector<__int128>& coeffs) {
  Poly f;
  for (auto c : coeffs) f.emplace_back(c);
  trim(f);
  if (f.size() <= 1) return {};

  // Yun's square-free factorisation: f = prod a_i^i.
  std::vector<std::pair<Poly, std::size_t>> factors;
  const Poly fp = derivative(f);
  const Poly a0 = gcd(f, fp);
  Poly b = divmod(f, a0).first;
  Poly c = divmod(fp, a0).first;
  Poly d = sub(c, derivative(b));
  for (std::size_t i = 1; b.size() > 1; ++i) {
    const Poly a = gcd(b, d);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = sub(c, derivative(b));
    if (a.size() > 1) factors.emplace_back(a, i);
  }

  std::vector<long double> roots;
  for (const auto& [a, mult] : factors) {
    std::vector<long double> p;
    for (const auto& r : a) p.push_back(static_cast<long double>(r.num) / static_cast<long double>(r.den));
    for (long double r : simple_roots(p))
      for (std::size_t k = 0; k < mult; ++k) roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::vector<std::vector<long long>> integer_laplacian(const specsel::Graph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<long long>> l(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && g.has_edge(i, j)) {
        l[i][j] = -1;
        ++l[i][i];
      }
  return l;
}

std::vector<double> jacobi_eigenvalues(const specsel::DenseMatrix& input) {
  const std::size_t n = input.rows();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = input(i, j);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0, total = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        total += a[i][j] * a[i][j];
        if (i != j) off += a[i][j] * a[i][j];
      }
    if (off <= 1e-30 * std::max(total, 1e-300)) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        const double t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const double cs = 1 / std::sqrt(t * t + 1), sn = t * cs;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = cs * akp - sn * akq;
          a[k][q] = sn * akp + cs * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = cs * apk - sn * aqk;
          a[q][k] = sn * apk + cs * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::size_t bfs_components(const specsel::Graph& g) {
  const std::size_t n = g.size();
  std::vector<char> seen(n, 0);
  std::size_t comps = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++comps;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v = 0; v < n; ++v)
        if (!seen[v] && (g.has_edge(u, v) || g.has_edge(v, u))) {
          seen[v] = 1;
          q.push(v);
        }
    }
  }
  return comps;
}

std::size_t sp_brute(const specsel::Graph& g, std::size_t t) {
  const std::size_t n = g.size();
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!g.has_edge(i, j)) continue;
      std::size_t shared = 0;
      for (std::size_t h = 0; h < n; ++h)
        if (h != i && h != j && g.has_edge(i, h) && g.has_edge(h, j)) ++shared;
      if (shared == t) ++count;
    }
  return count;
}

double gwesp_brute(const specsel::Graph& g, const std::vector<double>& w) {
  double s = 0;
  for (std::size_t t = 1; t < w.size(); ++t) s += w[t] * static_cast<double>(sp_brute(g, t));
  return s;
}

std::vector<double> ergm_edge_distribution(std::size_t n, double theta1, const std::vector<double>& w) {
  if (n > 6) throw std::invalid_argument("enumeration limited to n <= 6");
  std::vector<std::pair<std::size_t, std::size_t>> dyads;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dyads.emplace_back(i, j);
  const std::size_t D = dyads.size();
  std::vector<double> logw(std::size_t{1} << D);
  std::vector<std::size_t> edges(logw.size());
  for (std::size_t mask = 0; mask < logw.size(); ++mask) {
    specsel::Graph g(n, false);
    for (std::size_t d = 0; d < D; ++d)
      if (mask >> d & 1) g.add_edge(dyads[d].first, dyads[d].second);
    edges[mask] = static_cast<std::size_t>(std::popcount(mask));
    logw[mask] = theta1 * static_cast<double>(edges[mask]) + gwesp_brute(g, w);
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  std::vector<double> dist(D + 1, 0.0);
  double z = 0;
  for (std::size_t mask = 0; mask < logw.size(); ++mask) {
    const double p = std::exp(logw[mask] - top);
    dist[edges[mask]] += p;
    z += p;
  }
  for (double& p : dist) p /= z;
  return dist;
}

}  // namespace oracle
