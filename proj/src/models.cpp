#include "specsel/models.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "specsel/error.hpp"

namespace specsel {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::uint64_t dyad_count(std::size_t n) { return static_cast<std::uint64_t>(n) * (n - 1) / 2; }

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_size(std::size_t n) { require(n >= 2, "model needs n >= 2"); }

void require_number(double x, const char* name) {
  require(!std::isnan(x), std::string(name) + " must be a number");
}

void require_finite(double x, const char* name) {
  require(std::isfinite(x), std::string(name) + " must be finite");
}

// Calls f(h) for every h in N(i) & N(j).
template <class F>
void for_common_neighbors(const Graph& g, std::size_t i, std::size_t j, F&& f) {
  const auto a = g.row(i);
  const auto b = g.row(j);
  for (std::size_t w = 0; w < a.size(); ++w) {
    std::uint64_t bits = a[w] & b[w];
    while (bits != 0) {
      f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
}

}  // namespace

std::uint64_t McmcConfig::resolved_burn_in(std::size_t n) const { return burn_in.value_or(20 * dyad_count(n)); }

std::uint64_t McmcConfig::resolved_thin(std::size_t n) const { return thin.value_or(5 * dyad_count(n)); }

void validate(const ModelSpec& spec) {
  std::visit(overloaded{
                 [](const BernoulliSpec& s) {
                   require_size(s.n);
                   require_number(s.theta1, "theta1");
                 },
                 [](const SbmSpec& s) {
                   require_size(s.n);
                   const std::size_t k = s.prob_matrix.rows();
                   require(k >= 1 && s.prob_matrix.cols() == k, "prob_matrix must be a non-empty square matrix");
                   for (std::size_t a = 0; a < k; ++a)
                     for (std::size_t b = 0; b < k; ++b) {
                       const double p = s.prob_matrix(a, b);
                       require(p >= 0.0 && p <= 1.0, "prob_matrix entries must lie in [0, 1]");
                       require(p == s.prob_matrix(b, a), "prob_matrix must be symmetric");
                     }
                   require(s.block_assignment.empty() != s.block_probs.empty(),
                           "sbm needs exactly one of block_assignment or block_probs");
                   if (!s.block_assignment.empty()) {
                     require(s.block_assignment.size() == s.n, "block_assignment length must equal n");
                     for (std::size_t b : s.block_assignment)
                       require(b < k, "block_assignment label exceeds prob_matrix dimension");
                   } else {
                     require(s.block_probs.size() == k, "block_probs length must equal prob_matrix dimension");
                     double total = 0.0;
                     for (double p : s.block_probs) {
                       require(p >= 0.0 && std::isfinite(p), "block_probs entries must be non-negative");
                       total += p;
                     }
                     require(std::abs(total - 1.0) <= 1e-9, "block_probs must sum to 1");
                   }
                 },
                 [](const LpmSpec& s) {
                   require_size(s.n);
                   require_finite(s.theta, "theta");
                   require(s.dim >= 1, "latent dimension must be >= 1");
                   require(s.sigma2 > 0.0 && std::isfinite(s.sigma2), "sigma2 must be positive");
                 },
                 [](const GwespErgmSpec& s) {
                   require_size(s.n);
                   require_finite(s.theta1, "theta1");
                   require_finite(s.theta2, "theta2");
                   require_finite(s.theta3, "theta3");
                   require(s.theta3 > -std::log(2.0), "theta3 must exceed -log 2");
                   require(s.mcmc.resolved_thin(s.n) >= 1, "mcmc thin must be >= 1");
                 },
                 [](const DirectedDyadSpec& s) {
                   require_size(s.n);
                   require_finite(s.theta1, "theta1");
                   require_finite(s.theta2, "theta2");
                 },
             },
             spec);
}

std::size_t node_count(const ModelSpec& spec) {
  return std::visit([](const auto& s) { return s.n; }, spec);
}

bool is_directed(const ModelSpec& spec) { return std::holds_alternative<DirectedDyadSpec>(spec); }

std::string family_name(const ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const BernoulliSpec&) -> std::string { return "bernoulli"; },
                        [](const SbmSpec&) -> std::string { return "sbm"; },
                        [](const LpmSpec& s) -> std::string {
                          return s.kernel == LatentKernel::euclidean ? "lpm_euclidean" : "lpm_bilinear";
                        },
                        [](const GwespErgmSpec&) -> std::string { return "gwesp_ergm"; },
                        [](const DirectedDyadSpec&) -> std::string { return "directed_dyad"; },
                    },
                    spec);
}

Graph sample(const ModelSpec& spec, Rng& rng) {
  return std::visit(overloaded{
                        [&](const BernoulliSpec& s) { return sample_bernoulli(s.n, s.theta1, rng); },
                        [&](const SbmSpec& s) { return sample_sbm(s, rng); },
                        [&](const LpmSpec& s) { return sample_lpm(s, rng); },
                        [&](const GwespErgmSpec& s) { return sample_ergm_mcmc(s, rng); },
                        [&](const DirectedDyadSpec& s) { return sample_directed_dyad(s, rng); },
                    },
                    spec);
}

Graph sample_bernoulli(std::size_t n, double theta1, Rng& rng) {
  require_size(n);
  const double p = logistic(theta1);
  Graph g(n, false);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.uniform() < p) g.add_edge(i, j);
  return g;
}

Graph sample_sbm(const SbmSpec& spec, Rng& rng) {
  validate(spec);
  std::vector<std::size_t> block = spec.block_assignment;
  if (block.empty()) {
    block.resize(spec.n);
    for (auto& b : block) {
      const double u = rng.uniform();
      double acc = 0.0;
      b = spec.block_probs.size() - 1;
      for (std::size_t k = 0; k < spec.block_probs.size(); ++k) {
        acc += spec.block_probs[k];
        if (u < acc) {
          b = k;
          break;
        }
      }
    }
  }
  Graph g(spec.n, false);
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = i + 1; j < spec.n; ++j)
      if (rng.uniform() < spec.prob_matrix(block[i], block[j])) g.add_edge(i, j);
  return g;
}

Graph sample_lpm(const LpmSpec& spec, Rng& rng) {
  validate(spec);
  const std::size_t n = spec.n, k = spec.dim;
  const double sd = std::sqrt(spec.sigma2);
  std::vector<double> z(n * k);
  for (double& x : z) x = sd * rng.normal();

  Graph g(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const double* zi = &z[i * k];
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* zj = &z[j * k];
      double eta = spec.theta;
      if (spec.kernel == LatentKernel::euclidean) {
        double d2 = 0.0;
        for (std::size_t c = 0; c < k; ++c) d2 += (zi[c] - zj[c]) * (zi[c] - zj[c]);
        eta -= std::sqrt(d2);
      } else {
        for (std::size_t c = 0; c < k; ++c) eta += zi[c] * zj[c];
      }
      if (rng.uniform() < logistic(eta)) g.add_edge(i, j);
    }
  }
  return g;
}

std::vector<double> dyad_state_probabilities(double theta1, double theta2) {
  std::vector<double> w = {1.0, std::exp(theta1), std::exp(theta1), std::exp(2.0 * theta1 + 0.5 * theta2)};
  const double z = w[0] + w[1] + w[2] + w[3];
  for (double& x : w) x /= z;
  return w;
}

Graph sample_directed_dyad(const DirectedDyadSpec& spec, Rng& rng) {
  validate(spec);
  const auto p = dyad_state_probabilities(spec.theta1, spec.theta2);
  const double c0 = p[0], c1 = c0 + p[1], c2 = c1 + p[2];
  Graph g(spec.n, true);
  for (std::size_t i = 0; i < spec.n; ++i)
    for (std::size_t j = i + 1; j < spec.n; ++j) {
      const double u = rng.uniform();
      if (u < c0) continue;
      if (u < c1) {
        g.add_edge(i, j);
      } else if (u < c2) {
        g.add_edge(j, i);
      } else {
        g.add_edge(i, j);
        g.add_edge(j, i);
      }
    }
  return g;
}

std::size_t sp_count(const Graph& g, std::size_t t) {
  if (g.directed()) throw ConfigError("sp_count requires an undirected graph");
  const std::size_t n = g.size();
  if (n < 3 || t < 1 || t > n - 2) throw ConfigError("sp_count: t must lie in 1..n-2");
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

double gwesp_weight(double theta2, double theta3, std::size_t t, WeightVariant variant) {
  if (t < 1) throw ConfigError("gwesp_weight: t must be >= 1");
  const double td = static_cast<double>(t);
  switch (variant) {
    case WeightVariant::standard:
      return theta2 * std::exp(theta3) * (1.0 - std::pow(1.0 - std::exp(-theta3), td));
    case WeightVariant::paper_literal:
      return theta2 * std::exp(theta3) * std::exp(-theta3 * td);
  }
  throw ConfigError("unknown GWESP weight variant");
}

GwespTerm::GwespTerm(double theta2, double theta3, WeightVariant variant, std::size_t n) : table_(n + 1, 0.0) {
  for (std::size_t t = 1; t < table_.size(); ++t) table_[t] = gwesp_weight(theta2, theta3, t, variant);
  inc_.resize(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) inc_[t] = table_[t + 1] - table_[t];
}

double GwespTerm::statistic(const Graph& g) const {
  double s = 0.0;
  for (const auto& [i, j] : g.edges()) s += table_[g.common_neighbors(i, j)];
  return s;
}

namespace {

// Sum over common neighbours h of (i, j) of inc[sp(i, h) - shift] + inc[sp(j, h) - shift].
// W > 0 fixes the number of 64-bit words per row so the popcount loops unroll;
// W == 0 handles any width.
template <std::size_t W>
double partner_increments(const std::uint64_t* bits, std::size_t words, std::size_t i, std::size_t j,
                          const double* inc, std::size_t shift) {
  const std::size_t nw = W > 0 ? W : words;
  const std::uint64_t* ri = bits + i * nw;
  const std::uint64_t* rj = bits + j * nw;
  double delta = 0.0;
  for (std::size_t w = 0; w < nw; ++w) {
    std::uint64_t common = ri[w] & rj[w];
    while (common != 0) {
      const std::size_t h = w * 64 + static_cast<std::size_t>(std::countr_zero(common));
      common &= common - 1;
      const std::uint64_t* rh = bits + h * nw;
      std::size_t sih = 0, sjh = 0;
      for (std::size_t v = 0; v < nw; ++v) {
        sih += static_cast<std::size_t>(std::popcount(ri[v] & rh[v]));
        sjh += static_cast<std::size_t>(std::popcount(rj[v] & rh[v]));
      }
      delta += inc[sih - shift] + inc[sjh - shift];
    }
  }
  return delta;
}

}  // namespace

double GwespTerm::change(const Graph& g, std::size_t i, std::size_t j) const {
  // The toggled edge carries weight(sp(i, j)); each common neighbour h gains
  // (or loses) one shared partner on both edges (i, h) and (j, h).
  // Removing shifts the increment index down by one: w(s) - w(s - 1) = inc[s - 1].
  const bool present = g.has_edge(i, j);
  const std::size_t shift = present ? 1 : 0;
  const std::uint64_t* bits = g.row(0).data();
  const std::size_t words = g.row(0).size();
  double delta = table_[g.common_neighbors(i, j)];
  switch (words) {
    case 1: delta += partner_increments<1>(bits, words, i, j, inc_.data(), shift); break;
    case 2: delta += partner_increments<2>(bits, words, i, j, inc_.data(), shift); break;
    case 3: delta += partner_increments<3>(bits, words, i, j, inc_.data(), shift); break;
    case 4: delta += partner_increments<4>(bits, words, i, j, inc_.data(), shift); break;
    default: delta += partner_increments<0>(bits, words, i, j, inc_.data(), shift); break;
  }
  return present ? -delta : delta;
}

double gwesp_statistic(const Graph& g, double theta2, double theta3, WeightVariant variant) {
  if (g.directed()) throw ConfigError("gwesp_statistic requires an undirected graph");
  return GwespTerm(theta2, theta3, variant, g.size()).statistic(g);
}

double gwesp_change(const Graph& g, std::size_t i, std::size_t j, double theta2, double theta3,
                    WeightVariant variant) {
  if (g.directed()) throw ConfigError("gwesp_change requires an undirected graph");
  if (i >= g.size() || j >= g.size() || i == j) throw ConfigError("gwesp_change: invalid dyad");
  return GwespTerm(theta2, theta3, variant, g.size()).change(g, i, j);
}

namespace {

class ErgmChain {
 public:
  ErgmChain(const GwespErgmSpec& spec, Rng& rng)
      : n_(spec.n),
        theta1_(spec.theta1),
        term_(spec.theta2, spec.theta3, spec.weight_variant, spec.n),
        rng_(rng.split(spec.mcmc.stream)),
        state_(sample_bernoulli(spec.n, spec.theta1, rng_)) {}

  void run(std::uint64_t toggles) {
    for (std::uint64_t step = 0; step < toggles; ++step) propose();
  }

  const Graph& state() const { return state_; }

 private:
  void propose() {
    const std::size_t i = static_cast<std::size_t>(rng_.uniform_index(n_));
    std::size_t j = static_cast<std::size_t>(rng_.uniform_index(n_ - 1));
    if (j >= i) ++j;
    const bool present = state_.has_edge(i, j);
    const double log_ratio = (present ? -theta1_ : theta1_) + term_.change(state_, i, j);
    if (log_ratio >= 0.0 || rng_.uniform() < std::exp(log_ratio)) state_.set_edge(i, j, !present);
  }

  std::size_t n_;
  double theta1_;
  GwespTerm term_;
  Rng rng_;
  Graph state_;
};

}  // namespace

// The chain starts from a Bernoulli(logistic(theta1)) draw, which is the
// theta2 = 0 stationary law and close to it for moderate theta2.
std::vector<Graph> sample_ergm_chain(const GwespErgmSpec& spec, std::size_t count, Rng& rng) {
  validate(spec);
  ErgmChain chain(spec, rng);
  chain.run(spec.mcmc.resolved_burn_in(spec.n));
  std::vector<Graph> out;
  out.reserve(count);
  const std::uint64_t thin = spec.mcmc.resolved_thin(spec.n);
  for (std::size_t s = 0; s < count; ++s) {
    if (s > 0) chain.run(thin);
    out.push_back(chain.state());
  }
  return out;
}

Graph sample_ergm_mcmc(const GwespErgmSpec& spec, Rng& rng) { return std::move(sample_ergm_chain(spec, 1, rng).front()); }

}  // namespace specsel
