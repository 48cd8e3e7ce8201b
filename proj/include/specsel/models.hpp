#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "specsel/graph.hpp"
#include "specsel/matrix.hpp"
#include "specsel/rng.hpp"

namespace specsel {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Dyads i < j in every edge-independent sampler below are visited in
// row-major order, one uniform draw each; that order is part of the
// reproducibility contract.

struct BernoulliSpec {
  std::size_t n = 2;
  double theta1 = 0.0;  // edge log-odds; +-infinity give the complete/empty graph
};

struct SbmSpec {
  std::size_t n = 2;
  // Exactly one of these is non-empty: fixed 0-based block labels per node,
  // or block probabilities from which labels are drawn.
  std::vector<std::size_t> block_assignment;
  std::vector<double> block_probs;
  DenseMatrix prob_matrix;  // K x K, symmetric, entries in [0, 1]
};

enum class LatentKernel { euclidean, bilinear };

// Latent positions z_i ~ N(0, sigma2 I_dim), redrawn for every network.
// Edge log-odds: theta - ||z_i - z_j|| (euclidean) or theta + z_i.z_j (bilinear).
struct LpmSpec {
  LatentKernel kernel = LatentKernel::euclidean;
  std::size_t n = 2;
  double theta = 0.0;
  std::size_t dim = 1;
  double sigma2 = 1.0;
};

enum class WeightVariant { standard, paper_literal };

// Unset fields take n-dependent defaults: burn_in = 20 * C(n,2) toggles,
// thin = 5 * C(n,2) toggles.
struct McmcConfig {
  std::optional<std::uint64_t> burn_in;
  std::optional<std::uint64_t> thin;
  std::uint64_t stream = 0;  // sub-stream id mixed into the chain's seed

  std::uint64_t resolved_burn_in(std::size_t n) const;
  std::uint64_t resolved_thin(std::size_t n) const;
};

// P(X = x) proportional to exp(theta1 * edges(x) + GWESP(x; theta2, theta3)).
struct GwespErgmSpec {
  std::size_t n = 2;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 1.0;
  WeightVariant weight_variant = WeightVariant::standard;
  McmcConfig mcmc;
};

// Directed, dyad-independent: each unordered pair takes state
// (0,0), (1,0), (0,1), (1,1) with weights 1, e^t1, e^t1, e^(2 t1 + t2 / 2).
struct DirectedDyadSpec {
  std::size_t n = 2;
  double theta1 = 0.0;
  double theta2 = 0.0;
};

using ModelSpec = std::variant<BernoulliSpec, SbmSpec, LpmSpec, GwespErgmSpec, DirectedDyadSpec>;

// Throws ConfigError when a spec violates its invariants.
void validate(const ModelSpec& spec);

std::size_t node_count(const ModelSpec& spec);
bool is_directed(const ModelSpec& spec);
// "bernoulli", "sbm", "lpm_euclidean", "lpm_bilinear", "gwesp_ergm", "directed_dyad"
std::string family_name(const ModelSpec& spec);

// Draws one network. Deterministic given the generator state.
Graph sample(const ModelSpec& spec, Rng& rng);

Graph sample_bernoulli(std::size_t n, double theta1, Rng& rng);
Graph sample_sbm(const SbmSpec& spec, Rng& rng);
Graph sample_lpm(const LpmSpec& spec, Rng& rng);
Graph sample_directed_dyad(const DirectedDyadSpec& spec, Rng& rng);

// One network: the chain state after burn_in toggles.
Graph sample_ergm_mcmc(const GwespErgmSpec& spec, Rng& rng);

// `count` states from one chain: the first after burn_in toggles, each next
// one thin toggles later.
std::vector<Graph> sample_ergm_chain(const GwespErgmSpec& spec, std::size_t count, Rng& rng);

// Closed-form probabilities of the four dyad states, in the order above.
std::vector<double> dyad_state_probabilities(double theta1, double theta2);

// SP_t: edges whose endpoints have exactly t common neighbours, by direct
// enumeration. Requires an undirected graph and 1 <= t <= n - 2.
std::size_t sp_count(const Graph& g, std::size_t t);

/// GWESP weight for shared-partner count t >= 1.
///   standard:      theta2 * e^theta3 * (1 - (1 - e^-theta3)^t)
///   paper_literal: theta2 * e^theta3 * e^(-theta3 * t)
/// With theta3 = 0 the standard weight is theta2 for every t >= 1 (0^t = 0).
double gwesp_weight(double theta2, double theta3, std::size_t t, WeightVariant variant);

// Precomputed weight table for one (theta2, theta3, variant) on n nodes.
class GwespTerm {
 public:
  GwespTerm(double theta2, double theta3, WeightVariant variant, std::size_t n);

  // 0 for t = 0.
  double weight(std::size_t t) const { return table_[t]; }

  // Sum over edges of weight(shared partners of the edge).
  double statistic(const Graph& g) const;

  // statistic(g with dyad (i, j) toggled) - statistic(g), computed from the
  // neighbourhoods of i and j only.
  double change(const Graph& g, std::size_t i, std::size_t j) const;

 private:
  std::vector<double> table_;
  std::vector<double> inc_;  // inc_[t] = table_[t + 1] - table_[t]
};

double gwesp_statistic(const Graph& g, double theta2, double theta3, WeightVariant variant);
double gwesp_change(const Graph& g, std::size_t i, std::size_t j, double theta2, double theta3,
                    WeightVariant variant);

}  // namespace specsel
