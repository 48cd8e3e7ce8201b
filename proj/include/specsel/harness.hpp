#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "specsel/pipeline.hpp"

namespace specsel {

/// One replication study.
///
///  1: GWESP ERGM (theta1, theta2, theta3) against Bernoulli(theta1); grid = theta2.
///  2: directed dyad model with reciprocity theta2 against theta2 = 0; grid = theta2.
///  3: Euclidean latent position models of dimension k; grid = k. Every grid
///     dimension is both a true model and a candidate.
///  4: Euclidean (true) against bilinear latent models; grid = sigma2, one
///     curve per entry of `dims`.
///  5: study 1 repeated for each entry of `classifiers`.
struct StudyConfig {
  int study = 1;
  std::vector<double> grid;
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> dims;          // study 4
  std::vector<Algorithm> classifiers;     // study 5
  std::size_t R = 200;
  std::size_t K = 100;
  std::uint64_t seed = 0;
  std::size_t threads = 1;                // 0 = hardware concurrency
  Algorithm algorithm = Algorithm::random_forest;
  FeatureConfig features;
  ClassifierParams params;
  double theta1 = -2.5;                   // baseline log-odds (theta in studies 3 and 4)
  double theta3 = 1.0;                    // GWESP decay, studies 1 and 5
  WeightVariant weight_variant = WeightVariant::standard;
};

// Desk-scale defaults for a study id; throws ConfigError for ids outside 1..5.
StudyConfig default_study_config(int study);

// Throws ConfigError on an unknown id, R == 0, K == 0, empty grids or sizes.
void validate(const StudyConfig& cfg);

/// A selection rate with its Wilson 95% interval.
///
/// `series` and `x` only place the estimate on the SVG chart.
struct RateEstimate {
  int study = 0;
  std::string setting;
  std::size_t n = 0;
  std::string classifier;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double rate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::string series;
  double x = 0.0;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Wilson score interval at 95%, clamped so low <= successes/trials <= high.
Interval wilson_interval(std::size_t successes, std::size_t trials);

RateEstimate make_rate(std::size_t successes, std::size_t trials);

/// R replicates: draw an observed network from `true_model`, run model
/// selection with each algorithm, and count how often each candidate wins.
///
/// Replicate r uses seed derive_seed(seed, r): sub-stream 0 draws the observed
/// network, sub-stream 1 seeds the selection. All algorithms share the same
/// simulated training set. Result: counts[algorithm][candidate].
std::vector<std::vector<std::size_t>> selection_counts(const ModelSpec& true_model,
                                                       const std::vector<Candidate>& candidates, std::size_t R,
                                                       const SelectOptions& opt,
                                                       const std::vector<Algorithm>& algorithms,
                                                       std::uint64_t seed, std::size_t threads);

// How often candidates[correct] is selected, with opt.algorithm.
RateEstimate run_replications(const ModelSpec& true_model, const std::vector<Candidate>& candidates,
                              std::size_t correct, std::size_t R, const SelectOptions& opt, std::uint64_t seed,
                              std::size_t threads);

// Every (grid point, size[, classifier]) setting of the study, in a fixed order.
std::vector<RateEstimate> run_study(const StudyConfig& cfg);

// `study,setting,n,classifier,successes,trials,rate,ci_low,ci_high`
void write_study_csv(std::ostream& out, const std::vector<RateEstimate>& table);

// Self-contained SVG line chart: rate against x per series, shaded 95% band.
std::string render_study_svg(const std::vector<RateEstimate>& table, const std::string& title);

// Writes both files atomically. Throws ConfigError for an empty table
// (nothing is created) and Error when a path cannot be written.
void emit_outputs(const std::vector<RateEstimate>& table, const std::string& csv_path, const std::string& svg_path);

}  // namespace specsel
