#pragma once

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "specsel/classify.hpp"
#include "specsel/graph.hpp"
#include "specsel/models.hpp"

namespace specsel {

struct Candidate {
  std::string name;
  ModelSpec spec;
};

struct SelectOptions {
  std::size_t K = 100;  // simulated networks per candidate
  FeatureConfig features;
  Algorithm algorithm = Algorithm::random_forest;
  ClassifierParams params;  // params.seed is ignored; derived from `seed`
  std::uint64_t seed = 0;
  std::size_t threads = 1;  // 0 = hardware concurrency
};

struct SelectionDiagnostics {
  double in_sample_accuracy = 0.0;
  std::optional<double> oob_accuracy;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

/// Outcome of one model selection.
///
/// `predicted` indexes `model_names` and `scores`, both in the caller's
/// candidate order. predicted is an argmax of scores.s.
struct SelectionReport {
  std::size_t predicted = 0;
  std::vector<std::string> model_names;
  ScoreVector scores;
  std::size_t K = 0;
  Algorithm algorithm = Algorithm::random_forest;
  std::uint64_t seed = 0;
  SelectionDiagnostics diagnostics;
};

/// Simulated training data for one selection, before any classifier is fit.
///
/// Candidates are processed in a canonical order (by spec, then name) so that
/// reordering the candidate list cannot change any simulated network.
/// order[c] is the caller's index of the candidate with class label c.
struct TrainingSet {
  std::vector<std::size_t> order;
  DesignMatrix design;
  std::vector<std::string> warnings;
};

// Throws ConfigError for fewer than two candidates, duplicate names, K == 0,
// or a candidate whose size or directedness differs from the observed graph.
void validate_candidates(const Graph& observed, const std::vector<Candidate>& candidates);

// K draws per candidate, their spectra, and the design matrix.
TrainingSet simulate_training_set(const Graph& observed, const std::vector<Candidate>& candidates,
                                  const SelectOptions& opt);

struct SelectionResult {
  SelectionReport report;
  TrainedClassifier classifier;
  std::vector<std::size_t> class_order;  // class c of `classifier` is candidate class_order[c]
};

// Train, then score the observed network. Several classifiers may share one training set.
SelectionResult fit_and_predict(const Graph& observed, const std::vector<Candidate>& candidates,
                                const TrainingSet& training, const SelectOptions& opt);

SelectionResult run_selection(const Graph& observed, const std::vector<Candidate>& candidates,
                              const SelectOptions& opt);

SelectionReport select_model(const Graph& observed, const std::vector<Candidate>& candidates,
                             const SelectOptions& opt);

// Report JSON with a fixed key order. Wall time is left out so reruns with the
// same seed produce identical bytes.
nlohmann::ordered_json report_to_json(const SelectionReport& report, const std::vector<Candidate>& candidates,
                                      const FeatureConfig& features);

}  // namespace specsel
