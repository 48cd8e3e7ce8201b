#pragma once

#include <cstddef>
#include <cstdint>
#include <json.hpp>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "specsel/learners.hpp"
#include "specsel/spectra.hpp"

namespace specsel {

// ---------------------------------------------------------------------------
// Features

enum class EngineeredFeature {
  sum,         // trace of the Laplacian, 2|E| for undirected graphs
  lambda2,     // algebraic connectivity
  zero_count,  // eigenvalues below default_zero_eps: the component count
  quantiles,   // 11 deciles q00, q10, ..., q100 (linear interpolation)
  max,
};

std::string to_string(EngineeredFeature f);
EngineeredFeature parse_engineered_feature(const std::string& name);

struct FeatureConfig {
  bool use_raw_spectrum = true;
  std::vector<EngineeredFeature> engineered = {EngineeredFeature::sum, EngineeredFeature::lambda2,
                                               EngineeredFeature::zero_count};
};

// Throws ConfigError when no feature source is enabled.
void validate(const FeatureConfig& cfg);

std::vector<std::string> feature_names(std::size_t spectrum_length, const FeatureConfig& cfg);

// Raw ascending eigenvalues (if enabled) followed by the engineered features
// in the order they appear in cfg.engineered.
std::vector<double> feature_row(const Spectrum& s, const FeatureConfig& cfg);

/// Stacked feature rows with class labels 0..classes-1.
///
/// Invariants, checked on construction: every row has `width` finite values,
/// every class in 0..classes-1 has the same number of rows (at least one).
class DesignMatrix {
 public:
  DesignMatrix(std::size_t width, std::vector<double> values, std::vector<std::size_t> labels,
               std::vector<std::string> feature_names = {});

  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t width() const noexcept { return width_; }
  std::size_t classes() const noexcept { return classes_; }
  std::size_t rows_per_class() const noexcept { return classes_ == 0 ? 0 : rows() / classes_; }

  std::span<const double> row(std::size_t i) const { return {values_.data() + i * width_, width_}; }
  std::size_t label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::size_t>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }

  // True when all rows are identical, so no classifier can separate them.
  bool degenerate() const;

 private:
  std::size_t width_;
  std::size_t classes_ = 0;
  std::vector<double> values_;
  std::vector<std::size_t> labels_;
  std::vector<std::string> names_;
};

struct LabeledSpectrum {
  Spectrum spectrum;
  std::size_t label = 0;
};

// Throws ConfigError on empty input or mixed spectrum lengths.
DesignMatrix build_features(std::span<const LabeledSpectrum> spectra, const FeatureConfig& cfg);

// ---------------------------------------------------------------------------
// Scores

/// Propensities s (non-negative, summing to 1) and s / max(s).
struct ScoreVector {
  std::vector<double> s;
  std::vector<double> s_norm;

  // Index of the largest propensity; ties go to the lowest index.
  std::size_t argmax() const;
};

// s_i / max_j s_j. Throws ConfigError for an empty, negative or all-zero vector.
std::vector<double> normalize_scores(std::span<const double> s);

// Wraps propensities into a ScoreVector, filling s_norm.
ScoreVector make_scores(std::vector<double> s);

// ---------------------------------------------------------------------------
// Classifiers

enum class Algorithm { gaussian_nb, random_forest, gbt };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

struct ClassifierParams {
  ForestParams forest;
  BoostingParams boosting;
  NaiveBayesParams naive_bayes;
  std::uint64_t seed = 0;
};

/// Fitted classifier; immutable and safe to share between threads.
///
/// Propensities per algorithm:
///  - random_forest: tree votes v_c out of T trees, (v_c + 1/M) / (T + 1);
///  - gbt: softmax of the boosted class scores;
///  - gaussian_nb: posterior class probabilities.
class TrainedClassifier {
 public:
  Algorithm algorithm() const noexcept;
  std::size_t classes() const noexcept { return classes_; }
  std::size_t width() const noexcept { return width_; }
  const std::vector<std::string>& feature_names() const noexcept { return names_; }

  // Throws ConfigError when the row width differs from the training width.
  ScoreVector predict_scores(std::span<const double> row) const;
  std::size_t predict(std::span<const double> row) const { return predict_scores(row).argmax(); }

  // Fraction of rows of d whose argmax matches the label.
  double accuracy(const DesignMatrix& d) const;

  // Out-of-bag accuracy; random_forest only.
  std::optional<double> oob_accuracy() const noexcept { return oob_accuracy_; }

  // Versioned JSON dump. from_json refuses any other format version.
  static constexpr int kFormatVersion = 1;
  nlohmann::json to_json() const;
  static TrainedClassifier from_json(const nlohmann::json& j);

 private:
  friend TrainedClassifier train(const DesignMatrix&, Algorithm, const ClassifierParams&);
  using Model = std::variant<NaiveBayesModel, ForestModel, BoostedModel>;

  TrainedClassifier(Model model, std::size_t classes, std::size_t width, std::vector<std::string> names)
      : model_(std::move(model)), classes_(classes), width_(width), names_(std::move(names)) {}

  Model model_;
  std::size_t classes_;
  std::size_t width_;
  std::vector<std::string> names_;
  std::optional<double> oob_accuracy_;
};

/// Fits `algo` to d. A single-class design gives a constant classifier that
/// always scores (1). Classes with identical rows are fine: naive Bayes floors
/// variances and trees simply stop splitting.
TrainedClassifier train(const DesignMatrix& d, Algorithm algo, const ClassifierParams& params = {});

}  // namespace specsel
