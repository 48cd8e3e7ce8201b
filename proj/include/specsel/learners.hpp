#pragma once

// Learning algorithms behind TrainedClassifier. They work on a plain
// row-major view so they can be exercised without the feature pipeline.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace specsel {

struct TrainingData {
  std::size_t rows = 0;
  std::size_t width = 0;
  std::size_t classes = 0;
  std::span<const double> values;       // rows x width, row-major
  std::span<const std::size_t> labels;  // 0..classes-1

  std::span<const double> row(std::size_t i) const { return values.subspan(i * width, width); }
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;  // taken when x[feature] <= threshold
  int right = -1;
  double value = 0.0;  // leaf payload: class index (forest) or weight (boosting)
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double evaluate(std::span<const double> x) const;
};

// --- random forest (CART, Gini) ----------------------------------------

struct ForestParams {
  std::size_t trees = 200;
  std::size_t max_depth = 12;
  std::size_t max_features = 0;  // 0: floor(sqrt(width)), at least 1
  std::size_t min_samples_leaf = 1;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
};

struct ForestFit {
  ForestModel model;
  double oob_accuracy = 0.0;
};

// Tree t is grown from a bootstrap sample drawn with derive_seed(seed, t).
ForestFit fit_forest(const TrainingData& data, const ForestParams& params, std::uint64_t seed);

// Number of trees voting for each class.
std::vector<double> forest_votes(const ForestModel& model, std::span<const double> x, std::size_t classes);

// --- gradient boosted trees (softmax loss, second-order leaf weights) ----

struct BoostingParams {
  std::size_t rounds = 100;
  std::size_t max_depth = 3;
  double shrinkage = 0.1;
  double lambda = 1.0;            // L2 penalty on leaf weights
  double min_child_weight = 1.0;  // minimum hessian sum per child
};

struct BoostedModel {
  double shrinkage = 0.1;
  std::vector<std::vector<DecisionTree>> rounds;  // rounds x classes
};

BoostedModel fit_boosting(const TrainingData& data, const BoostingParams& params);

// Raw per-class scores; softmax gives the propensities.
std::vector<double> boosting_margins(const BoostedModel& model, std::span<const double> x, std::size_t classes);

// --- Gaussian naive Bayes ----------------------------------------------

struct NaiveBayesParams {
  double var_floor = 1e-9;
};

struct NaiveBayesModel {
  std::size_t width = 0;
  std::vector<double> means;      // classes x width
  std::vector<double> variances;  // classes x width, floored
  std::vector<double> log_priors;
};

NaiveBayesModel fit_naive_bayes(const TrainingData& data, const NaiveBayesParams& params);

std::vector<double> naive_bayes_posterior(const NaiveBayesModel& model, std::span<const double> x);

// Numerically stable softmax.
std::vector<double> softmax(std::span<const double> z);

}  // namespace specsel
