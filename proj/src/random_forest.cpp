#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "specsel/learners.hpp"
#include "specsel/rng.hpp"

namespace specsel {

double DecisionTree::evaluate(std::span<const double> x) const {
  std::size_t k = 0;
  while (nodes[k].feature >= 0) {
    const TreeNode& node = nodes[k];
    k = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
  }
  return nodes[k].value;
}

namespace {

// Midpoint threshold that still separates a < b after rounding.
double split_point(double a, double b) {
  const double mid = a + 0.5 * (b - a);
  return mid < b ? mid : a;
}

struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;
};

class TreeGrower {
 public:
  TreeGrower(const TrainingData& data, const ForestParams& params, std::size_t mtry, Rng& rng)
      : data_(data), params_(params), mtry_(mtry), rng_(rng), features_(data.width), counts_(data.classes) {
    std::iota(features_.begin(), features_.end(), std::size_t{0});
  }

  DecisionTree grow(std::vector<std::size_t>& sample) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    struct Work {
      std::size_t node, begin, end, depth;
    };
    std::vector<Work> stack{{0, 0, sample.size(), 0}};

    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();

      std::fill(counts_.begin(), counts_.end(), 0.0);
      for (std::size_t i = w.begin; i < w.end; ++i) counts_[data_.labels[sample[i]]] += 1.0;
      const std::size_t majority =
          static_cast<std::size_t>(std::max_element(counts_.begin(), counts_.end()) - counts_.begin());
      const std::size_t n = w.end - w.begin;
      const bool pure = counts_[majority] == static_cast<double>(n);

      std::optional<Split> split;
      if (!pure && w.depth < params_.max_depth && n >= 2 * params_.min_samples_leaf)
        split = best_split(sample, w.begin, w.end);
      if (!split) {
        tree.nodes[w.node].value = static_cast<double>(majority);
        continue;
      }

      const auto mid_it = std::partition(sample.begin() + static_cast<std::ptrdiff_t>(w.begin),
                                         sample.begin() + static_cast<std::ptrdiff_t>(w.end), [&](std::size_t r) {
                                           return data_.row(r)[split->feature] <= split->threshold;
                                         });
      const std::size_t mid = static_cast<std::size_t>(mid_it - sample.begin());
      const std::size_t left = tree.nodes.size();
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& node = tree.nodes[w.node];
      node.feature = static_cast<int>(split->feature);
      node.threshold = split->threshold;
      node.left = static_cast<int>(left);
      node.right = static_cast<int>(left + 1);
      node.value = static_cast<double>(majority);
      stack.push_back({left + 1, mid, w.end, w.depth + 1});
      stack.push_back({left, w.begin, mid, w.depth + 1});
    }
    return tree;
  }

 private:
  // Draws features without replacement until mtry non-constant ones have
  // been scored (constant features do not count), as in CART forests.
  std::optional<Split> best_split(const std::vector<std::size_t>& sample, std::size_t begin, std::size_t end) {
    const std::size_t p = features_.size();
    const std::size_t n = end - begin;
    const std::size_t m = data_.classes;
    const std::size_t min_leaf = std::max<std::size_t>(1, params_.min_samples_leaf);
    std::optional<Split> best;
    std::size_t scored = 0;

    pairs_.resize(n);
    std::vector<double> left(m), right(m);
    for (std::size_t k = 0; k < p && scored < mtry_; ++k) {
      std::swap(features_[k], features_[k + rng_.uniform_index(p - k)]);
      const std::size_t f = features_[k];

      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = sample[begin + i];
        pairs_[i] = {data_.row(r)[f], data_.labels[r]};
      }
      std::sort(pairs_.begin(), pairs_.end());
      if (pairs_.front().first == pairs_.back().first) continue;
      ++scored;

      std::fill(left.begin(), left.end(), 0.0);
      right = counts_;
      double left_sq = 0.0, right_sq = 0.0;
      for (double c : right) right_sq += c * c;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t c = pairs_[i].second;
        // Incremental sums of squared class counts on each side.
        left_sq += 2.0 * left[c] + 1.0;
        right_sq -= 2.0 * right[c] - 1.0;
        left[c] += 1.0;
        right[c] -= 1.0;
        const std::size_t nl = i + 1, nr = n - nl;
        if (pairs_[i].first == pairs_[i + 1].first || nl < min_leaf || nr < min_leaf) continue;
        const double score = left_sq / static_cast<double>(nl) + right_sq / static_cast<double>(nr);
        if (!best || score > best->score) best = Split{f, split_point(pairs_[i].first, pairs_[i + 1].first), score};
      }
    }
    return best;
  }

  const TrainingData& data_;
  const ForestParams& params_;
  std::size_t mtry_;
  Rng& rng_;
  std::vector<std::size_t> features_;
  std::vector<double> counts_;
  std::vector<std::pair<double, std::size_t>> pairs_;
};

}  // namespace

ForestFit fit_forest(const TrainingData& data, const ForestParams& params, std::uint64_t seed) {
  const std::size_t p = data.width;
  std::size_t mtry = params.max_features;
  if (mtry == 0) mtry = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(p)))));
  mtry = std::min(mtry, p);

  ForestFit fit;
  std::vector<double> oob(data.rows * data.classes, 0.0);
  std::vector<std::size_t> sample(data.rows);
  std::vector<char> in_bag(data.rows);

  for (std::size_t t = 0; t < params.trees; ++t) {
    Rng rng(derive_seed(seed, t));
    std::fill(in_bag.begin(), in_bag.end(), 0);
    for (auto& s : sample) {
      s = static_cast<std::size_t>(rng.uniform_index(data.rows));
      in_bag[s] = 1;
    }
    TreeGrower grower(data, params, mtry, rng);
    fit.model.trees.push_back(grower.grow(sample));
    const DecisionTree& tree = fit.model.trees.back();
    for (std::size_t i = 0; i < data.rows; ++i)
      if (!in_bag[i]) oob[i * data.classes + static_cast<std::size_t>(tree.evaluate(data.row(i)))] += 1.0;
  }

  std::size_t scored = 0, correct = 0;
  for (std::size_t i = 0; i < data.rows; ++i) {
    const auto first = oob.begin() + static_cast<std::ptrdiff_t>(i * data.classes);
    const auto last = first + static_cast<std::ptrdiff_t>(data.classes);
    if (std::all_of(first, last, [](double v) { return v == 0.0; })) continue;
    ++scored;
    if (static_cast<std::size_t>(std::max_element(first, last) - first) == data.labels[i]) ++correct;
  }
  fit.oob_accuracy = scored == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(scored);
  return fit;
}

std::vector<double> forest_votes(const ForestModel& model, std::span<const double> x, std::size_t classes) {
  std::vector<double> votes(classes, 0.0);
  for (const auto& tree : model.trees) votes[static_cast<std::size_t>(tree.evaluate(x))] += 1.0;
  return votes;
}

}  // namespace specsel
