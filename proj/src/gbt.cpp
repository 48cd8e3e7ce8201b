#include <algorithm>
#include <cmath>
#include <numeric>

#include "specsel/learners.hpp"

namespace specsel {

namespace {

// One regression tree on (gradient, hessian) pairs, grown level by level.
// Every level costs one pass over the presorted feature orders.
class BoostTreeGrower {
 public:
  BoostTreeGrower(const TrainingData& data, const std::vector<std::vector<std::size_t>>& order,
                  const BoostingParams& params)
      : data_(data), order_(order), params_(params) {}

  DecisionTree grow(const std::vector<double>& grad, const std::vector<double>& hess) {
    const std::size_t n = data_.rows, p = data_.width;
    const double lambda = params_.lambda;
    DecisionTree tree;
    tree.nodes.emplace_back();
    g_.assign(1, 0.0);
    h_.assign(1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      g_[0] += grad[i];
      h_[0] += hess[i];
    }
    node_of_.assign(n, 0);
    std::vector<std::size_t> frontier{0};

    for (std::size_t depth = 0; depth < params_.max_depth && !frontier.empty(); ++depth) {
      const std::size_t nodes = tree.nodes.size();
      std::vector<char> active(nodes, 0);
      for (std::size_t k : frontier) active[k] = 1;
      std::vector<double> best_gain(nodes, 1e-12), best_thr(nodes, 0.0);
      std::vector<int> best_f(nodes, -1);
      std::vector<double> gl(nodes), hl(nodes), last(nodes);
      std::vector<char> seen(nodes);

      for (std::size_t f = 0; f < p; ++f) {
        std::fill(gl.begin(), gl.end(), 0.0);
        std::fill(hl.begin(), hl.end(), 0.0);
        std::fill(seen.begin(), seen.end(), 0);
        for (std::size_t i : order_[f]) {
          const std::size_t k = node_of_[i];
          if (!active[k]) continue;
          const double x = data_.values[i * p + f];
          if (seen[k] && x > last[k]) {
            const double gr = g_[k] - gl[k], hr = h_[k] - hl[k];
            if (hl[k] >= params_.min_child_weight && hr >= params_.min_child_weight) {
              const double gain =
                  gl[k] * gl[k] / (hl[k] + lambda) + gr * gr / (hr + lambda) - g_[k] * g_[k] / (h_[k] + lambda);
              if (gain > best_gain[k]) {
                best_gain[k] = gain;
                best_f[k] = static_cast<int>(f);
                const double mid = last[k] + 0.5 * (x - last[k]);
                best_thr[k] = mid < x ? mid : last[k];
              }
            }
          }
          gl[k] += grad[i];
          hl[k] += hess[i];
          last[k] = x;
          seen[k] = 1;
        }
      }

      std::vector<std::size_t> next;
      for (std::size_t k : frontier) {
        if (best_f[k] < 0) continue;
        const std::size_t left = tree.nodes.size();
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& node = tree.nodes[k];
        node.feature = best_f[k];
        node.threshold = best_thr[k];
        node.left = static_cast<int>(left);
        node.right = static_cast<int>(left + 1);
        g_.resize(left + 2, 0.0);
        h_.resize(left + 2, 0.0);
        next.push_back(left);
        next.push_back(left + 1);
      }
      for (std::size_t i = 0; i < n; ++i) {
        const TreeNode& node = tree.nodes[node_of_[i]];
        if (node.feature < 0 || node.left < static_cast<int>(nodes)) continue;
        const bool go_left = data_.values[i * p + static_cast<std::size_t>(node.feature)] <= node.threshold;
        const std::size_t child = static_cast<std::size_t>(go_left ? node.left : node.right);
        node_of_[i] = child;
        g_[child] += grad[i];
        h_[child] += hess[i];
      }
      frontier = std::move(next);
    }

    for (std::size_t k = 0; k < tree.nodes.size(); ++k)
      if (tree.nodes[k].feature < 0) tree.nodes[k].value = -g_[k] / (h_[k] + lambda);
    return tree;
  }

 private:
  const TrainingData& data_;
  const std::vector<std::vector<std::size_t>>& order_;
  const BoostingParams& params_;
  std::vector<double> g_, h_;
  std::vector<std::size_t> node_of_;
};

}  // namespace

BoostedModel fit_boosting(const TrainingData& data, const BoostingParams& params) {
  const std::size_t n = data.rows, p = data.width, m = data.classes;
  std::vector<std::vector<std::size_t>> order(p, std::vector<std::size_t>(n));
  for (std::size_t f = 0; f < p; ++f) {
    std::iota(order[f].begin(), order[f].end(), std::size_t{0});
    std::stable_sort(order[f].begin(), order[f].end(),
                     [&](std::size_t a, std::size_t b) { return data.values[a * p + f] < data.values[b * p + f]; });
  }

  BoostedModel model;
  model.shrinkage = params.shrinkage;
  std::vector<double> margin(n * m, 0.0);
  std::vector<double> grad(n), hess(n);
  BoostTreeGrower grower(data, order, params);

  for (std::size_t r = 0; r < params.rounds; ++r) {
    std::vector<double> prob(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      const auto s = softmax(std::span<const double>(margin.data() + i * m, m));
      std::copy(s.begin(), s.end(), prob.begin() + static_cast<std::ptrdiff_t>(i * m));
    }
    std::vector<DecisionTree> trees;
    trees.reserve(m);
    for (std::size_t c = 0; c < m; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        const double pc = prob[i * m + c];
        grad[i] = pc - (data.labels[i] == c ? 1.0 : 0.0);
        hess[i] = std::max(pc * (1.0 - pc), 1e-16);
      }
      trees.push_back(grower.grow(grad, hess));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < m; ++c) margin[i * m + c] += params.shrinkage * trees[c].evaluate(data.row(i));
    model.rounds.push_back(std::move(trees));
  }
  return model;
}

std::vector<double> boosting_margins(const BoostedModel& model, std::span<const double> x, std::size_t classes) {
  std::vector<double> margin(classes, 0.0);
  for (const auto& round : model.rounds)
    for (std::size_t c = 0; c < classes; ++c) margin[c] += model.shrinkage * round[c].evaluate(x);
  return margin;
}

}  // namespace specsel
