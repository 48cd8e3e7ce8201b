#include <algorithm>
#include <cmath>
#include <numbers>

#include "specsel/learners.hpp"

namespace specsel {

std::vector<double> softmax(std::span<const double> z) {
  std::vector<double> out(z.begin(), z.end());
  if (out.empty()) return out;
  const double top = *std::max_element(out.begin(), out.end());
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

NaiveBayesModel fit_naive_bayes(const TrainingData& data, const NaiveBayesParams& params) {
  const std::size_t m = data.classes, p = data.width;
  NaiveBayesModel model;
  model.width = p;
  model.means.assign(m * p, 0.0);
  model.variances.assign(m * p, 0.0);
  model.log_priors.assign(m, 0.0);
  std::vector<double> counts(m, 0.0);

  for (std::size_t i = 0; i < data.rows; ++i) {
    const std::size_t c = data.labels[i];
    counts[c] += 1.0;
    const auto x = data.row(i);
    for (std::size_t f = 0; f < p; ++f) model.means[c * p + f] += x[f];
  }
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t f = 0; f < p; ++f) model.means[c * p + f] /= counts[c];

  // Two-pass population variance.
  for (std::size_t i = 0; i < data.rows; ++i) {
    const std::size_t c = data.labels[i];
    const auto x = data.row(i);
    for (std::size_t f = 0; f < p; ++f) {
      const double d = x[f] - model.means[c * p + f];
      model.variances[c * p + f] += d * d;
    }
  }
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t f = 0; f < p; ++f) {
      double& v = model.variances[c * p + f];
      v = std::max(v / counts[c], params.var_floor);
    }
    model.log_priors[c] = std::log(counts[c] / static_cast<double>(data.rows));
  }
  return model;
}

std::vector<double> naive_bayes_posterior(const NaiveBayesModel& model, std::span<const double> x) {
  const std::size_t p = model.width, m = model.log_priors.size();
  std::vector<double> logp(m);
  for (std::size_t c = 0; c < m; ++c) {
    double lp = model.log_priors[c];
    for (std::size_t f = 0; f < p; ++f) {
      const double var = model.variances[c * p + f];
      const double d = x[f] - model.means[c * p + f];
      lp -= 0.5 * (std::log(2.0 * std::numbers::pi * var) + d * d / var);
    }
    logp[c] = lp;
  }
  return softmax(logp);
}

}  // namespace specsel
