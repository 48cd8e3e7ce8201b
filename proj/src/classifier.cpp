#include <algorithm>
#include <cmath>

#include "specsel/classify.hpp"
#include "specsel/error.hpp"

namespace specsel {

using nlohmann::json;

std::size_t ScoreVector::argmax() const {
  return static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

std::vector<double> normalize_scores(std::span<const double> s) {
  if (s.empty()) throw ConfigError("cannot normalize an empty score vector");
  double top = 0.0;
  for (double v : s) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("scores must be finite and non-negative");
    top = std::max(top, v);
  }
  if (top == 0.0) throw ConfigError("cannot normalize an all-zero score vector");
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] == top ? 1.0 : s[i] / top;
  return out;
}

ScoreVector make_scores(std::vector<double> s) {
  ScoreVector out;
  out.s_norm = normalize_scores(s);
  out.s = std::move(s);
  return out;
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::gaussian_nb: return "gaussian_nb";
    case Algorithm::random_forest: return "random_forest";
    case Algorithm::gbt: return "gbt";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (auto a : {Algorithm::gaussian_nb, Algorithm::random_forest, Algorithm::gbt})
    if (to_string(a) == name) return a;
  throw ConfigError("unknown classifier '" + name + "'");
}

Algorithm TrainedClassifier::algorithm() const noexcept {
  switch (model_.index()) {
    case 0: return Algorithm::gaussian_nb;
    case 1: return Algorithm::random_forest;
    default: return Algorithm::gbt;
  }
}

ScoreVector TrainedClassifier::predict_scores(std::span<const double> row) const {
  if (row.size() != width_)
    throw ConfigError("feature width " + std::to_string(row.size()) + " does not match training width " +
                      std::to_string(width_));
  if (classes_ == 1) return make_scores({1.0});

  std::vector<double> s;
  if (const auto* nb = std::get_if<NaiveBayesModel>(&model_)) {
    s = naive_bayes_posterior(*nb, row);
  } else if (const auto* rf = std::get_if<ForestModel>(&model_)) {
    s = forest_votes(*rf, row, classes_);
    const double trees = static_cast<double>(rf->trees.size());
    const double smooth = 1.0 / static_cast<double>(classes_);
    for (double& v : s) v = (v + smooth) / (trees + 1.0);
  } else {
    s = softmax(boosting_margins(std::get<BoostedModel>(model_), row, classes_));
  }
  return make_scores(std::move(s));
}

double TrainedClassifier::accuracy(const DesignMatrix& d) const {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < d.rows(); ++i)
    if (predict(d.row(i)) == d.label(i)) ++correct;
  return static_cast<double>(correct) / static_cast<double>(d.rows());
}

TrainedClassifier train(const DesignMatrix& d, Algorithm algo, const ClassifierParams& params) {
  TrainingData data{d.rows(), d.width(), d.classes(), {}, d.labels()};
  std::vector<double> values;
  values.reserve(d.rows() * d.width());
  for (std::size_t i = 0; i < d.rows(); ++i) values.insert(values.end(), d.row(i).begin(), d.row(i).end());
  data.values = values;

  std::optional<double> oob;
  TrainedClassifier::Model model;
  switch (algo) {
    case Algorithm::gaussian_nb:
      model = fit_naive_bayes(data, params.naive_bayes);
      break;
    case Algorithm::random_forest: {
      if (params.forest.trees == 0) throw ConfigError("random forest needs at least one tree");
      auto fit = fit_forest(data, params.forest, params.seed);
      oob = fit.oob_accuracy;
      model = std::move(fit.model);
      break;
    }
    case Algorithm::gbt:
      model = fit_boosting(data, params.boosting);
      break;
  }
  TrainedClassifier out(std::move(model), d.classes(), d.width(), d.feature_names());
  out.oob_accuracy_ = oob;
  return out;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

json tree_to_json(const DecisionTree& t) {
  json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
       value = json::array();
  for (const auto& node : t.nodes) {
    feature.push_back(node.feature);
    threshold.push_back(node.threshold);
    left.push_back(node.left);
    right.push_back(node.right);
    value.push_back(node.value);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"value", value}};
}

DecisionTree tree_from_json(const json& j, std::size_t width) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || value.size() != n || n == 0)
    throw ConfigError("corrupt tree in classifier file");
  DecisionTree t;
  for (std::size_t k = 0; k < n; ++k) {
    if (feature[k] >= 0) {
      const bool ok = static_cast<std::size_t>(feature[k]) < width && left[k] > static_cast<int>(k) &&
                      right[k] > static_cast<int>(k) && static_cast<std::size_t>(left[k]) < n &&
                      static_cast<std::size_t>(right[k]) < n;
      if (!ok) throw ConfigError("corrupt tree in classifier file");
    }
    t.nodes.push_back({feature[k], threshold[k], left[k], right[k], value[k]});
  }
  return t;
}

}  // namespace

json TrainedClassifier::to_json() const {
  json j;
  j["format"] = "specsel-classifier";
  j["version"] = kFormatVersion;
  j["algorithm"] = to_string(algorithm());
  j["classes"] = classes_;
  j["width"] = width_;
  j["feature_names"] = names_;
  if (oob_accuracy_) j["oob_accuracy"] = *oob_accuracy_;
  if (const auto* nb = std::get_if<NaiveBayesModel>(&model_)) {
    j["model"] = {{"means", nb->means}, {"variances", nb->variances}, {"log_priors", nb->log_priors}};
  } else if (const auto* rf = std::get_if<ForestModel>(&model_)) {
    json trees = json::array();
    for (const auto& t : rf->trees) trees.push_back(tree_to_json(t));
    j["model"] = {{"trees", trees}};
  } else {
    const auto& gb = std::get<BoostedModel>(model_);
    json rounds = json::array();
    for (const auto& round : gb.rounds) {
      json r = json::array();
      for (const auto& t : round) r.push_back(tree_to_json(t));
      rounds.push_back(r);
    }
    j["model"] = {{"shrinkage", gb.shrinkage}, {"rounds", rounds}};
  }
  return j;
}

TrainedClassifier TrainedClassifier::from_json(const json& j) {
  try {
    if (j.at("format") != "specsel-classifier") throw ConfigError("not a specsel classifier file");
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion)
      throw ConfigError("classifier file version " + std::to_string(version) + " is not supported (expected " +
                        std::to_string(kFormatVersion) + ")");
    const Algorithm algo = parse_algorithm(j.at("algorithm").get<std::string>());
    const auto classes = j.at("classes").get<std::size_t>();
    const auto width = j.at("width").get<std::size_t>();
    auto names = j.at("feature_names").get<std::vector<std::string>>();
    const json& m = j.at("model");
    if (classes == 0 || width == 0) throw ConfigError("classifier file has zero classes or width");

    Model model;
    switch (algo) {
      case Algorithm::gaussian_nb: {
        NaiveBayesModel nb;
        nb.width = width;
        nb.means = m.at("means").get<std::vector<double>>();
        nb.variances = m.at("variances").get<std::vector<double>>();
        nb.log_priors = m.at("log_priors").get<std::vector<double>>();
        if (nb.means.size() != classes * width || nb.variances.size() != classes * width ||
            nb.log_priors.size() != classes)
          throw ConfigError("corrupt naive Bayes parameters");
        model = std::move(nb);
        break;
      }
      case Algorithm::random_forest: {
        ForestModel rf;
        for (const auto& t : m.at("trees")) {
          rf.trees.push_back(tree_from_json(t, width));
          for (const auto& node : rf.trees.back().nodes)
            if (node.feature < 0 && !(node.value >= 0.0 && node.value < static_cast<double>(classes)))
              throw ConfigError("corrupt forest leaf");
        }
        model = std::move(rf);
        break;
      }
      case Algorithm::gbt: {
        BoostedModel gb;
        gb.shrinkage = m.at("shrinkage").get<double>();
        for (const auto& r : m.at("rounds")) {
          std::vector<DecisionTree> round;
          for (const auto& t : r) round.push_back(tree_from_json(t, width));
          if (round.size() != classes) throw ConfigError("corrupt boosting round");
          gb.rounds.push_back(std::move(round));
        }
        model = std::move(gb);
        break;
      }
    }
    TrainedClassifier out(std::move(model), classes, width, std::move(names));
    if (j.contains("oob_accuracy")) out.oob_accuracy_ = j.at("oob_accuracy").get<double>();
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed classifier file: ") + e.what());
  }
}

}  // namespace specsel
