#include "specsel/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>

#include "specsel/error.hpp"
#include "specsel/model_json.hpp"
#include "specsel/parallel.hpp"
#include "specsel/rng.hpp"
#include "specsel/spectra.hpp"

namespace specsel {

void validate_candidates(const Graph& observed, const std::vector<Candidate>& candidates) {
  if (candidates.size() < 2) throw ConfigError("model selection needs at least two candidates");
  std::set<std::string> names;
  for (const auto& c : candidates) {
    if (c.name.empty()) throw ConfigError("candidate names must be non-empty");
    if (!names.insert(c.name).second) throw ConfigError("duplicate candidate name '" + c.name + "'");
    validate(c.spec);
    if (node_count(c.spec) != observed.size())
      throw ConfigError("candidate '" + c.name + "' has n = " + std::to_string(node_count(c.spec)) +
                        " but the observed network has n = " + std::to_string(observed.size()));
    if (is_directed(c.spec) != observed.directed())
      throw ConfigError("candidate '" + c.name + "' and the observed network differ in directedness");
  }
}

TrainingSet simulate_training_set(const Graph& observed, const std::vector<Candidate>& candidates,
                                  const SelectOptions& opt) {
  validate_candidates(observed, candidates);
  validate(opt.features);
  if (opt.K == 0) throw ConfigError("K must be at least 1");

  const std::size_t M = candidates.size(), K = opt.K;
  std::vector<std::string> keys(M);
  for (std::size_t i = 0; i < M; ++i) keys[i] = canonical_key(candidates[i].spec);
  std::vector<std::size_t> order(M);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    return candidates[a].name < candidates[b].name;
  });

  std::vector<LabeledSpectrum> spectra(M * K);
  parallel_for(M * K, opt.threads, [&](std::size_t job) {
    const std::size_t label = job / K, k = job % K;
    Rng rng(derive_seed(derive_seed(opt.seed, label + 1), k));
    spectra[job] = {spectrum(sample(candidates[order[label]].spec, rng)), label};
  });

  TrainingSet out{std::move(order), build_features(spectra, opt.features), {}};
  if (out.design.degenerate())
    out.warnings.push_back("all simulated spectra are identical; the candidates cannot be told apart");
  return out;
}

SelectionResult fit_and_predict(const Graph& observed, const std::vector<Candidate>& candidates,
                                const TrainingSet& training, const SelectOptions& opt) {
  const std::size_t M = candidates.size();
  if (training.order.size() != M || training.design.classes() != M)
    throw ConfigError("training set does not match the candidate list");

  ClassifierParams params = opt.params;
  params.seed = derive_seed(opt.seed, 0);
  TrainedClassifier clf = train(training.design, opt.algorithm, params);

  const auto row = feature_row(spectrum(observed), opt.features);
  const ScoreVector canonical = clf.predict_scores(row);

  // Back to caller order. The winner is chosen in canonical order so that ties
  // break the same way however the list is permuted.
  std::vector<double> s(M);
  for (std::size_t c = 0; c < M; ++c) s[training.order[c]] = canonical.s[c];

  SelectionReport report;
  report.predicted = training.order[canonical.argmax()];
  for (const auto& c : candidates) report.model_names.push_back(c.name);
  report.scores = make_scores(std::move(s));
  report.K = training.design.rows_per_class();
  report.algorithm = opt.algorithm;
  report.seed = opt.seed;
  report.diagnostics.in_sample_accuracy = clf.accuracy(training.design);
  report.diagnostics.oob_accuracy = clf.oob_accuracy();
  report.diagnostics.warnings = training.warnings;
  return {std::move(report), std::move(clf), training.order};
}

SelectionResult run_selection(const Graph& observed, const std::vector<Candidate>& candidates,
                              const SelectOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const TrainingSet training = simulate_training_set(observed, candidates, opt);
  SelectionResult result = fit_and_predict(observed, candidates, training, opt);
  result.report.diagnostics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

SelectionReport select_model(const Graph& observed, const std::vector<Candidate>& candidates,
                             const SelectOptions& opt) {
  return run_selection(observed, candidates, opt).report;
}

nlohmann::ordered_json report_to_json(const SelectionReport& report, const std::vector<Candidate>& candidates,
                                      const FeatureConfig& features) {
  using nlohmann::ordered_json;
  ordered_json scores = ordered_json::object(), normalized = ordered_json::object();
  for (std::size_t i = 0; i < report.model_names.size(); ++i) {
    scores[report.model_names[i]] = report.scores.s[i];
    normalized[report.model_names[i]] = report.scores.s_norm[i];
  }
  ordered_json models = ordered_json::array();
  for (const auto& c : candidates) models.push_back({{"name", c.name}, {"spec", to_json(c.spec)}});

  ordered_json feats = ordered_json::object();
  feats["raw_spectrum"] = features.use_raw_spectrum;
  feats["engineered"] = ordered_json::array();
  for (auto f : features.engineered) feats["engineered"].push_back(to_string(f));

  ordered_json diag = ordered_json::object();
  diag["in_sample_accuracy"] = report.diagnostics.in_sample_accuracy;
  if (report.diagnostics.oob_accuracy) diag["oob_accuracy"] = *report.diagnostics.oob_accuracy;
  diag["warnings"] = report.diagnostics.warnings;

  ordered_json j = ordered_json::object();
  j["predicted"] = report.model_names.at(report.predicted);
  j["scores"] = scores;
  j["normalized"] = normalized;
  j["K"] = report.K;
  j["seed"] = report.seed;
  j["classifier"] = to_string(report.algorithm);
  j["features"] = feats;
  j["models"] = models;
  j["diagnostics"] = diag;
  return j;
}

}  // namespace specsel
