#include "specsel/model_json.hpp"

#include <cmath>
#include <set>

#include "specsel/error.hpp"

namespace specsel {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    if (!ok.contains(item.key())) throw ConfigError("unknown key '" + item.key() + "'");
}

double number(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback) { return j.contains(key) ? number(j, key) : fallback; }

std::uint64_t count(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(std::string("key '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& v, const char* key) {
  if (!v.is_array()) throw ConfigError(std::string("key '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ConfigError(std::string("key '") + key + "' must contain numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

WeightVariant parse_variant(const json& j) {
  if (!j.contains("weight_variant")) return WeightVariant::standard;
  const json& v = j.at("weight_variant");
  if (v == "standard") return WeightVariant::standard;
  if (v == "paper_literal" || v == "paper-literal") return WeightVariant::paper_literal;
  throw ConfigError("unknown weight_variant " + v.dump());
}

McmcConfig parse_mcmc(const json& j) {
  McmcConfig c;
  if (!j.is_object()) throw ConfigError("key 'mcmc' must be an object");
  reject_unknown(j, {"burn_in", "thin", "stream"});
  if (j.contains("burn_in")) c.burn_in = count(j, "burn_in");
  if (j.contains("thin")) {
    c.thin = count(j, "thin");
    if (*c.thin < 1) throw ConfigError("mcmc thin must be >= 1");
  }
  if (j.contains("stream")) c.stream = count(j, "stream");
  return c;
}

}  // namespace

ModelSpec parse_model_spec(const json& j) {
  if (!j.is_object()) throw ConfigError("model spec must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError("model spec needs a string 'family'");
  const std::string family = j.at("family").get<std::string>();

  ModelSpec spec;
  if (family == "bernoulli") {
    reject_unknown(j, {"family", "n", "theta1", "p"});
    BernoulliSpec s;
    s.n = count(j, "n");
    if (j.contains("theta1") == j.contains("p")) throw ConfigError("bernoulli needs exactly one of 'theta1' or 'p'");
    if (j.contains("p")) {
      const double p = number(j, "p");
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("bernoulli p must lie in [0, 1]");
      s.theta1 = p == 0.0 ? -INFINITY : p == 1.0 ? INFINITY : std::log(p / (1.0 - p));
    } else {
      s.theta1 = number(j, "theta1");
    }
    spec = s;
  } else if (family == "sbm") {
    reject_unknown(j, {"family", "n", "prob_matrix", "block_assignment", "block_probs"});
    SbmSpec s;
    s.n = count(j, "n");
    if (!j.contains("prob_matrix") || !j.at("prob_matrix").is_array())
      throw ConfigError("sbm needs an array 'prob_matrix'");
    const json& pm = j.at("prob_matrix");
    const std::size_t k = pm.size();
    s.prob_matrix = DenseMatrix(k, k);
    for (std::size_t a = 0; a < k; ++a) {
      const auto row = number_list(pm[a], "prob_matrix");
      if (row.size() != k) throw ConfigError("prob_matrix must be square");
      for (std::size_t b = 0; b < k; ++b) s.prob_matrix(a, b) = row[b];
    }
    if (j.contains("block_assignment")) {
      const json& ba = j.at("block_assignment");
      if (!ba.is_array()) throw ConfigError("block_assignment must be an array");
      for (const auto& x : ba) {
        if (!x.is_number_integer() || x.get<std::int64_t>() < 0)
          throw ConfigError("block_assignment must hold non-negative integers");
        s.block_assignment.push_back(x.get<std::size_t>());
      }
    }
    if (j.contains("block_probs")) s.block_probs = number_list(j.at("block_probs"), "block_probs");
    spec = s;
  } else if (family == "lpm_euclidean" || family == "lpm_bilinear") {
    reject_unknown(j, {"family", "n", "theta", "dim", "sigma2"});
    LpmSpec s;
    s.kernel = family == "lpm_euclidean" ? LatentKernel::euclidean : LatentKernel::bilinear;
    s.n = count(j, "n");
    s.theta = number(j, "theta");
    s.dim = count(j, "dim");
    s.sigma2 = number_or(j, "sigma2", 1.0);
    spec = s;
  } else if (family == "gwesp_ergm") {
    reject_unknown(j, {"family", "n", "theta1", "theta2", "theta3", "weight_variant", "mcmc"});
    GwespErgmSpec s;
    s.n = count(j, "n");
    s.theta1 = number(j, "theta1");
    s.theta2 = number(j, "theta2");
    s.theta3 = number(j, "theta3");
    s.weight_variant = parse_variant(j);
    if (j.contains("mcmc")) s.mcmc = parse_mcmc(j.at("mcmc"));
    spec = s;
  } else if (family == "directed_dyad") {
    reject_unknown(j, {"family", "n", "theta1", "theta2"});
    DirectedDyadSpec s;
    s.n = count(j, "n");
    s.theta1 = number(j, "theta1");
    s.theta2 = number(j, "theta2");
    spec = s;
  } else {
    throw ConfigError("unknown model family '" + family + "'");
  }
  validate(spec);
  return spec;
}

nlohmann::ordered_json to_json(const ModelSpec& spec) {
  nlohmann::ordered_json j;
  j["family"] = family_name(spec);
  j["n"] = node_count(spec);
  if (const auto* s = std::get_if<BernoulliSpec>(&spec)) {
    if (std::isfinite(s->theta1))
      j["theta1"] = s->theta1;
    else
      j["p"] = s->theta1 > 0 ? 1.0 : 0.0;
  } else if (const auto* s = std::get_if<SbmSpec>(&spec)) {
    auto pm = nlohmann::ordered_json::array();
    for (std::size_t a = 0; a < s->prob_matrix.rows(); ++a) {
      auto row = nlohmann::ordered_json::array();
      for (double p : s->prob_matrix.row(a)) row.push_back(p);
      pm.push_back(row);
    }
    j["prob_matrix"] = pm;
    if (!s->block_assignment.empty()) j["block_assignment"] = s->block_assignment;
    if (!s->block_probs.empty()) j["block_probs"] = s->block_probs;
  } else if (const auto* s = std::get_if<LpmSpec>(&spec)) {
    j["theta"] = s->theta;
    j["dim"] = s->dim;
    j["sigma2"] = s->sigma2;
  } else if (const auto* s = std::get_if<GwespErgmSpec>(&spec)) {
    j["theta1"] = s->theta1;
    j["theta2"] = s->theta2;
    j["theta3"] = s->theta3;
    j["weight_variant"] = s->weight_variant == WeightVariant::standard ? "standard" : "paper_literal";
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    if (s->mcmc.burn_in) m["burn_in"] = *s->mcmc.burn_in;
    if (s->mcmc.thin) m["thin"] = *s->mcmc.thin;
    if (s->mcmc.stream != 0) m["stream"] = s->mcmc.stream;
    if (!m.empty()) j["mcmc"] = m;
  } else if (const auto* s = std::get_if<DirectedDyadSpec>(&spec)) {
    j["theta1"] = s->theta1;
    j["theta2"] = s->theta2;
  }
  return j;
}

std::string canonical_key(const ModelSpec& spec) { return to_json(spec).dump(); }

}  // namespace specsel
