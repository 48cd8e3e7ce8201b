#include "specsel/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "specsel/error.hpp"
#include "specsel/harness.hpp"
#include "specsel/io.hpp"
#include "specsel/model_json.hpp"
#include "specsel/pipeline.hpp"
#include "specsel/rng.hpp"
#include "specsel/spectra.hpp"

namespace specsel {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

struct CommonArgs {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
};

// Config field helpers. Every message names the offending key.

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& item : j.items())
    if (!allowed.contains(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

std::uint64_t get_count(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError("key '" + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("key '" + key + "' must be a number");
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError("key '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& get_array(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_array()) throw ConfigError("key '" + key + "' must be an array");
  return v;
}

std::uint64_t resolve_seed(const json& cfg, const CommonArgs& args) {
  if (args.seed) return *args.seed;
  if (!cfg.contains("seed")) throw ConfigError("a master seed is required: set 'seed' in the config or pass --seed");
  return get_count(cfg, "seed");
}

std::size_t resolve_cli_threads(const CommonArgs& args) {
  if (args.threads) return *args.threads;
  if (const char* env = std::getenv("SPECSEL_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw ConfigError(std::string("SPECSEL_THREADS is not a number: '") + env + "'");
    return static_cast<std::size_t>(v);
  }
  return 0;
}

FeatureConfig parse_features(const json& j) {
  reject_unknown(j, {"raw_spectrum", "engineered"}, "features");
  FeatureConfig f;
  if (j.contains("raw_spectrum")) {
    if (!j.at("raw_spectrum").is_boolean()) throw ConfigError("key 'raw_spectrum' must be true or false");
    f.use_raw_spectrum = j.at("raw_spectrum").get<bool>();
  }
  if (j.contains("engineered")) {
    f.engineered.clear();
    for (const auto& e : get_array(j, "engineered")) {
      if (!e.is_string()) throw ConfigError("key 'engineered' must list feature names");
      f.engineered.push_back(parse_engineered_feature(e.get<std::string>()));
    }
  }
  validate(f);
  return f;
}

ClassifierParams parse_classifier_params(const json& j) {
  reject_unknown(j, {"random_forest", "gbt", "gaussian_nb"}, "classifier_params");
  ClassifierParams p;
  if (j.contains("random_forest")) {
    const json& f = j.at("random_forest");
    reject_unknown(f, {"trees", "max_depth", "max_features", "min_samples_leaf"}, "random_forest");
    if (f.contains("trees")) p.forest.trees = get_count(f, "trees");
    if (f.contains("max_depth")) p.forest.max_depth = get_count(f, "max_depth");
    if (f.contains("max_features")) p.forest.max_features = get_count(f, "max_features");
    if (f.contains("min_samples_leaf")) p.forest.min_samples_leaf = get_count(f, "min_samples_leaf");
    if (p.forest.trees == 0) throw ConfigError("random_forest trees must be at least 1");
  }
  if (j.contains("gbt")) {
    const json& g = j.at("gbt");
    reject_unknown(g, {"rounds", "max_depth", "shrinkage", "lambda", "min_child_weight"}, "gbt");
    if (g.contains("rounds")) p.boosting.rounds = get_count(g, "rounds");
    if (g.contains("max_depth")) p.boosting.max_depth = get_count(g, "max_depth");
    if (g.contains("shrinkage")) p.boosting.shrinkage = get_number(g, "shrinkage");
    if (g.contains("lambda")) p.boosting.lambda = get_number(g, "lambda");
    if (g.contains("min_child_weight")) p.boosting.min_child_weight = get_number(g, "min_child_weight");
    if (!(p.boosting.shrinkage > 0) || !(p.boosting.lambda >= 0) || !(p.boosting.min_child_weight >= 0))
      throw ConfigError("gbt needs shrinkage > 0, lambda >= 0 and min_child_weight >= 0");
  }
  if (j.contains("gaussian_nb")) {
    const json& nb = j.at("gaussian_nb");
    reject_unknown(nb, {"var_floor"}, "gaussian_nb");
    if (nb.contains("var_floor")) p.naive_bayes.var_floor = get_number(nb, "var_floor");
    if (!(p.naive_bayes.var_floor > 0)) throw ConfigError("gaussian_nb var_floor must be positive");
  }
  return p;
}

// Relative input paths are taken relative to the config file.
std::string resolve_input(const std::string& config_path, const std::string& p) {
  const fs::path path(p);
  if (path.is_absolute()) return p;
  return (fs::path(config_path).parent_path() / path).string();
}

std::string output_path(const CommonArgs& args, const std::string& name) {
  fs::create_directories(args.out);
  return (fs::path(args.out) / name).string();
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

int cmd_simulate(const CommonArgs& args, std::ostream& out) {
  const json cfg = read_json_file(args.config);
  reject_unknown(cfg, {"seed", "K", "model", "prefix"}, args.config);
  if (!cfg.contains("model")) throw ConfigError("missing key 'model'");
  if (!cfg.contains("K")) throw ConfigError("missing key 'K'");
  const ModelSpec spec = parse_model_spec(cfg.at("model"));
  validate(spec);
  const std::uint64_t seed = resolve_seed(cfg, args);
  const std::size_t K = get_count(cfg, "K");
  if (K == 0) throw ConfigError("K must be at least 1");
  const std::string prefix = cfg.contains("prefix") ? get_string(cfg, "prefix") : "network";

  ordered_json manifest = ordered_json::object();
  manifest["model"] = to_json(spec);
  manifest["seed"] = seed;
  manifest["K"] = K;
  manifest["networks"] = ordered_json::array();
  const int digits = std::max<int>(4, static_cast<int>(std::to_string(K).size()));
  for (std::size_t k = 0; k < K; ++k) {
    const std::uint64_t child = derive_seed(seed, k);
    Rng rng(child);
    const Graph g = sample(spec, rng);
    std::string index = std::to_string(k + 1);
    index.insert(0, static_cast<std::size_t>(digits) - std::min<std::size_t>(index.size(), digits), '0');
    const std::string file = prefix + "_" + index + ".txt";
    std::ostringstream text;
    write_edge_list(text, g);
    write_file_atomic(output_path(args, file), text.str());
    manifest["networks"].push_back({{"file", file}, {"seed", child}, {"edges", g.edge_count()}});
  }
  write_file_atomic(output_path(args, "manifest.json"), dump(manifest));
  out << "wrote " << K << " networks and manifest.json to " << args.out << "\n";
  return kExitOk;
}

int cmd_spectrum(const CommonArgs& args, std::ostream& out) {
  const json cfg = read_json_file(args.config);
  reject_unknown(cfg, {"inputs", "label", "output"}, args.config);
  if (!cfg.contains("inputs")) throw ConfigError("missing key 'inputs'");
  const std::string label = cfg.contains("label") ? get_string(cfg, "label") : "observed";
  const std::string output = cfg.contains("output") ? get_string(cfg, "output") : "spectra.csv";
  std::vector<SpectrumRow> rows;
  for (const auto& entry : get_array(cfg, "inputs")) {
    if (!entry.is_string()) throw ConfigError("key 'inputs' must list file paths");
    const Graph g = read_edge_list_file(resolve_input(args.config, entry.get<std::string>()));
    rows.push_back({label, rows.size() + 1, spectrum(g)});
  }
  if (rows.empty()) throw ConfigError("key 'inputs' is empty");
  std::ostringstream csv;
  write_spectrum_csv(csv, rows);
  write_file_atomic(output_path(args, output), csv.str());
  out << "wrote " << rows.size() << " spectra to " << output_path(args, output) << "\n";
  return kExitOk;
}

int cmd_select(const CommonArgs& args, std::ostream& out) {
  const json cfg = read_json_file(args.config);
  reject_unknown(cfg,
                 {"observed", "candidates", "K", "seed", "classifier", "classifier_params", "features",
                  "save_classifier"},
                 args.config);
  if (!cfg.contains("observed")) throw ConfigError("missing key 'observed'");
  if (!cfg.contains("candidates")) throw ConfigError("missing key 'candidates'");

  std::vector<Candidate> candidates;
  for (const auto& entry : get_array(cfg, "candidates")) {
    if (!entry.is_object()) throw ConfigError("each candidate must be a model object");
    json spec = entry;
    std::string name = "M" + std::to_string(candidates.size() + 1);
    if (spec.contains("name")) {
      name = get_string(spec, "name");
      spec.erase("name");
    }
    if (name.empty()) throw ConfigError("candidate names must be non-empty");
    candidates.push_back({name, parse_model_spec(spec)});
  }

  SelectOptions opt;
  opt.seed = resolve_seed(cfg, args);
  opt.threads = resolve_cli_threads(args);
  if (cfg.contains("K")) opt.K = get_count(cfg, "K");
  if (cfg.contains("classifier")) opt.algorithm = parse_algorithm(get_string(cfg, "classifier"));
  if (cfg.contains("classifier_params")) opt.params = parse_classifier_params(cfg.at("classifier_params"));
  if (cfg.contains("features")) opt.features = parse_features(cfg.at("features"));
  bool save = false;
  if (cfg.contains("save_classifier")) {
    if (!cfg.at("save_classifier").is_boolean()) throw ConfigError("key 'save_classifier' must be true or false");
    save = cfg.at("save_classifier").get<bool>();
  }

  const Graph observed = read_edge_list_file(resolve_input(args.config, get_string(cfg, "observed")));
  const SelectionResult result = run_selection(observed, candidates, opt);
  const SelectionReport& rep = result.report;

  write_file_atomic(output_path(args, "report.json"), dump(report_to_json(rep, candidates, opt.features)));
  if (save) {
    ordered_json j = ordered_json::parse(result.classifier.to_json().dump());
    ordered_json names = ordered_json::array();
    for (std::size_t c : result.class_order) names.push_back(candidates[c].name);
    j["class_names"] = names;
    write_file_atomic(output_path(args, "classifier.json"), dump(j));
  }

  std::vector<std::size_t> rank(rep.model_names.size());
  for (std::size_t i = 0; i < rank.size(); ++i) rank[i] = i;
  std::stable_sort(rank.begin(), rank.end(),
                   [&](std::size_t a, std::size_t b) { return rep.scores.s[a] > rep.scores.s[b]; });
  std::size_t width = 5;
  for (const auto& n : rep.model_names) width = std::max(width, n.size());
  char line[256];
  out << "predicted: " << rep.model_names[rep.predicted] << "\n\n";
  std::snprintf(line, sizeof line, "%4s  %-*s  %10s  %10s\n", "rank", static_cast<int>(width), "model", "s",
                "s_norm");
  out << line;
  for (std::size_t r = 0; r < rank.size(); ++r) {
    const std::size_t i = rank[r];
    std::snprintf(line, sizeof line, "%4zu  %-*s  %10.4f  %10.4f\n", r + 1, static_cast<int>(width),
                  rep.model_names[i].c_str(), rep.scores.s[i], rep.scores.s_norm[i]);
    out << line;
  }
  std::snprintf(line, sizeof line, "\nK=%zu classifier=%s in-sample accuracy=%.3f wall=%.2fs\n", rep.K,
                to_string(rep.algorithm).c_str(), rep.diagnostics.in_sample_accuracy, rep.diagnostics.wall_seconds);
  out << line;
  for (const auto& w : rep.diagnostics.warnings) out << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_study(const CommonArgs& args, std::ostream& out) {
  const json cfg = read_json_file(args.config);
  reject_unknown(cfg,
                 {"study", "seed", "R", "K", "grid", "sizes", "dims", "classifiers", "classifier",
                  "classifier_params", "features", "theta1", "theta3", "weight_variant"},
                 args.config);
  if (!cfg.contains("study")) throw ConfigError("missing key 'study'");
  if (!cfg.at("study").is_number_integer()) throw ConfigError("key 'study' must be an integer");
  StudyConfig sc = default_study_config(cfg.at("study").get<int>());
  sc.seed = resolve_seed(cfg, args);
  sc.threads = resolve_cli_threads(args);
  if (cfg.contains("R")) sc.R = get_count(cfg, "R");
  if (cfg.contains("K")) sc.K = get_count(cfg, "K");
  auto numbers = [&](const std::string& key) {
    std::vector<double> v;
    for (const auto& x : get_array(cfg, key)) {
      if (!x.is_number()) throw ConfigError("key '" + key + "' must contain numbers");
      v.push_back(x.get<double>());
    }
    return v;
  };
  auto counts = [&](const std::string& key) {
    std::vector<std::size_t> v;
    for (const auto& x : get_array(cfg, key)) {
      if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<std::int64_t>() >= 0))
        throw ConfigError("key '" + key + "' must contain non-negative integers");
      v.push_back(x.get<std::size_t>());
    }
    return v;
  };
  if (cfg.contains("grid")) sc.grid = numbers("grid");
  if (cfg.contains("sizes")) sc.sizes = counts("sizes");
  if (cfg.contains("dims")) sc.dims = counts("dims");
  if (cfg.contains("classifiers")) {
    sc.classifiers.clear();
    for (const auto& x : get_array(cfg, "classifiers")) {
      if (!x.is_string()) throw ConfigError("key 'classifiers' must list classifier names");
      sc.classifiers.push_back(parse_algorithm(x.get<std::string>()));
    }
  }
  if (cfg.contains("classifier")) sc.algorithm = parse_algorithm(get_string(cfg, "classifier"));
  if (cfg.contains("classifier_params")) sc.params = parse_classifier_params(cfg.at("classifier_params"));
  if (cfg.contains("features")) sc.features = parse_features(cfg.at("features"));
  if (cfg.contains("theta1")) sc.theta1 = get_number(cfg, "theta1");
  if (cfg.contains("theta3")) sc.theta3 = get_number(cfg, "theta3");
  if (cfg.contains("weight_variant")) {
    const std::string v = get_string(cfg, "weight_variant");
    if (v == "standard") sc.weight_variant = WeightVariant::standard;
    else if (v == "paper_literal" || v == "paper-literal") sc.weight_variant = WeightVariant::paper_literal;
    else throw ConfigError("unknown weight_variant '" + v + "'");
  }
  validate(sc);

  const auto table = run_study(sc);
  const std::string base = "study" + std::to_string(sc.study);
  emit_outputs(table, output_path(args, base + ".csv"), output_path(args, base + ".svg"));
  out << "wrote " << table.size() << " rows to " << output_path(args, base + ".csv") << " and "
      << output_path(args, base + ".svg") << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral model selection for network data"};
  app.require_subcommand(1);
  CommonArgs args;

  auto add_common = [&](CLI::App* sub, bool seeded) {
    sub->add_option("--config", args.config, "JSON config file")->required();
    sub->add_option("--out", args.out, "output directory (default: current directory)");
    if (seeded) {
      sub->add_option("--seed", args.seed, "master seed; overrides the config");
      sub->add_option("--threads", args.threads, "worker threads (0 = all cores)");
    }
  };
  CLI::App* simulate = app.add_subcommand("simulate", "simulate networks from a model");
  CLI::App* spec = app.add_subcommand("spectrum", "Laplacian spectra of edge-list files");
  CLI::App* select = app.add_subcommand("select", "select among candidate models for an observed network");
  CLI::App* study = app.add_subcommand("study", "run a replication study");
  add_common(simulate, true);
  add_common(spec, false);
  add_common(select, true);
  add_common(study, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(args, out);
    if (spec->parsed()) return cmd_spectrum(args, out);
    if (select->parsed()) return cmd_select(args, out);
    return cmd_study(args, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace specsel
