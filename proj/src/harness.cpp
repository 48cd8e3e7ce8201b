#include "specsel/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "specsel/error.hpp"
#include "specsel/io.hpp"
#include "specsel/parallel.hpp"
#include "specsel/rng.hpp"

namespace specsel {

namespace {

std::vector<double> linspace(double first, double step, int count) {
  std::vector<double> v;
  for (int i = 0; i < count; ++i) v.push_back(first + step * i);
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

StudyConfig default_study_config(int study) {
  StudyConfig cfg;
  cfg.study = study;
  switch (study) {
    case 1:
      cfg.grid = linspace(0.0, 0.1, 6);
      cfg.sizes = {25, 50, 75, 100, 200};
      break;
    case 2:
      cfg.grid = linspace(0.1, 0.1, 10);
      cfg.sizes = {50, 100, 150, 200};
      break;
    case 3:
      cfg.grid = {1, 2, 3, 4, 5};
      cfg.sizes = {50, 100, 150, 200, 250};
      cfg.R = 100;
      break;
    case 4:
      cfg.grid = linspace(0.1, 0.1, 10);
      cfg.sizes = {50, 100, 150, 200};
      cfg.dims = {1, 2, 3};
      cfg.R = 100;
      break;
    case 5:
      cfg.grid = linspace(0.0, 0.1, 6);
      cfg.sizes = {25, 50, 75, 100, 200};
      cfg.classifiers = {Algorithm::gbt, Algorithm::random_forest, Algorithm::gaussian_nb};
      break;
    default:
      throw ConfigError("unknown study id " + std::to_string(study) + " (expected 1 to 5)");
  }
  return cfg;
}

void validate(const StudyConfig& cfg) {
  if (cfg.study < 1 || cfg.study > 5)
    throw ConfigError("unknown study id " + std::to_string(cfg.study) + " (expected 1 to 5)");
  if (cfg.R == 0) throw ConfigError("R must be at least 1");
  if (cfg.K == 0) throw ConfigError("K must be at least 1");
  if (cfg.grid.empty()) throw ConfigError("study grid is empty");
  if (cfg.sizes.empty()) throw ConfigError("study sizes are empty");
  for (std::size_t n : cfg.sizes)
    if (n < 2) throw ConfigError("network sizes must be at least 2");
  for (double g : cfg.grid)
    if (!std::isfinite(g)) throw ConfigError("study grid values must be finite");
  if (cfg.study == 3) {
    if (cfg.grid.size() < 2) throw ConfigError("study 3 needs at least two dimensions");
    for (double k : cfg.grid)
      if (k < 1 || k != std::floor(k)) throw ConfigError("study 3 grid must hold positive integer dimensions");
    auto sorted = cfg.grid;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ConfigError("study 3 grid has repeated dimensions");
  }
  if (cfg.study == 4) {
    if (cfg.dims.empty()) throw ConfigError("study 4 needs at least one latent dimension");
    for (double s2 : cfg.grid)
      if (!(s2 > 0)) throw ConfigError("study 4 grid values (sigma2) must be positive");
  }
  if (cfg.study == 5 && cfg.classifiers.empty()) throw ConfigError("study 5 needs at least one classifier");
  validate(cfg.features);
}

Interval wilson_interval(std::size_t successes, std::size_t trials) {
  if (trials == 0) throw ConfigError("Wilson interval needs at least one trial");
  if (successes > trials) throw ConfigError("more successes than trials");
  constexpr double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  Interval out{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) out.low = 0.0;
  if (successes == trials) out.high = 1.0;
  out.low = std::min(out.low, p);
  out.high = std::max(out.high, p);
  return out;
}

RateEstimate make_rate(std::size_t successes, std::size_t trials) {
  const Interval ci = wilson_interval(successes, trials);
  RateEstimate r;
  r.successes = successes;
  r.trials = trials;
  r.rate = static_cast<double>(successes) / static_cast<double>(trials);
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  return r;
}

std::vector<std::vector<std::size_t>> selection_counts(const ModelSpec& true_model,
                                                       const std::vector<Candidate>& candidates, std::size_t R,
                                                       const SelectOptions& opt,
                                                       const std::vector<Algorithm>& algorithms,
                                                       std::uint64_t seed, std::size_t threads) {
  if (R == 0) throw ConfigError("R must be at least 1");
  if (algorithms.empty()) throw ConfigError("no classifier given");
  validate(true_model);
  const std::size_t A = algorithms.size(), M = candidates.size();

  // winners[r * A + a]: candidate picked in replicate r by algorithm a.
  std::vector<std::size_t> winners(R * A);
  parallel_for(R, threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(seed, r);
    Rng draw(derive_seed(rep_seed, 0));
    const Graph observed = sample(true_model, draw);
    SelectOptions local = opt;
    local.seed = derive_seed(rep_seed, 1);
    local.threads = 1;
    const TrainingSet training = simulate_training_set(observed, candidates, local);
    for (std::size_t a = 0; a < A; ++a) {
      local.algorithm = algorithms[a];
      winners[r * A + a] = fit_and_predict(observed, candidates, training, local).report.predicted;
    }
  });

  std::vector<std::vector<std::size_t>> counts(A, std::vector<std::size_t>(M, 0));
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t a = 0; a < A; ++a) ++counts[a][winners[r * A + a]];
  return counts;
}

RateEstimate run_replications(const ModelSpec& true_model, const std::vector<Candidate>& candidates,
                              std::size_t correct, std::size_t R, const SelectOptions& opt, std::uint64_t seed,
                              std::size_t threads) {
  if (correct >= candidates.size()) throw ConfigError("correct candidate index out of range");
  const auto counts = selection_counts(true_model, candidates, R, opt, {opt.algorithm}, seed, threads);
  RateEstimate r = make_rate(counts[0][correct], R);
  r.n = node_count(true_model);
  r.classifier = to_string(opt.algorithm);
  return r;
}

std::vector<RateEstimate> run_study(const StudyConfig& cfg) {
  validate(cfg);
  SelectOptions opt;
  opt.K = cfg.K;
  opt.features = cfg.features;
  opt.algorithm = cfg.algorithm;
  opt.params = cfg.params;

  std::vector<RateEstimate> table;
  std::uint64_t setting_index = 0;
  // Settings are numbered in output order; setting i replicates under derive_seed(seed, i).
  auto next_seed = [&] { return derive_seed(cfg.seed, setting_index++); };
  auto push = [&](RateEstimate r, std::size_t n, const std::string& setting, const std::string& classifier,
                  std::string series, double x) {
    r.study = cfg.study;
    r.n = n;
    r.setting = setting;
    r.classifier = classifier;
    r.series = std::move(series);
    r.x = x;
    table.push_back(std::move(r));
  };

  switch (cfg.study) {
    case 1:
    case 5: {
      const auto algos = cfg.study == 5 ? cfg.classifiers : std::vector<Algorithm>{cfg.algorithm};
      for (std::size_t n : cfg.sizes) {
        for (double theta2 : cfg.grid) {
          GwespErgmSpec truth;
          truth.n = n;
          truth.theta1 = cfg.theta1;
          truth.theta2 = theta2;
          truth.theta3 = cfg.theta3;
          truth.weight_variant = cfg.weight_variant;
          const std::vector<Candidate> candidates{{"gwesp", truth}, {"bernoulli", BernoulliSpec{n, cfg.theta1}}};
          const auto counts = selection_counts(truth, candidates, cfg.R, opt, algos, next_seed(), cfg.threads);
          for (std::size_t a = 0; a < algos.size(); ++a) {
            const std::string name = to_string(algos[a]);
            std::string series = "n=" + std::to_string(n);
            if (cfg.study == 5) series = name + " " + series;
            push(make_rate(counts[a][0], cfg.R), n, "theta2=" + fmt(theta2), name, series, theta2);
          }
        }
      }
      break;
    }
    case 2: {
      for (std::size_t n : cfg.sizes) {
        for (double theta2 : cfg.grid) {
          const DirectedDyadSpec truth{n, cfg.theta1, theta2};
          const std::vector<Candidate> candidates{{"no_reciprocity", DirectedDyadSpec{n, cfg.theta1, 0.0}},
                                                  {"reciprocity", truth}};
          const auto counts =
              selection_counts(truth, candidates, cfg.R, opt, {cfg.algorithm}, next_seed(), cfg.threads);
          push(make_rate(counts[0][1], cfg.R), n, "theta2=" + fmt(theta2), to_string(cfg.algorithm),
               "n=" + std::to_string(n), theta2);
        }
      }
      break;
    }
    case 3: {
      for (std::size_t n : cfg.sizes) {
        std::vector<Candidate> candidates;
        for (double k : cfg.grid) {
          LpmSpec s;
          s.kernel = LatentKernel::euclidean;
          s.n = n;
          s.theta = cfg.theta1;
          s.dim = static_cast<std::size_t>(k);
          s.sigma2 = 1.0;
          candidates.push_back({"k=" + fmt(k), s});
        }
        for (std::size_t t = 0; t < candidates.size(); ++t) {
          const auto counts = selection_counts(candidates[t].spec, candidates, cfg.R, opt, {cfg.algorithm},
                                               next_seed(), cfg.threads);
          for (std::size_t c = 0; c < candidates.size(); ++c) {
            const std::string setting = "true_k=" + fmt(cfg.grid[t]) + " selected_k=" + fmt(cfg.grid[c]);
            // Only the diagonal goes on the chart.
            push(make_rate(counts[0][c], cfg.R), n, setting, to_string(cfg.algorithm),
                 t == c ? "n=" + std::to_string(n) : std::string{}, cfg.grid[t]);
          }
        }
      }
      break;
    }
    case 4: {
      for (std::size_t n : cfg.sizes) {
        for (std::size_t dim : cfg.dims) {
          for (double sigma2 : cfg.grid) {
            LpmSpec truth;
            truth.kernel = LatentKernel::euclidean;
            truth.n = n;
            truth.theta = cfg.theta1;
            truth.dim = dim;
            truth.sigma2 = sigma2;
            LpmSpec other = truth;
            other.kernel = LatentKernel::bilinear;
            const std::vector<Candidate> candidates{{"euclidean", truth}, {"bilinear", other}};
            const auto counts =
                selection_counts(truth, candidates, cfg.R, opt, {cfg.algorithm}, next_seed(), cfg.threads);
            push(make_rate(counts[0][0], cfg.R), n, "sigma2=" + fmt(sigma2) + " dim=" + std::to_string(dim),
                 to_string(cfg.algorithm), "n=" + std::to_string(n) + " dim=" + std::to_string(dim), sigma2);
          }
        }
      }
      break;
    }
  }
  return table;
}

void write_study_csv(std::ostream& out, const std::vector<RateEstimate>& table) {
  out << "study,setting,n,classifier,successes,trials,rate,ci_low,ci_high\n";
  char buf[96];
  for (const auto& r : table) {
    if (r.setting.find_first_of(",\"\n") != std::string::npos)
      throw ConfigError("setting '" + r.setting + "' cannot be written to CSV");
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f", r.rate, r.ci_low, r.ci_high);
    out << r.study << ',' << r.setting << ',' << r.n << ',' << r.classifier << ',' << r.successes << ','
        << r.trials << ',' << buf << '\n';
  }
}

void emit_outputs(const std::vector<RateEstimate>& table, const std::string& csv_path, const std::string& svg_path) {
  if (table.empty()) throw ConfigError("refusing to write an empty study table");
  std::ostringstream csv;
  write_study_csv(csv, table);
  const std::string svg = render_study_svg(table, "Study " + std::to_string(table.front().study));
  write_file_atomic(csv_path, csv.str());
  write_file_atomic(svg_path, svg);
}

}  // namespace specsel
