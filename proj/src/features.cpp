#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "specsel/classify.hpp"
#include "specsel/error.hpp"

namespace specsel {

std::string to_string(EngineeredFeature f) {
  switch (f) {
    case EngineeredFeature::sum: return "sum";
    case EngineeredFeature::lambda2: return "lambda2";
    case EngineeredFeature::zero_count: return "zero_count";
    case EngineeredFeature::quantiles: return "quantiles";
    case EngineeredFeature::max: return "max";
  }
  return "?";
}

EngineeredFeature parse_engineered_feature(const std::string& name) {
  for (auto f : {EngineeredFeature::sum, EngineeredFeature::lambda2, EngineeredFeature::zero_count,
                 EngineeredFeature::quantiles, EngineeredFeature::max})
    if (to_string(f) == name) return f;
  throw ConfigError("unknown engineered feature '" + name + "'");
}

void validate(const FeatureConfig& cfg) {
  if (!cfg.use_raw_spectrum && cfg.engineered.empty()) throw ConfigError("feature config enables no features");
}

std::vector<std::string> feature_names(std::size_t spectrum_length, const FeatureConfig& cfg) {
  std::vector<std::string> names;
  if (cfg.use_raw_spectrum)
    for (std::size_t i = 1; i <= spectrum_length; ++i) names.push_back("lambda_" + std::to_string(i));
  for (auto f : cfg.engineered) {
    if (f == EngineeredFeature::quantiles) {
      char buf[8];
      for (int q = 0; q <= 100; q += 10) {
        std::snprintf(buf, sizeof buf, "q%02d", q);
        names.emplace_back(buf);
      }
    } else {
      names.push_back(to_string(f));
    }
  }
  return names;
}

std::vector<double> feature_row(const Spectrum& s, const FeatureConfig& cfg) {
  validate(cfg);
  const auto& lam = s.lambda;
  const std::size_t n = lam.size();
  std::vector<double> row;
  if (cfg.use_raw_spectrum) row = lam;
  for (auto f : cfg.engineered) {
    switch (f) {
      case EngineeredFeature::sum:
        row.push_back(std::accumulate(lam.begin(), lam.end(), 0.0));
        break;
      case EngineeredFeature::lambda2:
        row.push_back(n >= 2 ? lam[1] : 0.0);
        break;
      case EngineeredFeature::zero_count:
        row.push_back(static_cast<double>(zero_multiplicity(s)));
        break;
      case EngineeredFeature::quantiles:
        for (int q = 0; q <= 10; ++q) {
          if (n == 0) {
            row.push_back(0.0);
            continue;
          }
          const double pos = static_cast<double>(q) / 10.0 * static_cast<double>(n - 1);
          const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
          const std::size_t hi = std::min(lo + 1, n - 1);
          const double frac = pos - static_cast<double>(lo);
          row.push_back(lam[lo] + frac * (lam[hi] - lam[lo]));
        }
        break;
      case EngineeredFeature::max:
        row.push_back(s.max());
        break;
    }
  }
  return row;
}

DesignMatrix::DesignMatrix(std::size_t width, std::vector<double> values, std::vector<std::size_t> labels,
                           std::vector<std::string> feature_names)
    : width_(width), values_(std::move(values)), labels_(std::move(labels)), names_(std::move(feature_names)) {
  if (labels_.empty()) throw ConfigError("design matrix has no rows");
  if (width_ == 0) throw ConfigError("design matrix has zero width");
  if (values_.size() != labels_.size() * width_) throw ConfigError("design matrix rows have inconsistent width");
  if (!names_.empty() && names_.size() != width_) throw ConfigError("feature name count does not match width");
  for (double v : values_)
    if (!std::isfinite(v)) throw ConfigError("design matrix contains a non-finite value");
  classes_ = *std::max_element(labels_.begin(), labels_.end()) + 1;
  std::vector<std::size_t> per_class(classes_, 0);
  for (std::size_t l : labels_) ++per_class[l];
  for (std::size_t c : per_class)
    if (c != per_class.front() || c == 0)
      throw ConfigError("design matrix classes must all have the same number of rows");
}

bool DesignMatrix::degenerate() const {
  for (std::size_t i = 1; i < rows(); ++i)
    if (!std::equal(row(i).begin(), row(i).end(), row(0).begin())) return false;
  return true;
}

DesignMatrix build_features(std::span<const LabeledSpectrum> spectra, const FeatureConfig& cfg) {
  validate(cfg);
  if (spectra.empty()) throw ConfigError("no spectra to build features from");
  const std::size_t n = spectra.front().spectrum.size();
  std::vector<double> values;
  std::vector<std::size_t> labels;
  std::size_t width = 0;
  for (const auto& ls : spectra) {
    if (ls.spectrum.size() != n) throw ConfigError("spectra have different lengths");
    const auto row = feature_row(ls.spectrum, cfg);
    width = row.size();
    values.insert(values.end(), row.begin(), row.end());
    labels.push_back(ls.label);
  }
  return DesignMatrix(width, std::move(values), std::move(labels), feature_names(n, cfg));
}

}  // namespace specsel
