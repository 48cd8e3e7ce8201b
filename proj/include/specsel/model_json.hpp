#pragma once

#include <json.hpp>
#include <string>

#include "specsel/models.hpp"

namespace specsel {

/// ModelSpec JSON schema, one object per family:
///
///   {"family": "bernoulli", "n": 50, "theta1": -2.5}      (or "p": 0.1 instead of theta1)
///   {"family": "sbm", "n": 100, "prob_matrix": [[0.3, 0.01], [0.01, 0.3]],
///    "block_assignment": [0, 0, ..., 1]}                   (or "block_probs": [0.5, 0.5])
///   {"family": "lpm_euclidean" | "lpm_bilinear", "n": 100, "theta": -2.5, "dim": 2, "sigma2": 1.0}
///   {"family": "gwesp_ergm", "n": 75, "theta1": -2.5, "theta2": 0.3, "theta3": 1.0,
///    "weight_variant": "standard" | "paper_literal",
///    "mcmc": {"burn_in": 55500, "thin": 13875, "stream": 0}}
///   {"family": "directed_dyad", "n": 100, "theta1": -2.5, "theta2": 1.0}
///
/// Unknown keys are rejected. Optional keys: sigma2 (default 1), weight_variant
/// (default standard), mcmc and each of its members.
ModelSpec parse_model_spec(const nlohmann::json& j);

// Inverse of parse_model_spec with a fixed key order.
nlohmann::ordered_json to_json(const ModelSpec& spec);

// Compact dump of to_json(spec); equal specs give equal strings.
std::string canonical_key(const ModelSpec& spec);

}  // namespace specsel
