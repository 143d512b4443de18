#pragma once

#include <json.hpp>

#include "chd/datasetgen.hpp"
#include "chd/evaluation.hpp"
#include "chd/pipeline.hpp"

namespace chd {

// Config keys: method, K, lambda_s, theta_conf, features, rng_seed,
// permutations, min_length. Missing keys keep their defaults; unknown keys
// are rejected.
DetectorConfig config_from_json(const nlohmann::json& j, const DetectorConfig& defaults = {});
nlohmann::json to_json(const DetectorConfig& config);

std::vector<FeatureId> features_from_json(const nlohmann::json& j);
nlohmann::json features_to_json(std::span<const FeatureId> features);

// One JSON Lines record: account_id, outcome, change_index?, per_pivot_summary
// (and the full per_pivot list when `verbose`).
nlohmann::json to_json(const DetectionResult& result, bool verbose = false);

nlohmann::json to_json(const EvalReport& report, bool per_account = false);
nlohmann::json to_json(const MeanReport& report);
nlohmann::json to_json(const ProtocolReport& report);
nlohmann::json to_json(const PreselectResult& result);
nlohmann::json to_json(const SizeStats& stats);
nlohmann::json to_json(const DatasetReport& report);

}  // namespace chd
