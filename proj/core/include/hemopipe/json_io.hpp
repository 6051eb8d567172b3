#pragma once

#include <string>

#include "hemopipe/forest.hpp"
#include "hemopipe/simulator.hpp"
#include "hemopipe/types.hpp"

namespace hemopipe::io {

// Simulator configuration as JSON. Every key is optional and falls back to
// the built-in default, so "{}" is a valid config. Parsers throw SchemaError
// on malformed JSON or unknown enum strings and re-validate the result.
sim::SimConfig parse_sim_config(const std::string& json_text);
sim::SimConfig load_sim_config(const std::string& path);
std::string sim_config_to_json(const sim::SimConfig& config);

// Session plan as a JSON array of {"label": 0|1|2, "duration_s": seconds},
// either bare or under a "plan" key.
SessionPlan parse_plan(const std::string& json_text);
SessionPlan load_plan(const std::string& path);
std::string plan_to_json(const SessionPlan& plan);

// Forest hyperparameters as a JSON object with optional keys n_trees,
// max_depth, min_leaf_size, features_per_split.
forest::ForestParams parse_forest_params(const std::string& json_text);
forest::ForestParams load_forest_params(const std::string& path);
std::string forest_params_to_json(const forest::ForestParams& params);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hemopipe::io
