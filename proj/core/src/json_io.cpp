#include "hemopipe/json_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hemopipe/errors.hpp"

namespace hemopipe::io {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string(what) + " JSON parse failure: " +
                          e.what());
    }
}

SessionPlan plan_from_json(const json& arr) {
    SessionPlan plan;
    for (const auto& seg : arr) {
        const int label = seg.at("label").get<int>();
        if (label < 0 || label >= kNumClasses) {
            throw SchemaError("plan label out of range");
        }
        SessionPlan::Segment segment;
        segment.label = static_cast<Label>(label);
        segment.duration_s = seg.at("duration_s").get<double>();
        plan.segments.push_back(segment);
    }
    plan.validate();
    return plan;
}

json plan_to_json_value(const SessionPlan& plan) {
    json arr = json::array();
    for (const auto& seg : plan.segments) {
        arr.push_back(json{{"label", static_cast<int>(seg.label)},
                           {"duration_s", seg.duration_s}});
    }
    return arr;
}

sim::DriftMode drift_mode_from_string(const std::string& name) {
    if (name == "none") return sim::DriftMode::None;
    if (name == "linear") return sim::DriftMode::Linear;
    if (name == "exponential") return sim::DriftMode::Exponential;
    throw SchemaError("unknown drift mode: " + name);
}

const char* drift_mode_to_string(sim::DriftMode mode) {
    switch (mode) {
        case sim::DriftMode::Linear:
            return "linear";
        case sim::DriftMode::Exponential:
            return "exponential";
        case sim::DriftMode::None:
        default:
            return "none";
    }
}

forest::ForestParams forest_params_from_json(const json& doc) {
    forest::ForestParams params;
    params.n_trees = doc.value("n_trees", params.n_trees);
    params.max_depth = doc.value("max_depth", params.max_depth);
    params.min_leaf_size = doc.value("min_leaf_size", params.min_leaf_size);
    params.features_per_split =
        doc.value("features_per_split", params.features_per_split);
    params.validate();
    return params;
}

}  // namespace

sim::SimConfig parse_sim_config(const std::string& json_text) {
    const json doc = parse_json(json_text, "sim config");
    try {
        sim::SimConfig config;
        if (doc.contains("plan")) config.plan = plan_from_json(doc.at("plan"));
        if (doc.contains("extinction")) {
            const auto& e = doc.at("extinction");
            config.table.eps_hbo2_l1 =
                e.value("eps_hbo2_l1", config.table.eps_hbo2_l1);
            config.table.eps_hb_l1 = e.value("eps_hb_l1", config.table.eps_hb_l1);
            config.table.eps_hbo2_l2 =
                e.value("eps_hbo2_l2", config.table.eps_hbo2_l2);
            config.table.eps_hb_l2 = e.value("eps_hb_l2", config.table.eps_hb_l2);
            config.table.path_length_cm =
                e.value("path_length_cm", config.table.path_length_cm);
        }
        if (doc.contains("baseline")) {
            const auto& b = doc.at("baseline");
            config.baseline_x = b.value("x", config.baseline_x);
            config.baseline_y = b.value("y", config.baseline_y);
            config.baseline_z = b.value("z", config.baseline_z);
            config.baseline_ir1 = b.value("ir1", config.baseline_ir1);
            config.baseline_ir2 = b.value("ir2", config.baseline_ir2);
        }
        if (doc.contains("state_targets")) {
            const auto& t = doc.at("state_targets");
            auto read_target = [&](const char* key, sim::StateTarget& target) {
                if (!t.contains(key)) return;
                const auto& pair = t.at(key);
                if (!pair.is_array() || pair.size() != 2) {
                    throw SchemaError(
                        "state target must be [d_chbo2, d_chb]");
                }
                target.d_chbo2 = pair[0].get<double>();
                target.d_chb = pair[1].get<double>();
            };
            read_target("rest", config.target_rest);
            read_target("low_load", config.target_low);
            read_target("high_load", config.target_high);
        }
        config.transition_tau_s =
            doc.value("transition_tau_s", config.transition_tau_s);
        if (doc.contains("drift")) {
            const auto& d = doc.at("drift");
            if (d.contains("mode")) {
                config.drift.mode =
                    drift_mode_from_string(d.at("mode").get<std::string>());
            }
            config.drift.rate_per_hour =
                d.value("rate_per_hour", config.drift.rate_per_hour);
            config.drift.channel_independent = d.value(
                "channel_independent", config.drift.channel_independent);
        }
        config.noise_sigma = doc.value("noise_sigma", config.noise_sigma);
        config.seed = doc.value("seed", config.seed);
        config.validate();
        return config;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("sim config schema failure: ") +
                          e.what());
    }
}

sim::SimConfig load_sim_config(const std::string& path) {
    return parse_sim_config(read_text_file(path));
}

std::string sim_config_to_json(const sim::SimConfig& config) {
    json doc;
    doc["plan"] = plan_to_json_value(config.plan);
    doc["extinction"] = json{{"eps_hbo2_l1", config.table.eps_hbo2_l1},
                             {"eps_hb_l1", config.table.eps_hb_l1},
                             {"eps_hbo2_l2", config.table.eps_hbo2_l2},
                             {"eps_hb_l2", config.table.eps_hb_l2},
                             {"path_length_cm", config.table.path_length_cm}};
    doc["baseline"] = json{{"x", config.baseline_x},
                           {"y", config.baseline_y},
                           {"z", config.baseline_z},
                           {"ir1", config.baseline_ir1},
                           {"ir2", config.baseline_ir2}};
    doc["state_targets"] =
        json{{"rest", {config.target_rest.d_chbo2, config.target_rest.d_chb}},
             {"low_load",
              {config.target_low.d_chbo2, config.target_low.d_chb}},
             {"high_load",
              {config.target_high.d_chbo2, config.target_high.d_chb}}};
    doc["transition_tau_s"] = config.transition_tau_s;
    doc["drift"] = json{{"mode", drift_mode_to_string(config.drift.mode)},
                        {"rate_per_hour", config.drift.rate_per_hour},
                        {"channel_independent",
                         config.drift.channel_independent}};
    doc["noise_sigma"] = config.noise_sigma;
    doc["seed"] = config.seed;
    return doc.dump(2);
}

SessionPlan parse_plan(const std::string& json_text) {
    const json doc = parse_json(json_text, "plan");
    try {
        if (doc.is_array()) return plan_from_json(doc);
        return plan_from_json(doc.at("plan"));
    } catch (const json::exception& e) {
        throw SchemaError(std::string("plan schema failure: ") + e.what());
    }
}

SessionPlan load_plan(const std::string& path) {
    return parse_plan(read_text_file(path));
}

std::string plan_to_json(const SessionPlan& plan) {
    return plan_to_json_value(plan).dump(2);
}

forest::ForestParams parse_forest_params(const std::string& json_text) {
    const json doc = parse_json(json_text, "forest params");
    try {
        return forest_params_from_json(doc);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("forest params schema failure: ") +
                          e.what());
    }
}

forest::ForestParams load_forest_params(const std::string& path) {
    return parse_forest_params(read_text_file(path));
}

std::string forest_params_to_json(const forest::ForestParams& params) {
    return json{{"n_trees", params.n_trees},
                {"max_depth", params.max_depth},
                {"min_leaf_size", params.min_leaf_size},
                {"features_per_split", params.features_per_split}}
        .dump(2);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading: " + path);
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("failed writing: " + path);
}

}  // namespace hemopipe::io
