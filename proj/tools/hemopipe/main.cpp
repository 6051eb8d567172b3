#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hemopipe/beer_lambert.hpp"
#include "hemopipe/csv_io.hpp"
#include "hemopipe/errors.hpp"
#include "hemopipe/forest.hpp"
#include "hemopipe/json_io.hpp"
#include "hemopipe/pipeline.hpp"
#include "hemopipe/simulator.hpp"
#include "hemopipe/types.hpp"
#include "hemopipe/wire.hpp"

namespace {

using nlohmann::json;

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hemopipe::IoError("cannot open for reading: " + path);
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::string& path,
                       const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hemopipe::IoError("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw hemopipe::IoError("failed writing: " + path);
}

// HEMOPIPE_SEED overrides --seed wherever a seed applies.
std::optional<std::uint64_t> env_seed() {
    const char* value = std::getenv("HEMOPIPE_SEED");
    if (value == nullptr || *value == '\0') return std::nullopt;
    std::uint64_t out = 0;
    const char* end = value + std::strlen(value);
    const auto result = std::from_chars(value, end, out);
    if (result.ec != std::errc() || result.ptr != end) {
        throw hemopipe::ParameterError(
            "HEMOPIPE_SEED must be an unsigned 64-bit integer");
    }
    return out;
}

json gaps_to_json(const hemopipe::wire::DecodeResult& decoded) {
    json gaps = json::array();
    for (const auto& gap : decoded.gaps) {
        gaps.push_back(json{{"after_seq", gap.after_seq},
                            {"missing", gap.missing}});
    }
    return gaps;
}

hemopipe::pipeline::DriftCorrection drift_choice(const std::string& name) {
    if (name == "auto") return hemopipe::pipeline::DriftCorrection::Auto;
    if (name == "on") return hemopipe::pipeline::DriftCorrection::On;
    if (name == "off") return hemopipe::pipeline::DriftCorrection::Off;
    throw hemopipe::ParameterError("unknown drift mode: " + name);
}

int cmd_simulate(const std::string& config_path, const std::string& out_path,
                 const std::string& csv_path,
                 std::optional<std::uint64_t> seed) {
    hemopipe::sim::SimConfig config = hemopipe::io::load_sim_config(config_path);
    if (seed) config.seed = *seed;
    if (const auto env = env_seed()) config.seed = *env;

    const hemopipe::sim::SimResult result = hemopipe::sim::simulate(config);
    write_binary_file(out_path, hemopipe::wire::encode_stream(result.frames));
    if (!csv_path.empty()) {
        hemopipe::io::write_raw_csv(csv_path, result.frames);
    }

    std::size_t white = 0;
    for (const auto& f : result.frames) {
        if (f.led == hemopipe::Led::White) ++white;
    }
    std::cout << json{{"command", "simulate"},
                      {"seed", config.seed},
                      {"frames", result.frames.size()},
                      {"white_frames", white},
                      {"nir_frames", result.frames.size() - white},
                      {"out", out_path}}
                     .dump()
              << '\n';
    return 0;
}

int cmd_process(const std::string& in_path, const std::string& eps_path,
                const std::string& out_path, const std::string& drift,
                bool no_lowpass, double cutoff_hz,
                const std::string& log_base) {
    const hemopipe::ExtinctionTable table =
        eps_path.empty() ? hemopipe::default_extinction_table()
                         : hemopipe::beer::load_extinction_table(eps_path);

    const auto bytes = read_binary_file(in_path);
    const hemopipe::wire::DecodeResult decoded =
        hemopipe::wire::decode_stream(bytes);

    hemopipe::pipeline::ProcessOptions options;
    options.drift = drift_choice(drift);
    options.apply_lowpass = !no_lowpass;
    options.cutoff_hz = cutoff_hz;
    if (log_base == "natural") {
        options.log_base = hemopipe::beer::LogBase::Natural;
    } else if (log_base != "decadic") {
        throw hemopipe::ParameterError("unknown log base: " + log_base);
    }

    const hemopipe::pipeline::ProcessResult processed =
        hemopipe::pipeline::process_frames(decoded.frames, table, options);
    hemopipe::io::write_hemo_csv(out_path, processed.series);

    std::cout << json{{"command", "process"},
                      {"frames_decoded", decoded.frames.size()},
                      {"bytes_skipped", decoded.bytes_skipped},
                      {"gaps", gaps_to_json(decoded)},
                      {"drift_applied", processed.drift_applied},
                      {"samples", processed.series.size()},
                      {"out", out_path}}
                     .dump()
              << '\n';
    return 0;
}

int cmd_windows(const std::string& in_path, const std::string& plan_path,
                const std::string& out_path, std::size_t window_size,
                std::size_t step, const std::string& subject_id) {
    const hemopipe::dsp::FourChannelSeries series =
        hemopipe::io::read_hemo_csv(in_path);
    const hemopipe::SessionPlan plan = plan_path.empty()
                                           ? hemopipe::default_plan()
                                           : hemopipe::io::load_plan(plan_path);
    const auto windows = hemopipe::dsp::segment(series, plan, window_size, step);
    const auto dataset = hemopipe::features::build_dataset(windows, subject_id);
    hemopipe::io::write_features_csv(out_path, dataset);

    std::cout << json{{"command", "windows"},
                      {"windows", dataset.size()},
                      {"out", out_path}}
                     .dump()
              << '\n';
    return 0;
}

int cmd_train(const std::string& in_path, const std::string& params_path,
              std::uint64_t seed, const std::string& model_path) {
    const auto dataset = hemopipe::io::read_features_csv(in_path);
    const hemopipe::forest::ForestParams params =
        params_path.empty() ? hemopipe::forest::ForestParams{}
                            : hemopipe::io::load_forest_params(params_path);
    if (const auto env = env_seed()) seed = *env;

    const hemopipe::forest::ForestModel model =
        hemopipe::forest::train(dataset, params, seed);
    hemopipe::forest::save_model(model, model_path);

    json classes = json::array();
    for (const auto label : model.class_labels) {
        classes.push_back(static_cast<int>(label));
    }
    std::cout << json{{"command", "train"},
                      {"rows", dataset.size()},
                      {"seed", seed},
                      {"classes", classes},
                      {"oob_accuracy", model.oob_accuracy},
                      {"model", model_path}}
                     .dump()
              << '\n';
    return 0;
}

int cmd_evaluate(const std::string& in_path, const std::string& model_path,
                 const std::string& cv_mode, int k,
                 const std::string& report_path) {
    const auto dataset = hemopipe::io::read_features_csv(in_path);
    const hemopipe::forest::ForestModel model =
        hemopipe::forest::load_model(model_path);
    if (!dataset.empty() && dataset.front().names != model.feature_names) {
        throw hemopipe::SchemaError(
            "features file does not match the model's feature names");
    }

    // Fold models are retrained with the loaded model's hyperparameters and
    // seed; the loaded model itself is scored on the full dataset.
    const hemopipe::forest::CvMode mode =
        hemopipe::forest::cv_mode_from_string(cv_mode);
    const hemopipe::forest::CvResult cv = hemopipe::forest::cross_validate(
        dataset, model.params, model.seed, k, mode);

    std::size_t correct = 0;
    for (const auto& row : dataset) {
        if (hemopipe::forest::predict(model, row).label == row.label) {
            ++correct;
        }
    }
    const double full_accuracy =
        dataset.empty() ? 0.0
                        : static_cast<double>(correct) /
                              static_cast<double>(dataset.size());

    json confusion = json::array();
    for (const auto& row : cv.mean_confusion) confusion.push_back(row);
    const json report{{"format", "hemopipe-evaluation"},
                      {"version", 1},
                      {"rows", dataset.size()},
                      {"cv_mode", hemopipe::forest::to_string(cv.mode)},
                      {"k_folds", k},
                      {"fold_accuracies", cv.fold_accuracies},
                      {"mean_accuracy", cv.mean_accuracy()},
                      {"confusion", confusion},
                      {"model_full_dataset_accuracy", full_accuracy},
                      {"model_oob_accuracy", model.oob_accuracy}};
    if (!report_path.empty()) {
        hemopipe::io::write_text_file(report_path, report.dump(2) + "\n");
    }
    std::cout << report.dump() << '\n';
    return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& params_path,
                 std::uint64_t seed, int subjects, int folds,
                 const std::string& report_path,
                 const std::string& model_path) {
    hemopipe::pipeline::PipelineConfig config =
        hemopipe::pipeline::default_pipeline_config();
    if (!config_path.empty()) {
        config.sim = hemopipe::io::load_sim_config(config_path);
    }
    if (!params_path.empty()) {
        config.params = hemopipe::io::load_forest_params(params_path);
    }
    config.seed = seed;
    if (const auto env = env_seed()) config.seed = *env;
    config.n_subjects = subjects;
    config.k_folds = folds;

    const hemopipe::pipeline::PipelineResult result =
        hemopipe::pipeline::run_pipeline(config);
    hemopipe::io::write_text_file(report_path,
                                  hemopipe::pipeline::report_to_json(result));
    hemopipe::forest::save_model(result.model, model_path);

    std::cout << json{{"command", "pipeline"},
                      {"seed", config.seed},
                      {"subjects", config.n_subjects},
                      {"stratified_mean_accuracy",
                       result.stratified_mean_accuracy},
                      {"blocked_mean_accuracy", result.blocked_mean_accuracy},
                      {"report", report_path},
                      {"model", model_path}}
                     .dump()
              << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "hemopipe: optical cognitive-load sensing toolchain "
        "(simulator, Beer-Lambert processing, windowed features, "
        "random-forest evaluation)"};
    app.require_subcommand(1);
    app.footer("HEMOPIPE_SEED overrides --seed for simulate, train and "
               "pipeline.");

    std::string config_path;
    std::string in_path;
    std::string out_path;
    std::string csv_path;
    std::string eps_path;
    std::string plan_path;
    std::string params_path;
    std::string model_path = "model.json";
    std::string report_path = "report.json";
    std::string drift = "auto";
    std::string log_base = "decadic";
    std::string cv_mode = "stratified";
    std::string subject_id = "subject_01";
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool no_lowpass = false;
    double cutoff_hz = 0.1;
    std::size_t window_size = 70;
    std::size_t step = 35;
    int k_folds = 5;
    int n_subjects = 12;

    auto* simulate = app.add_subcommand(
        "simulate", "Generate a raw sensor stream from a config");
    simulate->add_option("--config", config_path, "Simulator config JSON")
        ->required();
    simulate->add_option("--out", out_path, "Output wire-format binary")
        ->required();
    simulate->add_option("--csv", csv_path, "Optional raw CSV mirror");
    simulate->add_option("--seed", seed, "Override the config seed")
        ->each([&](const std::string&) { seed_given = true; });

    auto* process = app.add_subcommand(
        "process",
        "Decode a raw stream, drift-correct, solve concentrations, low-pass");
    process->add_option("--in", in_path, "Input wire-format binary")
        ->required();
    process->add_option("--eps", eps_path,
                        "Extinction table (key=value file); default built-in");
    process->add_option("--out", out_path, "Output hemo CSV")->required();
    process->add_option("--drift", drift, "Drift correction: auto|on|off")
        ->default_val("auto");
    process->add_flag("--no-lowpass", no_lowpass, "Skip the zero-phase filter");
    process->add_option("--cutoff", cutoff_hz, "Low-pass cutoff in Hz")
        ->default_val(0.1);
    process->add_option("--log-base", log_base,
                        "Optical density log: decadic|natural")
        ->default_val("decadic");

    auto* windows = app.add_subcommand(
        "windows", "Slice a hemo series into labelled feature windows");
    windows->add_option("--in", in_path, "Input hemo CSV")->required();
    windows->add_option("--plan", plan_path,
                        "Session plan JSON; default built-in plan");
    windows->add_option("--out", out_path, "Output features CSV")->required();
    windows->add_option("--window", window_size, "Window size in frames")
        ->default_val(70);
    windows->add_option("--step", step, "Step size in frames")->default_val(35);
    windows->add_option("--subject", subject_id, "Subject id column value")
        ->default_val("subject_01");

    auto* train =
        app.add_subcommand("train", "Train a random forest on features");
    train->add_option("--in", in_path, "Input features CSV")->required();
    train->add_option("--params", params_path,
                      "Forest hyperparameter JSON; default built-in");
    train->add_option("--seed", seed, "Training seed")->default_val(0);
    train->add_option("--model", model_path, "Output model JSON")->required();

    auto* evaluate = app.add_subcommand(
        "evaluate", "Cross-validate features with a model's hyperparameters");
    evaluate->add_option("--in", in_path, "Input features CSV")->required();
    evaluate->add_option("--model", model_path, "Model JSON")->required();
    evaluate->add_option("--cv", cv_mode, "Fold mode: stratified|blocked")
        ->default_val("stratified");
    evaluate->add_option("-k,--folds", k_folds, "Fold count")->default_val(5);
    evaluate->add_option("--report", report_path, "Optional report JSON path")
        ->default_val("");

    auto* pipeline = app.add_subcommand(
        "pipeline",
        "End-to-end run: simulate subjects, process, window, cross-validate");
    pipeline->add_option("--config", config_path,
                         "Simulator config JSON; default: default plan with "
                         "1% noise and 5%/h linear drift");
    pipeline->add_option("--params", params_path,
                         "Forest hyperparameter JSON; default built-in");
    pipeline->add_option("--seed", seed, "Base seed (subject i uses seed+i)")
        ->default_val(42);
    pipeline->add_option("--subjects", n_subjects, "Synthetic subject count")
        ->default_val(12);
    pipeline->add_option("--folds", k_folds, "Cross-validation fold count")
        ->default_val(5);
    pipeline->add_option("--report", report_path, "Output report JSON")
        ->default_val("report.json");
    pipeline->add_option("--model", model_path, "Output model JSON")
        ->default_val("model.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(config_path, out_path, csv_path,
                                seed_given ? std::optional<std::uint64_t>(seed)
                                           : std::nullopt);
        }
        if (process->parsed()) {
            return cmd_process(in_path, eps_path, out_path, drift, no_lowpass,
                               cutoff_hz, log_base);
        }
        if (windows->parsed()) {
            return cmd_windows(in_path, plan_path, out_path, window_size, step,
                               subject_id);
        }
        if (train->parsed()) {
            return cmd_train(in_path, params_path, seed, model_path);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(in_path, model_path, cv_mode, k_folds,
                                report_path);
        }
        if (pipeline->parsed()) {
            return cmd_pipeline(config_path, params_path, seed, n_subjects,
                                k_folds, report_path, model_path);
        }
    } catch (const hemopipe::Error& e) {
        std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump()
                  << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump()
                  << '\n';
        return 2;
    }
    return 0;
}
