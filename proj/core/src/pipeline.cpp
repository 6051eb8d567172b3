#include "hemopipe/pipeline.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "hemopipe/errors.hpp"
#include "hemopipe/wire.hpp"

namespace hemopipe::pipeline {

namespace {

using nlohmann::json;

// Relative variance below which the white reference is treated as
// information-free in Auto mode.
constexpr double kDriftBypassRelVar = 1e-12;

json cv_to_json(const forest::CvResult& cv) {
    json confusion = json::array();
    for (const auto& row : cv.mean_confusion) confusion.push_back(row);
    return json{{"mode", forest::to_string(cv.mode)},
                {"fold_accuracies", cv.fold_accuracies},
                {"mean_accuracy", cv.mean_accuracy()},
                {"confusion", std::move(confusion)}};
}

}  // namespace

ProcessResult process_frames(const std::vector<SensorFrame>& frames,
                             const ExtinctionTable& table,
                             const ProcessOptions& options) {
    table.validate(options.singularity_tolerance);

    std::vector<double> white_t;
    std::vector<double> white_y;
    std::vector<double> nir_t;
    std::vector<double> ir1;
    std::vector<double> ir2;
    for (const auto& frame : frames) {
        validate_frame(frame);
        if (frame.led == Led::White) {
            white_t.push_back(frame.t);
            white_y.push_back(frame.y);
        } else {
            nir_t.push_back(frame.t);
            ir1.push_back(frame.ir1);
            ir2.push_back(frame.ir2);
        }
    }
    if (nir_t.empty()) {
        throw InsufficientDataError("no NIR frames to process");
    }

    ProcessResult result;

    bool want_drift = options.drift != DriftCorrection::Off;
    if (options.drift == DriftCorrection::Auto) {
        if (white_t.size() < 2) {
            want_drift = false;
        } else {
            double mean = 0.0;
            for (const double v : white_y) mean += v;
            mean /= static_cast<double>(white_y.size());
            double var = 0.0;
            for (const double v : white_y) var += (v - mean) * (v - mean);
            var /= static_cast<double>(white_y.size());
            if (var <= kDriftBypassRelVar * mean * mean) want_drift = false;
        }
    }

    if (want_drift) {
        const std::vector<double> y_interp =
            drift::interpolate_y(white_t, white_y, nir_t);
        const drift::DriftFit fit1 =
            drift::fit_drift(y_interp, ir1, drift::Channel::IR1);
        const drift::DriftFit fit2 =
            drift::fit_drift(y_interp, ir2, drift::Channel::IR2);
        ir1 = drift::remove_drift(y_interp, ir1, fit1);
        ir2 = drift::remove_drift(y_interp, ir2, fit2);
        result.fits = {fit1, fit2};
        result.drift_applied = true;
    }

    dsp::FourChannelSeries series;
    series.times = nir_t;
    series.ir1 = ir1;
    series.ir2 = ir2;
    series.sample_rate_hz = options.sample_rate_hz;
    series.d_chbo2.reserve(nir_t.size());
    series.d_chb.reserve(nir_t.size());
    const double base1 = ir1.front();
    const double base2 = ir2.front();
    for (std::size_t i = 0; i < nir_t.size(); ++i) {
        const double dd1 =
            beer::optical_density_delta(base1, ir1[i], options.log_base);
        const double dd2 =
            beer::optical_density_delta(base2, ir2[i], options.log_base);
        const beer::ConcentrationPair dc = beer::invert_concentrations(
            dd1, dd2, table, options.singularity_tolerance);
        series.d_chbo2.push_back(dc.d_chbo2);
        series.d_chb.push_back(dc.d_chb);
    }

    if (options.apply_lowpass) {
        series = dsp::lowpass(series, options.cutoff_hz);
    }
    result.series = std::move(series);
    return result;
}

void PipelineConfig::validate() const {
    sim.validate();
    params.validate();
    if (n_subjects < 1) throw ParameterError("n_subjects must be >= 1");
    if (k_folds < 2) throw ParameterError("k_folds must be >= 2");
}

PipelineConfig default_pipeline_config() {
    PipelineConfig config;
    config.sim.noise_sigma = 300.0;  // 1% of the 30000-count baselines
    config.sim.drift.mode = sim::DriftMode::Linear;
    config.sim.drift.rate_per_hour = 0.05;
    return config;
}

std::vector<features::FeatureVector> run_subject(const sim::SimConfig& config,
                                                 const std::string& subject_id,
                                                 const ProcessOptions& options) {
    const sim::SimResult sim_result = sim::simulate(config);
    const std::vector<std::uint8_t> bytes =
        wire::encode_stream(sim_result.frames);
    const wire::DecodeResult decoded = wire::decode_stream(bytes);
    const ProcessResult processed =
        process_frames(decoded.frames, config.table, options);
    const std::vector<dsp::Window> windows =
        dsp::segment(processed.series, config.plan);
    return features::build_dataset(windows, subject_id);
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    config.validate();
    PipelineResult result;
    result.config = config;

    std::vector<features::FeatureVector> all_rows;
    double stratified_sum = 0.0;
    double blocked_sum = 0.0;
    for (int i = 0; i < config.n_subjects; ++i) {
        char id[32];
        std::snprintf(id, sizeof(id), "subject_%02d", i + 1);

        sim::SimConfig subject_config = config.sim;
        subject_config.seed = config.seed + static_cast<std::uint64_t>(i);

        SubjectRun run;
        run.subject_id = id;
        run.seed = subject_config.seed;
        const std::vector<features::FeatureVector> dataset =
            run_subject(subject_config, run.subject_id, config.process);
        run.n_windows = dataset.size();
        run.stratified = forest::cross_validate(
            dataset, config.params, subject_config.seed, config.k_folds,
            forest::CvMode::StratifiedShuffled);
        run.blocked = forest::cross_validate(dataset, config.params,
                                             subject_config.seed,
                                             config.k_folds,
                                             forest::CvMode::Blocked);
        stratified_sum += run.stratified.mean_accuracy();
        blocked_sum += run.blocked.mean_accuracy();
        result.subjects.push_back(std::move(run));
        all_rows.insert(all_rows.end(), dataset.begin(), dataset.end());
    }
    result.stratified_mean_accuracy =
        stratified_sum / static_cast<double>(config.n_subjects);
    result.blocked_mean_accuracy =
        blocked_sum / static_cast<double>(config.n_subjects);
    result.model = forest::train(all_rows, config.params, config.seed);
    return result;
}

std::string report_to_json(const PipelineResult& result) {
    json doc;
    doc["format"] = "hemopipe-report";
    doc["version"] = 1;
    doc["seed"] = result.config.seed;
    doc["n_subjects"] = result.config.n_subjects;
    doc["k_folds"] = result.config.k_folds;
    doc["params"] = json{{"n_trees", result.config.params.n_trees},
                         {"max_depth", result.config.params.max_depth},
                         {"min_leaf_size", result.config.params.min_leaf_size},
                         {"features_per_split",
                          result.config.params.features_per_split}};
    doc["sim"] = json{
        {"noise_sigma", result.config.sim.noise_sigma},
        {"drift_mode", static_cast<int>(result.config.sim.drift.mode)},
        {"drift_rate_per_hour", result.config.sim.drift.rate_per_hour},
        {"transition_tau_s", result.config.sim.transition_tau_s},
        {"plan_duration_s", result.config.sim.plan.total_duration()}};
    json subjects = json::array();
    for (const auto& run : result.subjects) {
        subjects.push_back(json{{"id", run.subject_id},
                                {"seed", run.seed},
                                {"windows", run.n_windows},
                                {"stratified", cv_to_json(run.stratified)},
                                {"blocked", cv_to_json(run.blocked)}});
    }
    doc["subjects"] = std::move(subjects);
    doc["stratified_mean_accuracy"] = result.stratified_mean_accuracy;
    doc["blocked_mean_accuracy"] = result.blocked_mean_accuracy;
    doc["model"] = json{{"oob_accuracy", result.model.oob_accuracy},
                        {"n_trees", result.model.trees.size()},
                        {"n_features", result.model.feature_names.size()}};
    return doc.dump(2) + "\n";
}

}  // namespace hemopipe::pipeline
