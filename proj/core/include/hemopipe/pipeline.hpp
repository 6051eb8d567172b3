#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hemopipe/beer_lambert.hpp"
#include "hemopipe/drift.hpp"
#include "hemopipe/dsp.hpp"
#include "hemopipe/features.hpp"
#include "hemopipe/forest.hpp"
#include "hemopipe/simulator.hpp"
#include "hemopipe/types.hpp"

namespace hemopipe::pipeline {

enum class DriftCorrection {
    Auto,  // correct unless the white reference carries no information
    On,
    Off,
};

struct ProcessOptions {
    beer::LogBase log_base = beer::LogBase::Decadic;
    DriftCorrection drift = DriftCorrection::Auto;
    bool apply_lowpass = true;
    double cutoff_hz = 0.1;
    double sample_rate_hz = 7.0;
    double singularity_tolerance = 1e-9;
};

struct ProcessResult {
    // Drift-corrected, Beer-Lambert inverted, low-passed series.
    dsp::FourChannelSeries series;
    std::vector<drift::DriftFit> fits;  // ir1 then ir2 when drift applied
    bool drift_applied = false;
};

// Raw frames -> four-channel series: split white/NIR, drift-correct the NIR
// intensities against interpolated Y, apply the optical-density and
// concentration solves with the first corrected sample as baseline, then
// low-pass. In Auto mode drift correction is skipped when the white
// reference is constant (relative variance < 1e-12), e.g. drift-free
// noise-free simulations.
ProcessResult process_frames(const std::vector<SensorFrame>& frames,
                             const ExtinctionTable& table,
                             const ProcessOptions& options = {});

struct PipelineConfig {
    sim::SimConfig sim;          // per-subject template; seed is overridden
    forest::ForestParams params;
    ProcessOptions process;
    int n_subjects = 12;
    int k_folds = 5;
    std::uint64_t seed = 42;  // subject i simulates with seed + i

    void validate() const;
};

// The pipeline default exercises the realistic regime: 1% baseline noise
// and 5%/hour linear channel-common drift on the default plan.
PipelineConfig default_pipeline_config();

struct SubjectRun {
    std::string subject_id;
    std::uint64_t seed = 0;
    std::size_t n_windows = 0;
    forest::CvResult stratified;
    forest::CvResult blocked;
};

struct PipelineResult {
    PipelineConfig config;
    std::vector<SubjectRun> subjects;
    double stratified_mean_accuracy = 0.0;
    double blocked_mean_accuracy = 0.0;
    // Final model trained on every subject's windows with the base seed.
    forest::ForestModel model;
};

// Simulate one subject, round-trip the frames through the wire codec,
// process, window, and extract features.
std::vector<features::FeatureVector> run_subject(const sim::SimConfig& config,
                                                 const std::string& subject_id,
                                                 const ProcessOptions& options);

// Full end-to-end run over n_subjects seeded subjects: per-subject
// stratified and blocked cross-validation plus one final model trained on
// the concatenated dataset.
PipelineResult run_pipeline(const PipelineConfig& config);

// Deterministic JSON report (sorted keys, round-trip float formatting).
std::string report_to_json(const PipelineResult& result);

}  // namespace hemopipe::pipeline
