// Microbenchmarks for the hot paths: the Beer-Lambert solves, the zero-phase
// filter, feature extraction, forest training/prediction, and the wire codec.
// Run the hemopipe_benchmarks binary directly; sizes mirror one 960 s session
// (6720 NIR ticks) unless noted.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hemopipe/beer_lambert.hpp"
#include "hemopipe/dsp.hpp"
#include "hemopipe/features.hpp"
#include "hemopipe/forest.hpp"
#include "hemopipe/pipeline.hpp"
#include "hemopipe/rng.hpp"
#include "hemopipe/simulator.hpp"
#include "hemopipe/types.hpp"
#include "hemopipe/wire.hpp"

namespace {

using hemopipe::Label;
using hemopipe::Rng;
namespace beer = hemopipe::beer;
namespace dsp = hemopipe::dsp;
namespace features = hemopipe::features;
namespace forest = hemopipe::forest;
namespace pipeline = hemopipe::pipeline;
namespace sim = hemopipe::sim;
namespace wire = hemopipe::wire;

const sim::SimResult& session() {
    static const sim::SimResult result = [] {
        sim::SimConfig config;
        config.noise_sigma = 300.0;
        config.drift.mode = sim::DriftMode::Linear;
        config.drift.rate_per_hour = 0.05;
        config.seed = 42;
        return sim::simulate(config);
    }();
    return result;
}

std::vector<features::FeatureVector> synthetic_dataset(std::size_t rows,
                                                       std::uint64_t seed) {
    Rng rng(seed);
    std::vector<features::FeatureVector> dataset(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        features::FeatureVector& row = dataset[i];
        row.names = features::feature_names();
        row.label = static_cast<Label>(i % 3);
        row.subject_id = "bench";
        row.values.resize(features::kNumFeatures);
        const double shift = static_cast<double>(i % 3);
        for (double& v : row.values) v = shift + rng.normal();
    }
    return dataset;
}

void BM_OpticalDensity(benchmark::State& state) {
    double i_t = 29000.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(beer::optical_density_delta(30000.0, i_t));
        i_t += 1e-9;  // defeat constant folding without changing the regime
    }
}
BENCHMARK(BM_OpticalDensity);

void BM_InvertConcentrations(benchmark::State& state) {
    const hemopipe::ExtinctionTable table = hemopipe::default_extinction_table();
    double dd = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(beer::invert_concentrations(dd, -0.4 * dd, table));
        dd += 1e-12;
    }
}
BENCHMARK(BM_InvertConcentrations);

void BM_Lowpass6720(benchmark::State& state) {
    std::vector<double> series(6720);
    for (std::size_t i = 0; i < series.size(); ++i) {
        series[i] = std::sin(0.01 * static_cast<double>(i)) +
                    0.1 * std::sin(2.0 * static_cast<double>(i));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(dsp::lowpass(series, 7.0, 0.1));
    }
}
BENCHMARK(BM_Lowpass6720);

void BM_ChannelFeatures70(benchmark::State& state) {
    std::vector<double> window(70);
    Rng rng(7);
    for (double& v : window) v = rng.normal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(features::channel_features(window));
    }
}
BENCHMARK(BM_ChannelFeatures70);

void BM_ExtractWindow(benchmark::State& state) {
    const pipeline::ProcessResult processed = pipeline::process_frames(
        session().frames, hemopipe::default_extinction_table());
    const std::vector<dsp::Window> windows =
        dsp::segment(processed.series, hemopipe::default_plan());
    for (auto _ : state) {
        benchmark::DoNotOptimize(features::extract(windows.front()));
    }
}
BENCHMARK(BM_ExtractWindow);

void BM_ProcessSession(benchmark::State& state) {
    const hemopipe::ExtinctionTable table = hemopipe::default_extinction_table();
    for (auto _ : state) {
        benchmark::DoNotOptimize(pipeline::process_frames(session().frames, table));
    }
}
BENCHMARK(BM_ProcessSession);

void BM_ForestTrain(benchmark::State& state) {
    const std::vector<features::FeatureVector> dataset = synthetic_dataset(150, 3);
    forest::ForestParams params;
    params.n_trees = 30;
    for (auto _ : state) {
        benchmark::DoNotOptimize(forest::train(dataset, params, 1));
    }
}
BENCHMARK(BM_ForestTrain);

void BM_ForestPredict(benchmark::State& state) {
    const std::vector<features::FeatureVector> dataset = synthetic_dataset(150, 3);
    const forest::ForestModel model = forest::train(dataset, {}, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(forest::predict(model, dataset.front()));
    }
}
BENCHMARK(BM_ForestPredict);

void BM_WireEncodeSession(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(wire::encode_stream(session().frames));
    }
}
BENCHMARK(BM_WireEncodeSession);

void BM_WireDecodeSession(benchmark::State& state) {
    const std::vector<std::uint8_t> bytes = wire::encode_stream(session().frames);
    for (auto _ : state) {
        benchmark::DoNotOptimize(wire::decode_stream(bytes));
    }
}
BENCHMARK(BM_WireDecodeSession);

}  // namespace

BENCHMARK_MAIN();
