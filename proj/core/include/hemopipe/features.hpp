#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "hemopipe/dsp.hpp"
#include "hemopipe/types.hpp"

namespace hemopipe::features {

inline constexpr std::size_t kFeaturesPerChannel = 14;
inline constexpr std::size_t kNumChannels = 4;
inline constexpr std::size_t kNumFeatures = kFeaturesPerChannel * kNumChannels;

// Frozen per-channel feature names, in extraction order.
const std::array<std::string, kFeaturesPerChannel>& per_channel_feature_names();

// Frozen channel names, in extraction order.
const std::array<std::string, kNumChannels>& channel_names();

// The 56 frozen "<channel>_<feature>" names, in extraction order.
const std::vector<std::string>& feature_names();

// One extracted window: feature values plus bookkeeping. `names` is shared
// by every vector in a dataset and is what model serialization pins.
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> names;
    Label label = Label::Rest;
    std::string subject_id;
    double window_start_t = 0.0;
};

// The 14 summary statistics of one channel, in the frozen order:
// mean, variance, standard deviation, minimum, maximum, median, range,
// skewness, excess kurtosis, linear-trend slope vs frame index, absolute
// energy, mean absolute change, zero crossings of the mean-centered series,
// last-minus-first delta. Moments use population estimators; skewness and
// kurtosis are 0 on a constant series. Throws ValidationError on empty or
// non-finite input.
std::array<double, kFeaturesPerChannel> channel_features(
    const std::vector<double>& x);

// Extracts the 56-value vector for one window (channels in the frozen
// order ir1, ir2, d_chbo2, d_chb).
FeatureVector extract(const dsp::Window& window);

// One FeatureVector per window, order preserved; empty input yields an
// empty dataset.
std::vector<FeatureVector> build_dataset(const std::vector<dsp::Window>& windows,
                                         const std::string& subject_id);

}  // namespace hemopipe::features
