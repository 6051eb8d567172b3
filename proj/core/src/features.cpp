#include "hemopipe/features.hpp"

#include <algorithm>
#include <cmath>

#include "hemopipe/errors.hpp"

namespace hemopipe::features {

const std::array<std::string, kFeaturesPerChannel>&
per_channel_feature_names() {
    static const std::array<std::string, kFeaturesPerChannel> names = {
        "mean",         "variance",   "std_dev",
        "min",          "max",        "median",
        "range",        "skewness",   "kurtosis",
        "slope",        "abs_energy", "mean_abs_change",
        "zero_crossings", "delta"};
    return names;
}

const std::array<std::string, kNumChannels>& channel_names() {
    static const std::array<std::string, kNumChannels> names = {
        "ir1", "ir2", "d_chbo2", "d_chb"};
    return names;
}

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        out.reserve(kNumFeatures);
        for (const auto& channel : channel_names()) {
            for (const auto& feature : per_channel_feature_names()) {
                out.push_back(channel + "_" + feature);
            }
        }
        return out;
    }();
    return names;
}

std::array<double, kFeaturesPerChannel> channel_features(
    const std::vector<double>& x) {
    if (x.empty()) throw ValidationError("cannot extract features of empty series");
    for (const double v : x) {
        if (!std::isfinite(v)) {
            throw ValidationError("non-finite value in feature input");
        }
    }
    const std::size_t n = x.size();
    const double dn = static_cast<double>(n);

    double mean = 0.0;
    for (const double v : x) mean += v;
    mean /= dn;

    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (const double v : x) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    const double variance = m2;
    const double std_dev = std::sqrt(variance);
    const double skewness = m2 > 0.0 ? m3 / (m2 * std_dev) : 0.0;
    const double kurtosis = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

    const auto [min_it, max_it] = std::minmax_element(x.begin(), x.end());
    const double min_v = *min_it;
    const double max_v = *max_it;

    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double median = n % 2 == 1
                              ? sorted[n / 2]
                              : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    // OLS slope of x against frame index 0..n-1.
    double slope = 0.0;
    if (n > 1) {
        const double idx_mean = (dn - 1.0) / 2.0;
        double s_ii = 0.0;
        double s_ix = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double di = static_cast<double>(i) - idx_mean;
            s_ii += di * di;
            s_ix += di * (x[i] - mean);
        }
        slope = s_ix / s_ii;
    }

    double energy = 0.0;
    for (const double v : x) energy += v * v;

    double mean_abs_change = 0.0;
    if (n > 1) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            mean_abs_change += std::abs(x[i + 1] - x[i]);
        }
        mean_abs_change /= dn - 1.0;
    }

    // Sign changes of the mean-centered series; exact zeros count positive.
    double zero_crossings = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool pos_a = x[i] - mean >= 0.0;
        const bool pos_b = x[i + 1] - mean >= 0.0;
        if (pos_a != pos_b) zero_crossings += 1.0;
    }

    const double delta = x.back() - x.front();

    return {mean,     variance, std_dev,        min_v,
            max_v,    median,   max_v - min_v,  skewness,
            kurtosis, slope,    energy,         mean_abs_change,
            zero_crossings, delta};
}

FeatureVector extract(const dsp::Window& window) {
    window.frames.validate();
    FeatureVector out;
    out.values.reserve(kNumFeatures);
    out.names = feature_names();
    out.label = window.label;
    out.window_start_t = window.frames.times.front();
    const std::array<const std::vector<double>*, kNumChannels> channels = {
        &window.frames.ir1, &window.frames.ir2, &window.frames.d_chbo2,
        &window.frames.d_chb};
    for (const auto* channel : channels) {
        const auto stats = channel_features(*channel);
        out.values.insert(out.values.end(), stats.begin(), stats.end());
    }
    return out;
}

std::vector<FeatureVector> build_dataset(
    const std::vector<dsp::Window>& windows, const std::string& subject_id) {
    std::vector<FeatureVector> out;
    out.reserve(windows.size());
    for (const auto& window : windows) {
        FeatureVector fv = extract(window);
        fv.subject_id = subject_id;
        out.push_back(std::move(fv));
    }
    return out;
}

}  // namespace hemopipe::features
