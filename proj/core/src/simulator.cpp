#include "hemopipe/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "hemopipe/beer_lambert.hpp"
#include "hemopipe/errors.hpp"
#include "hemopipe/rng.hpp"

namespace hemopipe::sim {

namespace {

constexpr int kNirPerCycle = 7;
constexpr double kSettleDelay = 0.1;
constexpr double kNirSpacing = 0.9 / 7.0;

// Per-channel rate multipliers for the channel_independent stress mode
// (x, y, z, ir1, ir2): the IR channels decay at half / 1.5x the visible
// rate, deliberately breaking the channel-common drift premise.
constexpr double kChannelRateScale[5] = {1.0, 1.0, 1.0, 0.5, 1.5};

}  // namespace

const StateTarget& SimConfig::target_for(Label label) const {
    switch (label) {
        case Label::LowLoad:
            return target_low;
        case Label::HighLoad:
            return target_high;
        case Label::Rest:
        default:
            return target_rest;
    }
}

void SimConfig::validate() const {
    plan.validate();
    table.validate();
    auto positive = [](double v, const char* name) {
        if (!std::isfinite(v) || !(v > 0.0)) {
            throw ValidationError(std::string(name) + " must be positive");
        }
    };
    positive(baseline_x, "baseline_x");
    positive(baseline_y, "baseline_y");
    positive(baseline_z, "baseline_z");
    positive(baseline_ir1, "baseline_ir1");
    positive(baseline_ir2, "baseline_ir2");
    positive(transition_tau_s, "transition_tau_s");
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) {
        throw ValidationError("noise_sigma must be non-negative");
    }
    if (!std::isfinite(drift.rate_per_hour) || drift.rate_per_hour < 0.0) {
        throw ValidationError("drift rate must be non-negative");
    }
    if (drift.mode == DriftMode::Linear) {
        const double max_scale =
            drift.channel_independent
                ? *std::max_element(std::begin(kChannelRateScale),
                                    std::end(kChannelRateScale))
                : 1.0;
        const double end_factor = 1.0 - max_scale * drift.rate_per_hour *
                                            plan.total_duration() / 3600.0;
        if (end_factor <= 0.0) {
            throw ValidationError(
                "linear drift reaches zero intensity within the plan");
        }
    }
    if (cycle_count(plan) == 0) {
        throw ValidationError("plan shorter than one 1 s duty cycle");
    }
}

std::size_t cycle_count(const SessionPlan& plan) {
    return static_cast<std::size_t>(std::floor(plan.total_duration() + 1e-9));
}

std::vector<double> nir_tick_times(const SessionPlan& plan) {
    const std::size_t cycles = cycle_count(plan);
    std::vector<double> times;
    times.reserve(cycles * kNirPerCycle);
    for (std::size_t c = 0; c < cycles; ++c) {
        for (int k = 0; k < kNirPerCycle; ++k) {
            times.push_back(static_cast<double>(c) + kSettleDelay +
                            static_cast<double>(k) * kNirSpacing);
        }
    }
    return times;
}

double drift_factor(const DriftSpec& spec, double t) {
    switch (spec.mode) {
        case DriftMode::Linear:
            return 1.0 - spec.rate_per_hour * t / 3600.0;
        case DriftMode::Exponential:
            return std::exp(-spec.rate_per_hour * t / 3600.0);
        case DriftMode::None:
        default:
            return 1.0;
    }
}

double drift_factor(const DriftSpec& spec, double t, int channel_index) {
    if (!spec.channel_independent) return drift_factor(spec, t);
    DriftSpec scaled = spec;
    scaled.rate_per_hour *= kChannelRateScale[channel_index];
    return drift_factor(scaled, t);
}

std::vector<HemoSample> simulate_hemo(const SimConfig& config) {
    config.validate();
    const std::vector<double> ticks = nir_tick_times(config.plan);
    const double tau = config.transition_tau_s;

    std::vector<HemoSample> out;
    out.reserve(ticks.size());

    // Exact first-order lag: within a segment with target T,
    // C(t) = T + (C_start - T) * exp(-(t - t_start) / tau).
    std::size_t seg = 0;
    double seg_start = 0.0;
    double seg_end = config.plan.segments[0].duration_s;
    StateTarget state{0.0, 0.0};  // value at seg_start
    auto target = [&] { return config.target_for(config.plan.segments[seg].label); };

    for (const double t : ticks) {
        while (t >= seg_end && seg + 1 < config.plan.segments.size()) {
            const StateTarget& tg = target();
            const double decay = std::exp(-(seg_end - seg_start) / tau);
            state.d_chbo2 = tg.d_chbo2 + (state.d_chbo2 - tg.d_chbo2) * decay;
            state.d_chb = tg.d_chb + (state.d_chb - tg.d_chb) * decay;
            seg_start = seg_end;
            ++seg;
            seg_end += config.plan.segments[seg].duration_s;
        }
        const StateTarget& tg = target();
        const double decay = std::exp(-(t - seg_start) / tau);
        HemoSample sample;
        sample.t = t;
        sample.d_chbo2 = tg.d_chbo2 + (state.d_chbo2 - tg.d_chbo2) * decay;
        sample.d_chb = tg.d_chb + (state.d_chb - tg.d_chb) * decay;
        const beer::DensityPair dd =
            beer::forward_density(sample.d_chbo2, sample.d_chb, config.table);
        sample.dd_l1 = dd.dd_l1;
        sample.dd_l2 = dd.dd_l2;
        out.push_back(sample);
    }
    return out;
}

std::vector<SensorFrame> emit_frames(const SimConfig& config,
                                     const std::vector<HemoSample>& hemo) {
    config.validate();
    const std::size_t cycles = cycle_count(config.plan);
    if (hemo.size() != cycles * kNirPerCycle) {
        throw ValidationError("hemo series does not match the plan's cycles");
    }

    Rng rng(config.seed);
    const bool noisy = config.noise_sigma > 0.0;
    // Draw order is part of the determinism contract: per cycle x, y, z on
    // the white frame, then ir1, ir2 on each NIR frame, in time order.
    auto reading = [&](double clean) {
        if (!noisy) return clean;
        const double v = clean + config.noise_sigma * rng.normal();
        return std::max(0.0, v);
    };

    std::vector<SensorFrame> frames;
    frames.reserve(cycles * (1 + kNirPerCycle));
    for (std::size_t c = 0; c < cycles; ++c) {
        const double t_white = static_cast<double>(c);
        SensorFrame white;
        white.t = t_white;
        white.led = Led::White;
        white.x = reading(config.baseline_x *
                          drift_factor(config.drift, t_white, 0));
        white.y = reading(config.baseline_y *
                          drift_factor(config.drift, t_white, 1));
        white.z = reading(config.baseline_z *
                          drift_factor(config.drift, t_white, 2));
        frames.push_back(white);

        for (int k = 0; k < kNirPerCycle; ++k) {
            const HemoSample& h = hemo[c * kNirPerCycle + static_cast<std::size_t>(k)];
            SensorFrame nir;
            nir.t = h.t;
            nir.led = Led::Nir;
            nir.ir1 = reading(config.baseline_ir1 *
                              drift_factor(config.drift, h.t, 3) *
                              std::pow(10.0, -h.dd_l1));
            nir.ir2 = reading(config.baseline_ir2 *
                              drift_factor(config.drift, h.t, 4) *
                              std::pow(10.0, -h.dd_l2));
            frames.push_back(nir);
        }
    }
    return frames;
}

SimResult simulate(const SimConfig& config) {
    SimResult result;
    result.truth = simulate_hemo(config);
    result.frames = emit_frames(config, result.truth);
    return result;
}

}  // namespace hemopipe::sim
