#pragma once

#include <cstdint>
#include <vector>

#include "hemopipe/types.hpp"

namespace hemopipe::sim {

enum class DriftMode { None = 0, Linear = 1, Exponential = 2 };

// Slow multiplicative sensor decay. The factor is 1 at t = 0 and is shared
// by all channels unless channel_independent is set, which scales the IR
// channels' rates differently from the visible channels to stress-test the
// Y-reference correction.
struct DriftSpec {
    DriftMode mode = DriftMode::None;
    double rate_per_hour = 0.05;  // fractional decay per hour
    bool channel_independent = false;
};

// Target concentration changes (mM) for one cognitive state.
struct StateTarget {
    double d_chbo2 = 0.0;
    double d_chb = 0.0;
};

struct SimConfig {
    SessionPlan plan = default_plan();
    ExtinctionTable table = default_extinction_table();
    // Baseline reflected-light intensity per channel, in sensor counts.
    double baseline_x = 30000.0;
    double baseline_y = 30000.0;
    double baseline_z = 30000.0;
    double baseline_ir1 = 30000.0;
    double baseline_ir2 = 30000.0;
    StateTarget target_rest{0.0, 0.0};
    StateTarget target_low{0.010, -0.004};
    StateTarget target_high{0.025, -0.010};
    double transition_tau_s = 20.0;
    DriftSpec drift;
    double noise_sigma = 0.0;  // additive Gaussian noise, counts
    std::uint64_t seed = 0;

    const StateTarget& target_for(Label label) const;
    // Throws ValidationError / ParameterError on non-positive baselines or
    // tau, negative noise or drift rate, an invalid plan, or a linear drift
    // that would cross zero within the plan.
    void validate() const;
};

// Number of 1 s LED duty cycles in the plan (one white + seven NIR frames
// per cycle).
std::size_t cycle_count(const SessionPlan& plan);

// NIR tick timestamps: cycle_start + 0.1 + k * (0.9 / 7), k = 0..6. The
// 0.1 s offset models the LED settle delay.
std::vector<double> nir_tick_times(const SessionPlan& plan);

// Drift factor for a visible channel at time t (1 at t = 0).
double drift_factor(const DriftSpec& spec, double t);

// Drift factor for channel index 0..4 = x, y, z, ir1, ir2; differs from the
// common factor only in channel_independent mode.
double drift_factor(const DriftSpec& spec, double t, int channel_index);

// Ground-truth hemodynamics at every NIR tick: first-order lag of
// (dC_HbO2, dC_Hb) toward the active segment's target with time constant
// transition_tau_s, integrated exactly segment by segment, plus the
// corresponding optical densities from the forward Beer-Lambert model.
std::vector<HemoSample> simulate_hemo(const SimConfig& config);

// Sensor frames for the ground truth: per cycle one White frame at the
// cycle start then seven Nir frames at the tick times, with intensities
// baseline * drift * 10^(-dD), additive Gaussian noise (seeded, clamped at
// zero), and x/y/z zero on Nir frames (ir1/ir2 zero on White frames).
std::vector<SensorFrame> emit_frames(const SimConfig& config,
                                     const std::vector<HemoSample>& hemo);

struct SimResult {
    std::vector<HemoSample> truth;
    std::vector<SensorFrame> frames;
};

SimResult simulate(const SimConfig& config);

}  // namespace hemopipe::sim
