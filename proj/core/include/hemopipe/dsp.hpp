#pragma once

#include <cstddef>
#include <vector>

#include "hemopipe/types.hpp"

namespace hemopipe::dsp {

// Four aligned series sampled at a nominal uniform rate: the two
// drift-corrected NIR intensities and the two concentration changes.
struct FourChannelSeries {
    std::vector<double> times;
    std::vector<double> ir1;
    std::vector<double> ir2;
    std::vector<double> d_chbo2;
    std::vector<double> d_chb;
    double sample_rate_hz = 7.0;

    std::size_t size() const { return times.size(); }
    // Throws ValidationError unless all five arrays share one length and the
    // sample rate is positive.
    void validate() const;
};

// One fixed-size slice of a FourChannelSeries with its class label.
struct Window {
    std::size_t start_index = 0;
    FourChannelSeries frames;
    Label label = Label::Rest;
};

// IIR transfer function coefficients, normalized so a[0] == 1 and padded so
// b and a have equal length.
struct IirCoefficients {
    std::vector<double> b;
    std::vector<double> a;
    std::size_t order() const { return a.size() - 1; }
};

// Digital Butterworth low-pass design: analog prototype, low-pass frequency
// scaling with pre-warp, bilinear transform. Throws ParameterError for a
// non-positive order/rate or a cutoff at or above Nyquist.
IirCoefficients butterworth_lowpass(int order, double cutoff_hz,
                                    double sample_rate_hz);

// Direct-form II transposed single-pass IIR filter. `state` must hold
// coeffs.order() values; it is consumed and updated in place.
std::vector<double> lfilter(const IirCoefficients& coeffs,
                            const std::vector<double>& x,
                            std::vector<double>& state);

// Single pass with zero initial state.
std::vector<double> lfilter(const IirCoefficients& coeffs,
                            const std::vector<double>& x);

// Zero-phase forward-backward application of `coeffs`. The initial states of
// both passes are chosen to minimize the integrated squared fourth
// difference of the output, and the result is symmetrized against time
// reversal, so constants, ramps and interior features pass through without
// boundary transients. Linear in x. Requires x.size() >= 3 * order.
std::vector<double> filtfilt(const IirCoefficients& coeffs,
                             const std::vector<double>& x);

// Zero-phase 4th-order Butterworth low-pass of one series.
// Throws ParameterError when cutoff_hz >= sample_rate_hz / 2 and
// InsufficientDataError when the series is shorter than 3x the filter order.
std::vector<double> lowpass(const std::vector<double>& series,
                            double sample_rate_hz, double cutoff_hz = 0.1);

// Applies `lowpass` to all four channels; times are untouched.
FourChannelSeries lowpass(const FourChannelSeries& series,
                          double cutoff_hz = 0.1);

// Slides a window_size window with the given step over the series. Window
// labels come from label_at(plan, midpoint time of the window). Throws
// InsufficientDataError when the series is shorter than one window.
std::vector<Window> segment(const FourChannelSeries& series,
                            const SessionPlan& plan,
                            std::size_t window_size = 70,
                            std::size_t step = 35);

}  // namespace hemopipe::dsp
