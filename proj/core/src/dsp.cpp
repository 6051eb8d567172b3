#include "hemopipe/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "hemopipe/errors.hpp"

namespace hemopipe::dsp {

namespace {

// Polynomial coefficients (highest power first) from complex roots.
std::vector<std::complex<double>> poly_from_roots(
    const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> coeffs{1.0};
    for (const auto& root : roots) {
        std::vector<std::complex<double>> next(coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            next[i] += coeffs[i];
            next[i + 1] -= coeffs[i] * root;
        }
        coeffs = std::move(next);
    }
    return coeffs;
}

std::vector<double> real_coeffs(
    const std::vector<std::complex<double>>& coeffs) {
    std::vector<double> out;
    out.reserve(coeffs.size());
    for (const auto& c : coeffs) out.push_back(c.real());
    return out;
}

// Zero-input response of the filter from a given initial state.
std::vector<double> zero_input_response(const IirCoefficients& coeffs,
                                        std::vector<double> state,
                                        std::size_t n) {
    const std::vector<double> zeros(n, 0.0);
    return lfilter(coeffs, zeros, state);
}

std::vector<double> reversed(const std::vector<double>& v) {
    return {v.rbegin(), v.rend()};
}

// Fourth difference of v: out[i] = v[i] - 4v[i+1] + 6v[i+2] - 4v[i+3] + v[i+4].
std::vector<double> fourth_difference(const std::vector<double>& v) {
    std::vector<double> out(v.size() - 4);
    for (std::size_t i = 0; i + 4 < v.size(); ++i) {
        out[i] = v[i] - 4.0 * v[i + 1] + 6.0 * v[i + 2] - 4.0 * v[i + 3] +
                 v[i + 4];
    }
    return out;
}

// Least-squares solve of columns * theta ~= rhs via Householder QR.
std::vector<double> solve_least_squares(std::vector<std::vector<double>> cols,
                                        std::vector<double> rhs) {
    const std::size_t m = rhs.size();
    const std::size_t n = cols.size();
    for (std::size_t k = 0; k < n; ++k) {
        double norm = 0.0;
        for (std::size_t i = k; i < m; ++i) norm += cols[k][i] * cols[k][i];
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            throw DomainError("singular boundary-state system in filtfilt");
        }
        const double alpha = cols[k][k] >= 0.0 ? -norm : norm;
        std::vector<double> v(m - k);
        v[0] = cols[k][k] - alpha;
        for (std::size_t i = k + 1; i < m; ++i) v[i - k] = cols[k][i];
        double vnorm2 = 0.0;
        for (const double x : v) vnorm2 += x * x;
        cols[k][k] = alpha;
        for (std::size_t i = k + 1; i < m; ++i) cols[k][i] = 0.0;
        if (vnorm2 == 0.0) continue;
        auto reflect = [&](std::vector<double>& col) {
            double dot = 0.0;
            for (std::size_t i = k; i < m; ++i) dot += v[i - k] * col[i];
            const double scale = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < m; ++i) col[i] -= scale * v[i - k];
        };
        for (std::size_t j = k + 1; j < n; ++j) reflect(cols[j]);
        reflect(rhs);
    }
    std::vector<double> theta(n, 0.0);
    for (std::size_t k = n; k-- > 0;) {
        double acc = rhs[k];
        for (std::size_t j = k + 1; j < n; ++j) acc -= cols[j][k] * theta[j];
        if (cols[k][k] == 0.0) {
            throw DomainError("singular boundary-state system in filtfilt");
        }
        theta[k] = acc / cols[k][k];
    }
    return theta;
}

// One direction of the boundary-optimized zero-phase filter: forward pass,
// reverse, backward pass, reverse. The 2*order initial-state values of the
// two passes are free parameters; the output is affine in them, so each
// basis response is computed once and the combination minimizing the squared
// fourth difference of the output is solved for directly.
std::vector<double> filtfilt_once(const IirCoefficients& coeffs,
                                  const std::vector<double>& x) {
    const std::size_t n = x.size();
    const std::size_t order = coeffs.order();

    std::vector<std::vector<double>> unit_responses(order);
    for (std::size_t j = 0; j < order; ++j) {
        std::vector<double> state(order, 0.0);
        state[j] = 1.0;
        unit_responses[j] = zero_input_response(coeffs, std::move(state), n);
    }

    const std::vector<double> forward0 = lfilter(coeffs, x);
    const std::vector<double> base = reversed(lfilter(coeffs, reversed(forward0)));

    std::vector<std::vector<double>> columns;
    columns.reserve(2 * order);
    for (std::size_t j = 0; j < order; ++j) {
        columns.push_back(
            reversed(lfilter(coeffs, reversed(unit_responses[j]))));
    }
    for (std::size_t j = 0; j < order; ++j) {
        columns.push_back(reversed(unit_responses[j]));
    }

    std::vector<std::vector<double>> diff_cols;
    diff_cols.reserve(columns.size());
    for (const auto& col : columns) diff_cols.push_back(fourth_difference(col));
    std::vector<double> rhs = fourth_difference(base);
    for (double& v : rhs) v = -v;

    const std::vector<double> theta =
        solve_least_squares(std::move(diff_cols), std::move(rhs));

    std::vector<double> y = base;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        for (std::size_t i = 0; i < n; ++i) y[i] += theta[j] * columns[j][i];
    }
    return y;
}

}  // namespace

void FourChannelSeries::validate() const {
    const std::size_t n = times.size();
    if (ir1.size() != n || ir2.size() != n || d_chbo2.size() != n ||
        d_chb.size() != n) {
        throw ValidationError("four-channel series arrays differ in length");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw ValidationError("sample_rate_hz must be positive");
    }
}

IirCoefficients butterworth_lowpass(int order, double cutoff_hz,
                                    double sample_rate_hz) {
    if (order < 1) throw ParameterError("filter order must be >= 1");
    if (!(sample_rate_hz > 0.0)) {
        throw ParameterError("sample rate must be positive");
    }
    if (!(cutoff_hz > 0.0)) throw ParameterError("cutoff must be positive");
    if (cutoff_hz >= sample_rate_hz / 2.0) {
        throw ParameterError("cutoff must be below Nyquist");
    }

    // Normalized cutoff in (0, 1), pre-warped for the bilinear transform
    // (internal sample rate convention fs = 2).
    const double wn = cutoff_hz / (sample_rate_hz / 2.0);
    const double warped = 4.0 * std::tan(std::numbers::pi * wn / 2.0);

    // Analog Butterworth prototype poles scaled to the warped cutoff.
    std::vector<std::complex<double>> analog_poles(
        static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        const double theta = std::numbers::pi *
                             static_cast<double>(2 * k + order + 1) /
                             static_cast<double>(2 * order);
        analog_poles[static_cast<std::size_t>(k)] =
            warped * std::exp(std::complex<double>(0.0, theta));
    }
    const double analog_gain = std::pow(warped, order);

    // Bilinear transform z = (4 + s) / (4 - s); all-pole prototype maps its
    // zeros at infinity to z = -1.
    std::vector<std::complex<double>> digital_poles;
    digital_poles.reserve(analog_poles.size());
    std::complex<double> denom_prod = 1.0;
    for (const auto& p : analog_poles) {
        digital_poles.push_back((4.0 + p) / (4.0 - p));
        denom_prod *= 4.0 - p;
    }
    const double digital_gain = analog_gain * (1.0 / denom_prod).real();

    const std::vector<std::complex<double>> digital_zeros(
        static_cast<std::size_t>(order), std::complex<double>(-1.0, 0.0));

    IirCoefficients out;
    out.b = real_coeffs(poly_from_roots(digital_zeros));
    for (double& c : out.b) c *= digital_gain;
    out.a = real_coeffs(poly_from_roots(digital_poles));
    return out;
}

std::vector<double> lfilter(const IirCoefficients& coeffs,
                            const std::vector<double>& x,
                            std::vector<double>& state) {
    const auto& b = coeffs.b;
    const auto& a = coeffs.a;
    if (b.size() != a.size() || a.empty() || a[0] != 1.0) {
        throw ParameterError("filter coefficients must be normalized");
    }
    const std::size_t order = coeffs.order();
    if (state.size() != order) {
        throw ParameterError("filter state size mismatch");
    }
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double yi = b[0] * xi + (order > 0 ? state[0] : 0.0);
        for (std::size_t j = 0; j + 1 < order; ++j) {
            state[j] = b[j + 1] * xi + state[j + 1] - a[j + 1] * yi;
        }
        if (order > 0) {
            state[order - 1] = b[order] * xi - a[order] * yi;
        }
        y[i] = yi;
    }
    return y;
}

std::vector<double> lfilter(const IirCoefficients& coeffs,
                            const std::vector<double>& x) {
    std::vector<double> state(coeffs.order(), 0.0);
    return lfilter(coeffs, x, state);
}

std::vector<double> filtfilt(const IirCoefficients& coeffs,
                             const std::vector<double>& x) {
    const std::size_t order = coeffs.order();
    if (x.size() < 3 * order) {
        throw InsufficientDataError(
            "series shorter than filter warm-up length");
    }
    // Symmetrize against time reversal so a symmetric input produces an
    // exactly symmetric output.
    const std::vector<double> fwd = filtfilt_once(coeffs, x);
    const std::vector<double> bwd =
        reversed(filtfilt_once(coeffs, reversed(x)));
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = 0.5 * (fwd[i] + bwd[i]);
    }
    return y;
}

std::vector<double> lowpass(const std::vector<double>& series,
                            double sample_rate_hz, double cutoff_hz) {
    const IirCoefficients coeffs =
        butterworth_lowpass(4, cutoff_hz, sample_rate_hz);
    return filtfilt(coeffs, series);
}

FourChannelSeries lowpass(const FourChannelSeries& series, double cutoff_hz) {
    series.validate();
    FourChannelSeries out = series;
    out.ir1 = lowpass(series.ir1, series.sample_rate_hz, cutoff_hz);
    out.ir2 = lowpass(series.ir2, series.sample_rate_hz, cutoff_hz);
    out.d_chbo2 = lowpass(series.d_chbo2, series.sample_rate_hz, cutoff_hz);
    out.d_chb = lowpass(series.d_chb, series.sample_rate_hz, cutoff_hz);
    return out;
}

std::vector<Window> segment(const FourChannelSeries& series,
                            const SessionPlan& plan, std::size_t window_size,
                            std::size_t step) {
    series.validate();
    if (window_size == 0 || step == 0) {
        throw ParameterError("window size and step must be positive");
    }
    const std::size_t n = series.size();
    if (n < window_size) {
        throw InsufficientDataError("series shorter than one window");
    }
    const std::size_t count = (n - window_size) / step + 1;
    std::vector<Window> windows;
    windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t start = w * step;
        Window win;
        win.start_index = start;
        auto slice = [&](const std::vector<double>& v) {
            return std::vector<double>(
                v.begin() + static_cast<std::ptrdiff_t>(start),
                v.begin() + static_cast<std::ptrdiff_t>(start + window_size));
        };
        win.frames.times = slice(series.times);
        win.frames.ir1 = slice(series.ir1);
        win.frames.ir2 = slice(series.ir2);
        win.frames.d_chbo2 = slice(series.d_chbo2);
        win.frames.d_chb = slice(series.d_chb);
        win.frames.sample_rate_hz = series.sample_rate_hz;
        const double t_mid = 0.5 * (series.times[start] +
                                    series.times[start + window_size - 1]);
        win.label = label_at(plan, t_mid);
        windows.push_back(std::move(win));
    }
    return windows;
}

}  // namespace hemopipe::dsp
