#include "hemopipe/drift.hpp"

#include <algorithm>
#include <cmath>

#include "hemopipe/errors.hpp"

namespace hemopipe::drift {

std::vector<double> interpolate_y(const std::vector<double>& y_times,
                                  const std::vector<double>& y_values,
                                  const std::vector<double>& query_times) {
    if (y_times.size() != y_values.size()) {
        throw ValidationError("white sample time/value size mismatch");
    }
    if (y_times.size() < 2) {
        throw InsufficientDataError(
            "need at least two white samples to interpolate");
    }
    for (std::size_t i = 1; i < y_times.size(); ++i) {
        if (!(y_times[i] > y_times[i - 1])) {
            throw ValidationError("white sample times must strictly increase");
        }
    }
    std::vector<double> out;
    out.reserve(query_times.size());
    for (const double t : query_times) {
        if (t <= y_times.front()) {
            out.push_back(y_values.front());
            continue;
        }
        if (t >= y_times.back()) {
            out.push_back(y_values.back());
            continue;
        }
        const auto it =
            std::upper_bound(y_times.begin(), y_times.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - y_times.begin());
        const std::size_t lo = hi - 1;
        const double frac = (t - y_times[lo]) / (y_times[hi] - y_times[lo]);
        out.push_back(y_values[lo] + frac * (y_values[hi] - y_values[lo]));
    }
    return out;
}

DriftFit fit_drift(const std::vector<double>& y_interp,
                   const std::vector<double>& ir, Channel channel) {
    if (y_interp.size() != ir.size()) {
        throw ValidationError("regressor/response size mismatch");
    }
    const std::size_t n = y_interp.size();
    if (n < 2) {
        throw InsufficientDataError("need at least two samples to fit drift");
    }
    double y_mean = 0.0;
    double ir_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y_mean += y_interp[i];
        ir_mean += ir[i];
    }
    y_mean /= static_cast<double>(n);
    ir_mean /= static_cast<double>(n);

    double s_yy = 0.0;
    double s_yi = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dy = y_interp[i] - y_mean;
        s_yy += dy * dy;
        s_yi += dy * (ir[i] - ir_mean);
    }
    if (s_yy <= 0.0) {
        throw DegenerateRegressorError(
            "white reference is constant; cannot fit drift");
    }

    DriftFit fit;
    fit.channel = channel;
    fit.slope = s_yi / s_yy;
    fit.intercept = ir_mean - fit.slope * y_mean;

    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pred = fit.slope * y_interp[i] + fit.intercept;
        const double res = ir[i] - pred;
        const double dev = ir[i] - ir_mean;
        ss_res += res * res;
        ss_tot += dev * dev;
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    return fit;
}

std::vector<double> remove_drift(const std::vector<double>& y_interp,
                                 const std::vector<double>& ir,
                                 const DriftFit& fit) {
    if (y_interp.size() != ir.size()) {
        throw ValidationError("regressor/response size mismatch");
    }
    if (ir.empty()) return {};
    const double anchor = fit.slope * y_interp.front() + fit.intercept;
    std::vector<double> out;
    out.reserve(ir.size());
    for (std::size_t i = 0; i < ir.size(); ++i) {
        const double fitted = fit.slope * y_interp[i] + fit.intercept;
        out.push_back(ir[i] - fitted + anchor);
    }
    return out;
}

}  // namespace hemopipe::drift
