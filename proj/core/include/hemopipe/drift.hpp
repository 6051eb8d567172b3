#pragma once

#include <cstddef>
#include <vector>

namespace hemopipe::drift {

// Which NIR channel a drift fit applies to.
enum class Channel { IR1 = 0, IR2 = 1 };

// Ordinary-least-squares fit of one NIR channel against the interpolated
// white-light Y channel: ir ~ slope * y + intercept.
struct DriftFit {
    Channel channel = Channel::IR1;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

// Linearly interpolates the white-light samples (y_times, y_values) onto
// query_times. Outside the sampled span the nearest endpoint value is used.
// Throws InsufficientDataError when fewer than two white samples exist.
std::vector<double> interpolate_y(const std::vector<double>& y_times,
                                  const std::vector<double>& y_values,
                                  const std::vector<double>& query_times);

// Fits ir ~ slope * y_interp + intercept by ordinary least squares.
// Throws InsufficientDataError for fewer than two samples and
// DegenerateRegressorError when y_interp is constant.
DriftFit fit_drift(const std::vector<double>& y_interp,
                   const std::vector<double>& ir, Channel channel);

// Removes the fitted drift: residual plus the fitted value at the first
// sample, so the corrected series keeps the original intensity scale and its
// first element equals the original first element exactly.
std::vector<double> remove_drift(const std::vector<double>& y_interp,
                                 const std::vector<double>& ir,
                                 const DriftFit& fit);

}  // namespace hemopipe::drift
