#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hemopipe {

/// Cognitive-load class labels. Numeric values are part of the data
/// contract (they appear in CSV files and confusion matrices).
enum class Label : int {
    Rest = 0,
    LowLoad = 1,
    HighLoad = 2,
};

constexpr int kNumClasses = 3;

std::string to_string(Label label);

/// Which light source was active for a reading.
enum class Led : std::uint8_t {
    White = 0,
    Nir = 1,
};

/// One timestamped five-channel reading. White frames carry x/y/z,
/// NIR frames carry ir1/ir2; the inactive channels are zero.
struct SensorFrame {
    double t = 0.0;  // seconds since session start
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double ir1 = 0.0;
    double ir2 = 0.0;
    Led led = Led::White;
};

/// Throws ValidationError naming the offending field if any channel is
/// negative or non-finite, or t is non-finite. Returns the frame unchanged.
const SensorFrame& validate_frame(const SensorFrame& frame);

/// Hemoglobin extinction coefficients at the two NIR wavelengths
/// (lambda1 = 730 nm, lambda2 = 940 nm), in 1/(cm*mM), plus the optical
/// path length in cm.
struct ExtinctionTable {
    double eps_hbo2_l1 = 0.0;
    double eps_hb_l1 = 0.0;
    double eps_hbo2_l2 = 0.0;
    double eps_hb_l2 = 0.0;
    double path_length_cm = 0.75;

    /// eps_hb_l2*eps_hbo2_l1 - eps_hb_l1*eps_hbo2_l2, the 2x2 system
    /// determinant shared by both concentration solves.
    double determinant() const noexcept;

    /// Throws ValidationError / SingularityError if coefficients are not
    /// positive or |determinant| <= tolerance.
    void validate(double singularity_tolerance = 1e-9) const;
};

/// Bundled default coefficients (see core/data/extinction_default.txt for
/// the source citation). Tests that need exact numbers use synthetic
/// tables; these defaults only have to be physically plausible.
ExtinctionTable default_extinction_table();

/// One processed NIR tick: optical-density changes at both wavelengths
/// and the corresponding concentration changes in mM.
struct HemoSample {
    double t = 0.0;
    double dd_l1 = 0.0;
    double dd_l2 = 0.0;
    double d_chbo2 = 0.0;
    double d_chb = 0.0;
};

/// Ordered task timeline: a list of labelled segments.
struct SessionPlan {
    struct Segment {
        Label label = Label::Rest;
        double duration_s = 0.0;
    };

    std::vector<Segment> segments;

    double total_duration() const noexcept;

    /// Throws ValidationError if any duration is non-positive or the plan
    /// is empty.
    void validate() const;
};

/// Rest 120 s, low load 300 s, rest 120 s, high load 300 s, rest 120 s.
SessionPlan default_plan();

/// Label of the segment containing time t. Segment boundaries belong to
/// the later segment. Throws RangeError for t outside [0, total).
Label label_at(const SessionPlan& plan, double t);

}  // namespace hemopipe
