#include "hemopipe/types.hpp"

#include <cmath>

#include "hemopipe/errors.hpp"

namespace hemopipe {

std::string to_string(Label label) {
    switch (label) {
        case Label::Rest: return "rest";
        case Label::LowLoad: return "low_load";
        case Label::HighLoad: return "high_load";
    }
    return "unknown";
}

namespace {

void check_channel(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ValidationError(std::string(name) + " non-finite");
    }
    if (v < 0.0) {
        throw ValidationError(std::string(name) + " negative");
    }
}

}  // namespace

const SensorFrame& validate_frame(const SensorFrame& frame) {
    if (!std::isfinite(frame.t)) {
        throw ValidationError("t non-finite");
    }
    check_channel(frame.x, "x");
    check_channel(frame.y, "y");
    check_channel(frame.z, "z");
    check_channel(frame.ir1, "ir1");
    check_channel(frame.ir2, "ir2");
    return frame;
}

double ExtinctionTable::determinant() const noexcept {
    return eps_hb_l2 * eps_hbo2_l1 - eps_hb_l1 * eps_hbo2_l2;
}

void ExtinctionTable::validate(double singularity_tolerance) const {
    if (!(eps_hbo2_l1 > 0.0) || !(eps_hb_l1 > 0.0) || !(eps_hbo2_l2 > 0.0) ||
        !(eps_hb_l2 > 0.0)) {
        throw ValidationError("extinction coefficients must be positive");
    }
    if (!(path_length_cm > 0.0)) {
        throw ValidationError("path_length_cm must be positive");
    }
    if (std::abs(determinant()) <= singularity_tolerance) {
        throw SingularityError("extinction matrix is singular within tolerance");
    }
}

ExtinctionTable default_extinction_table() {
    // Molar extinction at 730/940 nm from the Prahl compilation,
    // converted from 1/(cm*M) to 1/(cm*mM).
    ExtinctionTable t;
    t.eps_hbo2_l1 = 0.390;
    t.eps_hb_l1 = 1.1022;
    t.eps_hbo2_l2 = 1.214;
    t.eps_hb_l2 = 0.69344;
    t.path_length_cm = 0.75;
    return t;
}

double SessionPlan::total_duration() const noexcept {
    double total = 0.0;
    for (const auto& seg : segments) total += seg.duration_s;
    return total;
}

void SessionPlan::validate() const {
    if (segments.empty()) {
        throw ValidationError("plan has no segments");
    }
    for (const auto& seg : segments) {
        if (!(seg.duration_s > 0.0)) {
            throw ValidationError("segment duration must be positive");
        }
    }
}

SessionPlan default_plan() {
    return SessionPlan{{
        {Label::Rest, 120.0},
        {Label::LowLoad, 300.0},
        {Label::Rest, 120.0},
        {Label::HighLoad, 300.0},
        {Label::Rest, 120.0},
    }};
}

Label label_at(const SessionPlan& plan, double t) {
    plan.validate();
    if (t < 0.0 || !std::isfinite(t)) {
        throw RangeError("t outside session plan");
    }
    double acc = 0.0;
    for (const auto& seg : plan.segments) {
        acc += seg.duration_s;
        if (t < acc) return seg.label;
    }
    throw RangeError("t outside session plan");
}

}  // namespace hemopipe
