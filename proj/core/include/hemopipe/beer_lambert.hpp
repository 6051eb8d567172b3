#pragma once

#include <string>
#include <utility>

#include "hemopipe/types.hpp"

namespace hemopipe::beer {

/// Logarithm convention for optical density. Decadic is the standard
/// absorbance convention and the default everywhere.
enum class LogBase {
    Decadic,
    Natural,
};

/// Optical-density change between a baseline intensity and the intensity at
/// time T: log(i_baseline / i_t). Throws DomainError on non-positive or
/// non-finite intensities.
double optical_density_delta(double i_baseline, double i_t,
                             LogBase base = LogBase::Decadic);

struct ConcentrationPair {
    double d_chbo2 = 0.0;  // mM
    double d_chb = 0.0;    // mM
};

struct DensityPair {
    double dd_l1 = 0.0;
    double dd_l2 = 0.0;
};

/// Solves the two-wavelength system for concentration changes:
///   dC_HbO2 = (eps_Hb_l2*dD_l1 - eps_Hb_l1*dD_l2) / (L * det)
///   dC_Hb   = (eps_HbO2_l2*dD_l1 - eps_HbO2_l1*dD_l2) / (L * -det)
/// with det = eps_Hb_l2*eps_HbO2_l1 - eps_Hb_l1*eps_HbO2_l2.
ConcentrationPair invert_concentrations(double dd_l1, double dd_l2,
                                        const ExtinctionTable& table,
                                        double singularity_tolerance = 1e-9);

/// Forward model: dD_li = L * (eps_HbO2_li*dC_HbO2 + eps_Hb_li*dC_Hb).
DensityPair forward_density(double d_chbo2, double d_chb,
                            const ExtinctionTable& table);

/// Same algebra as invert_concentrations applied to absolute optical
/// densities, yielding absolute concentrations.
ConcentrationPair absolute_concentrations(double d_l1, double d_l2,
                                          const ExtinctionTable& table,
                                          double singularity_tolerance = 1e-9);

/// Reads an extinction table from a key=value text file ('#' comments).
/// Keys: eps_hbo2_l1, eps_hb_l1, eps_hbo2_l2, eps_hb_l2, path_length_cm.
ExtinctionTable load_extinction_table(const std::string& path);

}  // namespace hemopipe::beer
