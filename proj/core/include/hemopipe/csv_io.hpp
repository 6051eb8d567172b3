#pragma once

#include <string>
#include <vector>

#include "hemopipe/dsp.hpp"
#include "hemopipe/features.hpp"
#include "hemopipe/types.hpp"

namespace hemopipe::io {

// Shortest decimal string that round-trips the double exactly.
std::string format_double(double value);

// All CSV files open with an exact version line ("# hemopipe <kind> v1");
// readers reject unknown kinds or versions with SchemaError.

// raw v1: t,led,x,y,z,ir1,ir2 (led is "white" or "nir").
void write_raw_csv(const std::string& path,
                   const std::vector<SensorFrame>& frames);

// hemo v1: a sample-rate metadata line, then t,ir1,ir2,d_chbo2,d_chb.
void write_hemo_csv(const std::string& path,
                    const dsp::FourChannelSeries& series);
dsp::FourChannelSeries read_hemo_csv(const std::string& path);

// features v1: 56 feature columns then label,subject_id,window_start_t.
void write_features_csv(const std::string& path,
                        const std::vector<features::FeatureVector>& dataset);
std::vector<features::FeatureVector> read_features_csv(
    const std::string& path);

}  // namespace hemopipe::io
