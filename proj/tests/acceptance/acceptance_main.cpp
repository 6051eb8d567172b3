// Acceptance gate for the hemopipe stack. Each release criterion runs as an
// independent check and prints exactly one PASS/FAIL line; the process exit
// status is the number of failed criteria so ctest fails on any regression.
//
// Numeric thresholds here are the release contract. They are intentionally
// hard-coded at the call sites and must not be loosened to make a run pass.

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hemopipe/beer_lambert.hpp"
#include "hemopipe/dsp.hpp"
#include "hemopipe/features.hpp"
#include "hemopipe/forest.hpp"
#include "hemopipe/pipeline.hpp"
#include "hemopipe/rng.hpp"
#include "hemopipe/simulator.hpp"
#include "hemopipe/types.hpp"
#include "hemopipe/wire.hpp"

#ifndef HEMOPIPE_CLI_PATH
#error "HEMOPIPE_CLI_PATH must point at the hemopipe CLI binary"
#endif

namespace {

using hemopipe::Label;
using hemopipe::Rng;
using hemopipe::SensorFrame;
namespace beer = hemopipe::beer;
namespace dsp = hemopipe::dsp;
namespace features = hemopipe::features;
namespace forest = hemopipe::forest;
namespace pipeline = hemopipe::pipeline;
namespace sim = hemopipe::sim;
namespace wire = hemopipe::wire;

class Stopwatch {
public:
    double seconds() const {
        const auto now = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(now - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ =
        std::chrono::steady_clock::now();
};

std::string fmt(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4g", value);
    return buffer;
}

struct Outcome {
    bool passed = false;
    std::string detail;
};

double rms(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

// Pooled RMS of the two concentration channels against zero truth.
double concentration_rms(const dsp::FourChannelSeries& series) {
    double acc = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        acc += series.d_chbo2[i] * series.d_chbo2[i] +
               series.d_chb[i] * series.d_chb[i];
    }
    return std::sqrt(acc / (2.0 * static_cast<double>(series.size())));
}

// ---------------------------------------------------------------------------
// Criterion 1: Beer-Lambert round trip. 10,000 seeded random extinction
// tables and concentration pairs with |det| > 1e-6 must invert back within
// 1e-9 relative error (relative to the pair's own magnitude, since the solve
// is linear and its error scales with the vector norm), in under 1 second.
// ---------------------------------------------------------------------------
Outcome criterion_round_trip() {
    Rng rng(20260826);
    constexpr int kPairs = 10000;
    double worst = 0.0;
    int rejected = 0;
    Stopwatch watch;
    for (int i = 0; i < kPairs; ++i) {
        hemopipe::ExtinctionTable table;
        do {
            table.eps_hbo2_l1 = rng.uniform(0.3, 2.0);
            table.eps_hb_l1 = rng.uniform(0.3, 2.0);
            table.eps_hbo2_l2 = rng.uniform(0.3, 2.0);
            table.eps_hb_l2 = rng.uniform(0.3, 2.0);
            table.path_length_cm = rng.uniform(0.5, 1.5);
            if (std::abs(table.determinant()) > 1e-6) break;
            ++rejected;
        } while (true);
        const double c_hbo2 = rng.uniform(-0.05, 0.05);
        const double c_hb = rng.uniform(-0.05, 0.05);
        const beer::DensityPair dd = beer::forward_density(c_hbo2, c_hb, table);
        const beer::ConcentrationPair back =
            beer::invert_concentrations(dd.dd_l1, dd.dd_l2, table);
        const double scale = std::max(std::abs(c_hbo2), std::abs(c_hb));
        const double err = std::max(std::abs(back.d_chbo2 - c_hbo2),
                                    std::abs(back.d_chb - c_hb)) /
                           std::max(scale, 1e-300);
        worst = std::max(worst, err);
    }
    const double elapsed = watch.seconds();
    Outcome out;
    out.passed = worst <= 1e-9 && elapsed < 1.0;
    out.detail = "max rel err " + fmt(worst) + " over 10000 pairs (" +
                 std::to_string(rejected) + " near-singular redraws), " +
                 fmt(elapsed) + " s";
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: optical density against a 256-bit MPFR log oracle, 1,000
// random intensity pairs within 1e-12, and dD(i, i) == 0 within 1e-15.
// ---------------------------------------------------------------------------
double mpfr_density(double i_baseline, double i_t) {
    mpfr_t b, t, q;
    mpfr_inits2(256, b, t, q, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_d(b, i_baseline, MPFR_RNDN);
    mpfr_set_d(t, i_t, MPFR_RNDN);
    mpfr_div(q, b, t, MPFR_RNDN);
    mpfr_log10(q, q, MPFR_RNDN);
    const double result = mpfr_get_d(q, MPFR_RNDN);
    mpfr_clears(b, t, q, static_cast<mpfr_ptr>(nullptr));
    return result;
}

Outcome criterion_density_oracle() {
    Rng rng(424242);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double i_b = std::pow(10.0, rng.uniform(0.5, 4.78));
        const double i_t = std::pow(10.0, rng.uniform(0.5, 4.78));
        const double lib = beer::optical_density_delta(i_b, i_t);
        const double oracle = mpfr_density(i_b, i_t);
        worst = std::max(worst, std::abs(lib - oracle));
    }
    double worst_identity = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double intensity = std::pow(10.0, rng.uniform(0.5, 4.78));
        worst_identity = std::max(
            worst_identity,
            std::abs(beer::optical_density_delta(intensity, intensity)));
    }
    Outcome out;
    out.passed = worst <= 1e-12 && worst_identity <= 1e-15;
    out.detail = "max |lib - mpfr| " + fmt(worst) + ", max |dD(i,i)| " +
                 fmt(worst_identity);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: drift correction. Channel-common 5%/hour linear drift with
// zero noise and zero signal must leave post-correction concentration RMS
// <= 1e-3 mM over the default plan; with 0.5% baseline noise, at least 95 of
// 100 seeds must stay within 3x the matching no-drift noise floor.
// ---------------------------------------------------------------------------
sim::SimConfig zero_signal_config(std::uint64_t seed, double noise,
                                  bool with_drift) {
    sim::SimConfig config;
    config.target_low = {0.0, 0.0};
    config.target_high = {0.0, 0.0};
    config.noise_sigma = noise;
    config.seed = seed;
    if (with_drift) {
        config.drift.mode = sim::DriftMode::Linear;
        config.drift.rate_per_hour = 0.05;
        config.drift.channel_independent = false;
    }
    return config;
}

double zero_signal_rms(const sim::SimConfig& config) {
    const sim::SimResult result = sim::simulate(config);
    const pipeline::ProcessResult processed =
        pipeline::process_frames(result.frames, config.table, {});
    return concentration_rms(processed.series);
}

Outcome criterion_drift_correction() {
    const double clean_rms = zero_signal_rms(zero_signal_config(1, 0.0, true));

    int within = 0;
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const double drifted = zero_signal_rms(zero_signal_config(seed, 150.0, true));
        const double floor = zero_signal_rms(zero_signal_config(seed, 150.0, false));
        const double ratio = drifted / floor;
        worst_ratio = std::max(worst_ratio, ratio);
        if (drifted <= 3.0 * floor) ++within;
    }

    Outcome out;
    out.passed = clean_rms <= 1e-3 && within >= 95;
    out.detail = "noise-free RMS " + fmt(clean_rms) + " mM, " +
                 std::to_string(within) +
                 "/100 noisy seeds within 3x floor (worst ratio " +
                 fmt(worst_ratio) + ")";
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: zero-phase low-pass contract at 7 Hz / 0.1 Hz cutoff.
// DC gain 1 +- 1e-6, a 1.0 Hz sinusoid attenuated by >= 40 dB, a 0.01 Hz
// sinusoid passed within 1%, and a symmetric pulse stays symmetric.
// ---------------------------------------------------------------------------
double fitted_amplitude(const std::vector<double>& y, double freq_hz,
                        double sample_rate_hz) {
    // Least-squares projection onto sin/cos at freq_hz.
    double ss = 0.0, sc = 0.0, cc = 0.0, sy = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        const double s = std::sin(2.0 * M_PI * freq_hz * t);
        const double c = std::cos(2.0 * M_PI * freq_hz * t);
        ss += s * s;
        sc += s * c;
        cc += c * c;
        sy += s * y[i];
        cy += c * y[i];
    }
    const double det = ss * cc - sc * sc;
    const double a = (cy * ss - sy * sc) / det;
    const double b = (sy * cc - cy * sc) / det;
    return std::hypot(a, b);
}

Outcome criterion_filter_contract() {
    constexpr double kRate = 7.0;
    constexpr std::size_t kLength = 6720;

    std::vector<double> constant(kLength, 5.0);
    const std::vector<double> dc = dsp::lowpass(constant, kRate);
    double dc_err = 0.0;
    for (double v : dc) dc_err = std::max(dc_err, std::abs(v - 5.0) / 5.0);

    std::vector<double> fast(kLength);
    for (std::size_t i = 0; i < kLength; ++i) {
        fast[i] = std::sin(2.0 * M_PI * 1.0 * static_cast<double>(i) / kRate);
    }
    const std::vector<double> stopband = dsp::lowpass(fast, kRate);
    double stop_peak = 0.0;
    for (double v : stopband) stop_peak = std::max(stop_peak, std::abs(v));
    const double attenuation_db = -20.0 * std::log10(std::max(stop_peak, 1e-300));

    std::vector<double> slow(kLength);
    for (std::size_t i = 0; i < kLength; ++i) {
        slow[i] = std::sin(2.0 * M_PI * 0.01 * static_cast<double>(i) / kRate);
    }
    const double passband_amp = fitted_amplitude(dsp::lowpass(slow, kRate), 0.01, kRate);

    constexpr std::size_t kPulseLength = 1401;
    constexpr std::size_t kCenter = 700;
    std::vector<double> pulse(kPulseLength);
    for (std::size_t i = 0; i < kPulseLength; ++i) {
        const double z = (static_cast<double>(i) - static_cast<double>(kCenter)) / 40.0;
        pulse[i] = std::exp(-0.5 * z * z);
    }
    const std::vector<double> smoothed = dsp::lowpass(pulse, kRate);
    double peak = 0.0;
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < smoothed.size(); ++i) {
        if (std::abs(smoothed[i]) > peak) {
            peak = std::abs(smoothed[i]);
            argmax = i;
        }
    }
    double asymmetry = 0.0;
    for (std::size_t k = 0; k <= kCenter; ++k) {
        asymmetry = std::max(asymmetry, std::abs(smoothed[kCenter + k] -
                                                 smoothed[kCenter - k]));
    }

    const bool dc_ok = dc_err <= 1e-6;
    const bool stop_ok = attenuation_db >= 40.0;
    const bool pass_ok = std::abs(passband_amp - 1.0) <= 0.01;
    const bool pulse_ok = asymmetry <= 1e-9 * peak && argmax == kCenter;

    Outcome out;
    out.passed = dc_ok && stop_ok && pass_ok && pulse_ok;
    out.detail = "DC err " + fmt(dc_err) + ", 1 Hz attenuation " +
                 fmt(attenuation_db) + " dB, 0.01 Hz amp " + fmt(passband_amp) +
                 ", pulse asymmetry " + fmt(asymmetry / peak) + " of peak";
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: windowing arithmetic. 140 samples -> exactly 3 windows and a
// full 960 s session (6720 samples) -> 191 windows, both verified against a
// brute-force enumeration of start indices and midpoint labels.
// ---------------------------------------------------------------------------
dsp::FourChannelSeries series_with_times(std::vector<double> times) {
    dsp::FourChannelSeries series;
    const std::size_t n = times.size();
    series.times = std::move(times);
    series.ir1.resize(n);
    series.ir2.resize(n);
    series.d_chbo2.resize(n);
    series.d_chb.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        series.ir1[i] = 100.0 + std::sin(0.1 * x);
        series.ir2[i] = 90.0 + std::cos(0.2 * x);
        series.d_chbo2[i] = 0.001 * x;
        series.d_chb[i] = -0.0005 * x;
    }
    return series;
}

bool windows_match_brute_force(const dsp::FourChannelSeries& series,
                               const hemopipe::SessionPlan& plan,
                               std::size_t expected_count, std::string* note) {
    const std::vector<dsp::Window> windows = dsp::segment(series, plan, 70, 35);
    std::vector<std::size_t> expected_starts;
    for (std::size_t start = 0; start + 70 <= series.size(); start += 35) {
        expected_starts.push_back(start);
    }
    if (windows.size() != expected_count ||
        expected_starts.size() != expected_count) {
        *note = "count " + std::to_string(windows.size()) + " (brute force " +
                std::to_string(expected_starts.size()) + ", expected " +
                std::to_string(expected_count) + ")";
        return false;
    }
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const std::size_t start = expected_starts[w];
        const double mid =
            0.5 * (series.times[start] + series.times[start + 69]);
        if (windows[w].start_index != start ||
            windows[w].frames.size() != 70 ||
            windows[w].label != hemopipe::label_at(plan, mid)) {
            *note = "window " + std::to_string(w) + " mismatch";
            return false;
        }
    }
    *note = std::to_string(windows.size()) + " windows";
    return true;
}

Outcome criterion_windowing() {
    hemopipe::SessionPlan short_plan;
    short_plan.segments = {{Label::Rest, 30.0}};
    std::vector<double> short_times(140);
    for (std::size_t i = 0; i < short_times.size(); ++i) {
        short_times[i] = static_cast<double>(i) / 7.0;
    }
    std::string short_note;
    const bool short_ok = windows_match_brute_force(
        series_with_times(std::move(short_times)), short_plan, 3, &short_note);

    const hemopipe::SessionPlan plan = hemopipe::default_plan();
    std::string full_note;
    const bool full_ok = windows_match_brute_force(
        series_with_times(sim::nir_tick_times(plan)), plan, 191, &full_note);

    Outcome out;
    out.passed = short_ok && full_ok;
    out.detail = "140 samples: " + short_note + "; 6720 samples: " + full_note;
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: end-to-end classification. Twelve seeded subjects on the
// default plan with 1% baseline noise and 5%/hour drift; stratified 5-fold
// mean accuracy >= 0.95 with blocked accuracy reported alongside, and the
// whole run finishing in under 2 minutes.
// ---------------------------------------------------------------------------
Outcome criterion_end_to_end(double* stratified_out) {
    const pipeline::PipelineConfig config = pipeline::default_pipeline_config();
    Stopwatch watch;
    const pipeline::PipelineResult result = pipeline::run_pipeline(config);
    const double elapsed = watch.seconds();

    Outcome out;
    out.passed = result.stratified_mean_accuracy >= 0.95 && elapsed < 120.0;
    out.detail = "stratified mean " + fmt(result.stratified_mean_accuracy) +
                 ", blocked mean " + fmt(result.blocked_mean_accuracy) +
                 " (reported, no threshold), " +
                 std::to_string(result.subjects.size()) + " subjects, " +
                 fmt(elapsed) + " s";
    if (stratified_out != nullptr) {
        *stratified_out = result.stratified_mean_accuracy;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: chance-level sanity. Shuffling the labels of one subject's
// features must drop 3-class CV accuracy to [0.23, 0.43] averaged across 20
// shuffle seeds; anything higher indicates leakage, anything lower a broken
// evaluator.
// ---------------------------------------------------------------------------
Outcome criterion_label_shuffle() {
    const pipeline::PipelineConfig config = pipeline::default_pipeline_config();
    sim::SimConfig subject = config.sim;
    subject.seed = config.seed;
    const std::vector<features::FeatureVector> dataset =
        pipeline::run_subject(subject, "subject_01", config.process);

    double total = 0.0;
    constexpr int kSeeds = 20;
    for (int s = 1; s <= kSeeds; ++s) {
        std::vector<features::FeatureVector> shuffled = dataset;
        Rng rng(9000 + static_cast<std::uint64_t>(s));
        for (std::size_t i = shuffled.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(shuffled[i].label, shuffled[j].label);
        }
        const forest::CvResult cv = forest::cross_validate(
            shuffled, config.params, static_cast<std::uint64_t>(s), 5,
            forest::CvMode::StratifiedShuffled);
        total += cv.mean_accuracy();
    }
    const double mean = total / kSeeds;

    Outcome out;
    out.passed = mean >= 0.23 && mean <= 0.43;
    out.detail = "shuffled-label accuracy " + fmt(mean) + " averaged over " +
                 std::to_string(kSeeds) + " seeds";
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: determinism. Running the CLI pipeline twice with --seed 42
// must produce byte-identical report.json and model.json.
// ---------------------------------------------------------------------------
std::string read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Outcome criterion_determinism() {
    namespace fs = std::filesystem;
    char tmpl[] = "/tmp/hemopipe-acceptance-XXXXXX";
    if (::mkdtemp(tmpl) == nullptr) {
        return {false, "mkdtemp failed"};
    }
    const fs::path dir(tmpl);

    auto run = [&dir](const std::string& tag) {
        const fs::path report = dir / (tag + "-report.json");
        const fs::path model = dir / (tag + "-model.json");
        const std::string cmd =
            "env -u HEMOPIPE_SEED " HEMOPIPE_CLI_PATH
            " pipeline --seed 42 --report '" + report.string() + "' --model '" +
            model.string() + "' > '" + (dir / (tag + ".log")).string() +
            "' 2>&1";
        const int rc = std::system(cmd.c_str());
        return std::make_tuple(rc, read_bytes(report), read_bytes(model));
    };

    Stopwatch watch;
    const auto [rc1, report1, model1] = run("first");
    const auto [rc2, report2, model2] = run("second");
    const double elapsed = watch.seconds();

    Outcome out;
    out.passed = rc1 == 0 && rc2 == 0 && !report1.empty() && !model1.empty() &&
                 report1 == report2 && model1 == model2;
    out.detail = "report " + std::to_string(report1.size()) + " bytes " +
                 (report1 == report2 ? "identical" : "DIFFER") + ", model " +
                 std::to_string(model1.size()) + " bytes " +
                 (model1 == model2 ? "identical" : "DIFFER") + ", 2 runs in " +
                 fmt(elapsed) + " s";
    std::error_code ec;
    fs::remove_all(dir, ec);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 9: wire codec fuzz. 10,000 frames with seeded deletions and
// single-byte corruptions: the decoder must emit zero checksum-invalid
// frames, recover exactly the untouched frames, report every gap exactly,
// and account for every skipped byte.
// ---------------------------------------------------------------------------
Outcome criterion_wire_fuzz() {
    constexpr std::size_t kFrames = 10000;
    Rng value_rng(31337);
    std::vector<SensorFrame> frames(kFrames);
    for (std::size_t i = 0; i < kFrames; ++i) {
        SensorFrame& frame = frames[i];
        frame.t = static_cast<double>(i) * 0.125;
        if (i % 8 == 0) {
            frame.led = hemopipe::Led::White;
            frame.x = static_cast<double>(value_rng.below(65536));
            frame.y = static_cast<double>(value_rng.below(65536));
            frame.z = static_cast<double>(value_rng.below(65536));
        } else {
            frame.led = hemopipe::Led::Nir;
            frame.ir1 = static_cast<double>(value_rng.below(65536));
            frame.ir2 = static_cast<double>(value_rng.below(65536));
        }
    }
    const std::vector<std::uint8_t> clean = wire::encode_stream(frames);

    enum class Fate { Keep, Delete, Corrupt };
    Rng fuzz_rng(777);
    std::vector<Fate> fates(kFrames, Fate::Keep);
    std::size_t deleted = 0;
    std::size_t corrupted = 0;
    for (std::size_t i = 1; i < kFrames; ++i) {  // frame 0 anchors the sequence
        const double r = fuzz_rng.uniform();
        if (r < 0.08) {
            fates[i] = Fate::Delete;
            ++deleted;
        } else if (r < 0.14) {
            fates[i] = Fate::Corrupt;
            ++corrupted;
        }
    }

    std::vector<std::uint8_t> damaged;
    damaged.reserve(clean.size());
    std::vector<std::uint16_t> survivors;
    for (std::size_t i = 0; i < kFrames; ++i) {
        if (fates[i] == Fate::Delete) continue;
        const std::size_t offset = i * wire::kFrameSize;
        std::array<std::uint8_t, wire::kFrameSize> bytes{};
        std::copy_n(clean.begin() + static_cast<std::ptrdiff_t>(offset),
                    wire::kFrameSize, bytes.begin());
        if (fates[i] == Fate::Corrupt) {
            const std::size_t pos = static_cast<std::size_t>(fuzz_rng.below(16));
            bytes[pos] ^= static_cast<std::uint8_t>(1 + fuzz_rng.below(255));
        } else {
            survivors.push_back(static_cast<std::uint16_t>(i));
        }
        damaged.insert(damaged.end(), bytes.begin(), bytes.end());
    }

    std::vector<wire::SeqGap> expected_gaps;
    for (std::size_t k = 1; k < survivors.size(); ++k) {
        const std::uint16_t missing = static_cast<std::uint16_t>(
            survivors[k] - survivors[k - 1] - 1);
        if (missing != 0) expected_gaps.push_back({survivors[k - 1], missing});
    }

    const wire::DecodeResult decoded = wire::decode_stream(damaged);

    std::string note;
    bool ok = true;
    if (decoded.seqs != survivors) {
        ok = false;
        note = "survivor seq list mismatch (got " +
               std::to_string(decoded.seqs.size()) + ", expected " +
               std::to_string(survivors.size()) + ")";
    }
    if (ok && decoded.bytes_skipped != corrupted * wire::kFrameSize) {
        ok = false;
        note = "bytes_skipped " + std::to_string(decoded.bytes_skipped) +
               ", expected " + std::to_string(corrupted * wire::kFrameSize);
    }
    if (ok) {
        if (decoded.gaps.size() != expected_gaps.size()) {
            ok = false;
            note = "gap count " + std::to_string(decoded.gaps.size()) +
                   ", expected " + std::to_string(expected_gaps.size());
        } else {
            for (std::size_t g = 0; g < expected_gaps.size(); ++g) {
                if (decoded.gaps[g].after_seq != expected_gaps[g].after_seq ||
                    decoded.gaps[g].missing != expected_gaps[g].missing) {
                    ok = false;
                    note = "gap " + std::to_string(g) + " mismatch";
                    break;
                }
            }
        }
    }
    if (ok) {
        // Every emitted frame must re-encode to the exact clean bytes of its
        // sequence slot: proof that no corrupted frame slipped through.
        for (std::size_t k = 0; k < decoded.frames.size(); ++k) {
            const std::array<std::uint8_t, wire::kFrameSize> bytes =
                wire::encode_frame(decoded.frames[k], decoded.seqs[k]);
            const std::size_t offset =
                static_cast<std::size_t>(decoded.seqs[k]) * wire::kFrameSize;
            if (!std::equal(bytes.begin(), bytes.end(),
                            clean.begin() + static_cast<std::ptrdiff_t>(offset))) {
                ok = false;
                note = "frame seq " + std::to_string(decoded.seqs[k]) +
                       " does not match its clean encoding";
                break;
            }
        }
    }
    if (ok) {
        note = std::to_string(survivors.size()) + " survivors recovered, " +
               std::to_string(deleted) + " deleted, " +
               std::to_string(corrupted) + " corrupted, " +
               std::to_string(decoded.gaps.size()) + " gaps exact";
    }
    return {ok, note};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> run;
    };
    double stratified = 0.0;
    const std::vector<Criterion> criteria = {
        {"Beer-Lambert round trip", criterion_round_trip},
        {"optical density vs MPFR oracle", criterion_density_oracle},
        {"drift correction", criterion_drift_correction},
        {"zero-phase filter contract", criterion_filter_contract},
        {"windowing arithmetic", criterion_windowing},
        {"end-to-end classification",
         [&stratified] { return criterion_end_to_end(&stratified); }},
        {"label-shuffle chance level", criterion_label_shuffle},
        {"pipeline determinism", criterion_determinism},
        {"wire codec fuzz", criterion_wire_fuzz},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].run();
        } catch (const std::exception& e) {
            outcome.passed = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        if (!outcome.passed) ++failures;
        std::cout << (outcome.passed ? "[PASS] " : "[FAIL] ") << (i + 1) << ". "
                  << criteria[i].name << " — " << outcome.detail << std::endl;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/"
              << criteria.size() << " acceptance criteria passed" << std::endl;
    return failures;
}
