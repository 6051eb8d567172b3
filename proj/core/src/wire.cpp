#include "hemopipe/wire.hpp"

#include <cmath>

#include "hemopipe/errors.hpp"

namespace hemopipe::wire {

namespace {

void put_u16(std::uint8_t* out, std::uint16_t v) {
    out[0] = static_cast<std::uint8_t>(v & 0xFF);
    out[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::uint8_t* out, std::uint32_t v) {
    out[0] = static_cast<std::uint8_t>(v & 0xFF);
    out[1] = static_cast<std::uint8_t>((v >> 8) & 0xFF);
    out[2] = static_cast<std::uint8_t>((v >> 16) & 0xFF);
    out[3] = static_cast<std::uint8_t>((v >> 24) & 0xFF);
}

std::uint16_t get_u16(const std::uint8_t* in) {
    return static_cast<std::uint16_t>(in[0] | (in[1] << 8));
}

std::uint32_t get_u32(const std::uint8_t* in) {
    return static_cast<std::uint32_t>(in[0]) |
           (static_cast<std::uint32_t>(in[1]) << 8) |
           (static_cast<std::uint32_t>(in[2]) << 16) |
           (static_cast<std::uint32_t>(in[3]) << 24);
}

std::uint16_t to_count(double value, double scale, const char* name) {
    if (!(scale > 0.0)) throw ParameterError("wire scale must be positive");
    const double scaled = value / scale;
    if (!std::isfinite(scaled)) {
        throw RangeError(std::string(name) + " is non-finite");
    }
    const long long rounded = std::llround(scaled);
    if (rounded < 0 || rounded > 65535) {
        throw RangeError(std::string(name) + " out of u16 range after rounding");
    }
    return static_cast<std::uint16_t>(rounded);
}

}  // namespace

std::uint16_t ones_complement_sum(const std::uint8_t* data, std::size_t size) {
    std::uint32_t sum = 0;
    for (std::size_t i = 0; i + 1 < size; i += 2) {
        sum += static_cast<std::uint32_t>(data[i] | (data[i + 1] << 8));
    }
    while (sum >> 16) {
        sum = (sum & 0xFFFF) + (sum >> 16);
    }
    return static_cast<std::uint16_t>(sum);
}

std::array<std::uint8_t, kFrameSize> encode_frame(const SensorFrame& frame,
                                                  std::uint16_t seq,
                                                  double scale) {
    const double t_ms_d = std::round(frame.t * 1000.0);
    if (!(t_ms_d >= 0.0) || t_ms_d > 4294967295.0) {
        throw RangeError("t out of u32 millisecond range");
    }
    const bool white = frame.led == Led::White;
    const std::uint16_t ch_a = white ? to_count(frame.y, scale, "y")
                                     : to_count(frame.ir1, scale, "ir1");
    const std::uint16_t ch_b = white ? to_count(frame.z, scale, "z")
                                     : to_count(frame.ir2, scale, "ir2");

    std::array<std::uint8_t, kFrameSize> out{};
    out[0] = kMagic0;
    out[1] = kMagic1;
    out[2] = kVersion;
    out[3] = white ? 0 : 1;
    put_u16(&out[4], seq);
    put_u32(&out[6], static_cast<std::uint32_t>(t_ms_d));
    put_u16(&out[10], ch_a);
    put_u16(&out[12], ch_b);
    put_u16(&out[14], ones_complement_sum(out.data(), 14));
    return out;
}

std::vector<std::uint8_t> encode_stream(const std::vector<SensorFrame>& frames,
                                        double scale) {
    std::vector<std::uint8_t> out;
    out.reserve(frames.size() * kFrameSize);
    std::uint16_t seq = 0;
    for (const auto& frame : frames) {
        const auto bytes = encode_frame(frame, seq, scale);
        out.insert(out.end(), bytes.begin(), bytes.end());
        ++seq;  // wraps modulo 65536 by unsigned arithmetic
    }
    return out;
}

DecodeResult decode_stream(const std::uint8_t* data, std::size_t size,
                           double scale) {
    if (!(scale > 0.0)) throw ParameterError("wire scale must be positive");
    DecodeResult result;
    bool have_prev = false;
    std::uint16_t prev_seq = 0;
    std::size_t offset = 0;
    while (offset + kFrameSize <= size) {
        const std::uint8_t* p = data + offset;
        const bool valid = p[0] == kMagic0 && p[1] == kMagic1 &&
                           p[2] == kVersion && (p[3] == 0 || p[3] == 1) &&
                           get_u16(p + 14) == ones_complement_sum(p, 14);
        if (!valid) {
            ++offset;
            ++result.bytes_skipped;
            continue;
        }
        const std::uint16_t seq = get_u16(p + 4);
        SensorFrame frame;
        frame.t = static_cast<double>(get_u32(p + 6)) / 1000.0;
        const double ch_a = static_cast<double>(get_u16(p + 10)) * scale;
        const double ch_b = static_cast<double>(get_u16(p + 12)) * scale;
        if (p[3] == 0) {
            frame.led = Led::White;
            frame.y = ch_a;
            frame.z = ch_b;
        } else {
            frame.led = Led::Nir;
            frame.ir1 = ch_a;
            frame.ir2 = ch_b;
        }
        if (have_prev) {
            const std::uint16_t expected =
                static_cast<std::uint16_t>(prev_seq + 1);
            if (seq != expected) {
                SeqGap gap;
                gap.after_seq = prev_seq;
                gap.missing = static_cast<std::uint16_t>(seq - expected);
                result.gaps.push_back(gap);
            }
        }
        have_prev = true;
        prev_seq = seq;
        result.frames.push_back(frame);
        result.seqs.push_back(seq);
        offset += kFrameSize;
    }
    result.bytes_skipped += size - offset;
    return result;
}

DecodeResult decode_stream(const std::vector<std::uint8_t>& bytes,
                           double scale) {
    return decode_stream(bytes.data(), bytes.size(), scale);
}

}  // namespace hemopipe::wire
