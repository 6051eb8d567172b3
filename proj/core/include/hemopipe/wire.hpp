#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "hemopipe/types.hpp"

namespace hemopipe::wire {

// 16-byte frame layout, little-endian:
//   magic 0xC0 0x6D | version u8 | led u8 | seq u16 | t_ms u32 |
//   ch_a u16 | ch_b u16 | checksum u16
// For White frames ch_a = Y and ch_b = Z (X is dropped on the wire); for
// Nir frames ch_a = IR1 and ch_b = IR2. The checksum is the one's-complement
// sum (end-around carry) of the preceding 14 bytes taken as 7 little-endian
// u16 words.
inline constexpr std::size_t kFrameSize = 16;
inline constexpr std::uint8_t kMagic0 = 0xC0;
inline constexpr std::uint8_t kMagic1 = 0x6D;
inline constexpr std::uint8_t kVersion = 1;

// One's-complement sum of size bytes (size even) as little-endian u16 words.
std::uint16_t ones_complement_sum(const std::uint8_t* data, std::size_t size);

// Encodes one frame. `scale` converts channel values to wire counts
// (count = round(value / scale)). Throws RangeError when a rounded count
// leaves 0..65535 or t_ms overflows u32.
std::array<std::uint8_t, kFrameSize> encode_frame(const SensorFrame& frame,
                                                  std::uint16_t seq,
                                                  double scale = 1.0);

// Encodes frames with sequence numbers 0, 1, 2, ... (mod 65536).
std::vector<std::uint8_t> encode_stream(const std::vector<SensorFrame>& frames,
                                        double scale = 1.0);

// A detected discontinuity: `missing` frames were lost after `after_seq`.
struct SeqGap {
    std::uint16_t after_seq = 0;
    std::uint16_t missing = 0;
};

struct DecodeResult {
    std::vector<SensorFrame> frames;
    std::vector<std::uint16_t> seqs;  // aligned with frames
    std::vector<SeqGap> gaps;
    std::size_t bytes_skipped = 0;  // bytes dropped while resynchronizing
};

// Single-pass decoder. A frame is emitted only when magic, version, led and
// checksum all verify; otherwise the scanner advances one byte and retries
// (resynchronization). Sequence gaps are computed modulo 65536.
DecodeResult decode_stream(const std::uint8_t* data, std::size_t size,
                           double scale = 1.0);
DecodeResult decode_stream(const std::vector<std::uint8_t>& bytes,
                           double scale = 1.0);

}  // namespace hemopipe::wire
