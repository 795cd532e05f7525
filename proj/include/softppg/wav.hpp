#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "softppg/signal.hpp"

namespace softppg {

// RIFF/WAVE, PCM 16-bit little-endian, mono. Samples map to [-1, 1) by
// division by 32768; any sample rate stored in the header is accepted.
// WAVE_FORMAT_EXTENSIBLE headers are accepted when their sub-format is PCM.
SampledSignal decode_wav(std::span<const std::uint8_t> bytes);
SampledSignal read_wav(const std::filesystem::path& path);
SampledSignal read_wav(std::istream& in);

struct WavEncoding {
    std::vector<std::uint8_t> bytes;
    std::size_t clamped = 0;  // samples outside [-1, 1] that were clamped
};

// Full scale +1.0 is written as 32767, -1.0 as -32768.
WavEncoding encode_wav(const SampledSignal& signal);

// Returns the number of clamped samples so callers can warn.
std::size_t write_wav(const SampledSignal& signal, const std::filesystem::path& path);
std::size_t write_wav(const SampledSignal& signal, std::ostream& out);

}  // namespace softppg
