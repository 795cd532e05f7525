#include "softppg/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "softppg/error.hpp"

namespace softppg {

namespace {

constexpr std::uint16_t format_pcm = 1;
constexpr std::uint16_t format_extensible = 0xFFFE;

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
           (static_cast<std::uint32_t>(b[at + 2]) << 16) |
           (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

bool tag_is(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
    return std::memcmp(b.data() + at, tag, 4) == 0;
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>((v >> s) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

[[noreturn]] void bad(const std::string& msg) { fail(ErrorKind::invalid_format, "wav: " + msg); }

}  // namespace

SampledSignal decode_wav(std::span<const std::uint8_t> b) {
    if (b.size() < 12) bad("truncated header at byte offset " + std::to_string(b.size()));
    if (!tag_is(b, 0, "RIFF")) bad("container: expected RIFF at byte offset 0");
    if (!tag_is(b, 8, "WAVE")) bad("form type: expected WAVE at byte offset 8");

    bool have_fmt = false;
    std::uint32_t sample_rate = 0;
    std::size_t at = 12;
    while (at < b.size()) {
        if (b.size() - at < 8) bad("truncated chunk header at byte offset " + std::to_string(at));
        const std::size_t size = le32(b, at + 4);
        const std::size_t body = at + 8;
        const std::size_t available = b.size() - body;

        if (tag_is(b, at, "fmt ")) {
            if (size < 16 || available < 16) bad("truncated fmt chunk at byte offset " + std::to_string(at));
            std::uint16_t format = le16(b, body);
            const std::uint16_t channels = le16(b, body + 2);
            sample_rate = le32(b, body + 4);
            const std::uint16_t bits = le16(b, body + 14);
            if (format == format_extensible && size >= 40 && available >= 40) {
                format = le16(b, body + 24);  // first two bytes of the sub-format GUID
            }
            if (format != format_pcm)
                bad("audio_format: expected 1 (PCM), got " + std::to_string(format));
            if (channels != 1) bad("channels: expected 1, got " + std::to_string(channels));
            if (bits != 16) bad("bits_per_sample: expected 16, got " + std::to_string(bits));
            if (sample_rate == 0) bad("sample_rate: expected > 0, got 0");
            have_fmt = true;
        } else if (tag_is(b, at, "data")) {
            if (!have_fmt) bad("data chunk before fmt chunk at byte offset " + std::to_string(at));
            if (size > available)
                bad("truncated data chunk at byte offset " + std::to_string(at) + ": declares " +
                    std::to_string(size) + " bytes, " + std::to_string(available) + " present");
            if (size % 2 != 0) bad("data chunk size " + std::to_string(size) + " is not a whole number of 16-bit samples");
            std::vector<double> samples(size / 2);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const auto raw = static_cast<std::int16_t>(le16(b, body + 2 * i));
                samples[i] = static_cast<double>(raw) / 32768.0;
            }
            return SampledSignal(std::move(samples), static_cast<double>(sample_rate));
        }
        if (size > available) bad("truncated chunk at byte offset " + std::to_string(at));
        at = body + size + (size % 2);
    }
    bad(have_fmt ? "missing data chunk" : "missing fmt chunk");
}

SampledSignal read_wav(std::istream& in) {
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_wav(bytes);
}

SampledSignal read_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), ErrorKind::io, "cannot open " + path.string());
    try {
        return read_wav(in);
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.what());
    }
}

WavEncoding encode_wav(const SampledSignal& signal) {
    WavEncoding enc;
    const std::size_t n = signal.size();
    const auto data_bytes = static_cast<std::uint32_t>(2 * n);
    const auto rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate()));

    auto& out = enc.bytes;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put32(out, 16);
    put16(out, format_pcm);
    put16(out, 1);         // channels
    put32(out, rate);
    put32(out, rate * 2);  // byte rate
    put16(out, 2);         // block align
    put16(out, 16);        // bits per sample
    put_tag(out, "data");
    put32(out, data_bytes);

    for (double v : signal.samples()) {
        if (v > 1.0 || v < -1.0) ++enc.clamped;
        const double clamped = std::clamp(v, -1.0, 1.0);
        const long q = std::clamp(std::lround(clamped * 32768.0), -32768L, 32767L);
        put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    return enc;
}

std::size_t write_wav(const SampledSignal& signal, std::ostream& out) {
    const auto enc = encode_wav(signal);
    out.write(reinterpret_cast<const char*>(enc.bytes.data()),
              static_cast<std::streamsize>(enc.bytes.size()));
    require(out.good(), ErrorKind::io, "write failed");
    return enc.clamped;
}

std::size_t write_wav(const SampledSignal& signal, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), ErrorKind::io, "cannot open " + path.string() + " for writing");
    try {
        return write_wav(signal, out);
    } catch (const Error& e) {
        fail(e.kind(), path.string() + ": " + e.what());
    }
}

}  // namespace softppg
