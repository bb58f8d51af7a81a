#include "hgc/audio_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "hgc/common.hpp"

namespace hgc {
namespace {

constexpr int kRequiredRate = 16000;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

AudioClip read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open wav file: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on wav file: " + path);

  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw ValidationError("not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* data = nullptr;
  std::size_t data_size = 0;

  // Chunk walk; unknown chunks are skipped.
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* hdr = bytes.data() + pos;
    const std::uint32_t size = read_u32(hdr + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      throw ValidationError("truncated chunk in wav file: " + path);
    }
    if (std::memcmp(hdr, "fmt ", 4) == 0) {
      if (size < 16) throw ValidationError("fmt chunk too small in wav file: " + path);
      const unsigned char* f = bytes.data() + body;
      format = read_u16(f + 0);
      channels = read_u16(f + 2);
      rate = read_u32(f + 4);
      bits = read_u16(f + 14);
      have_fmt = true;
    } else if (std::memcmp(hdr, "data", 4) == 0) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1);  // chunks are word aligned
  }

  if (!have_fmt) throw ValidationError("missing fmt chunk in wav file: " + path);
  if (data == nullptr) throw ValidationError("missing data chunk in wav file: " + path);
  if (format != 1) {
    throw ValidationError("format tag " + std::to_string(format) +
                          " is not PCM in wav file: " + path);
  }
  if (channels != 1) {
    throw ValidationError("channels " + std::to_string(channels) +
                          " unsupported (mono only) in wav file: " + path);
  }
  if (bits != 16) {
    throw ValidationError("bits_per_sample " + std::to_string(bits) +
                          " unsupported (16 only) in wav file: " + path);
  }
  if (rate != kRequiredRate) {
    throw ValidationError("sample_rate " + std::to_string(rate) + " unsupported (" +
                          std::to_string(kRequiredRate) + " only) in wav file: " + path);
  }

  AudioClip clip;
  clip.sample_rate = static_cast<int>(rate);
  const std::size_t n = data_size / 2;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int16_t v =
        static_cast<std::int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    clip.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return clip;
}

void write_wav(const std::string& path, const AudioClip& clip) {
  if (clip.sample_rate <= 0) throw ValidationError("sample_rate must be positive");
  const std::size_t n = clip.samples.size();
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(2 * n);

  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 16);
  put_u16(out, 1);  // PCM
  put_u16(out, 1);  // mono
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate));
  put_u32(out, static_cast<std::uint32_t>(clip.sample_rate * 2));  // byte rate
  put_u16(out, 2);   // block align
  put_u16(out, 16);  // bits
  out += "data";
  put_u32(out, data_bytes);

  constexpr double kMax = 32767.0 / 32768.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = std::clamp(clip.samples[i], -1.0, kMax);
    const long q = std::lround(s * 32768.0);
    put_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failure: " + path);
}

}  // namespace hgc
