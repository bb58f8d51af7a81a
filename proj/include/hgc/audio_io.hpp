#pragma once

#include <string>
#include <vector>

namespace hgc {

struct AudioClip {
  std::vector<double> samples;  // normalized to [-1, 1]
  int sample_rate = 16000;
};

// Reads a 16 kHz mono 16-bit PCM WAV. Samples are int16 / 32768. Anything
// else (other rates, channel counts, encodings, bit depths) is rejected with
// a ValidationError naming the offending header field; a missing or
// unreadable file is an IoError.
AudioClip read_wav(const std::string& path);

// Writes 16-bit PCM mono with the canonical 44-byte header (file size is
// 44 + 2N). Samples are clamped to [-1, 32767/32768] before quantization.
void write_wav(const std::string& path, const AudioClip& clip);

}  // namespace hgc
