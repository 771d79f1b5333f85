//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "yangsaf/wav.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <vector>

namespace yangsaf {
namespace {

std::uint32_t le32(const std::vector<unsigned char>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t le16(const std::vector<unsigned char>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

[[noreturn]] void fail(const std::string& path, std::size_t offset, const std::string& what) {
  throw IoError(path + ": " + what + " (at byte " + std::to_string(offset) + ")");
}

void put32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put16(std::vector<unsigned char>& b, std::uint16_t v) {
  b.push_back(static_cast<unsigned char>(v));
  b.push_back(static_cast<unsigned char>(v >> 8));
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  const std::vector<unsigned char> b((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (b.size() < 12) fail(path, b.size(), "truncated RIFF header");
  if (std::memcmp(b.data(), "RIFF", 4) != 0) fail(path, 0, "missing RIFF tag");
  if (std::memcmp(b.data() + 8, "WAVE", 4) != 0) fail(path, 8, "missing WAVE tag");

  std::size_t pos = 12;
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  while (pos + 8 <= b.size()) {
    const std::string id(reinterpret_cast<const char*>(b.data() + pos), 4);
    const std::uint32_t size = le32(b, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > b.size()) fail(path, pos, "chunk '" + id + "' runs past end of file");
    if (id == "fmt ") {
      if (size < 16) fail(path, pos, "fmt chunk too short");
      format = le16(b, body);
      channels = le16(b, body + 2);
      rate = le32(b, body + 4);
      bits = le16(b, body + 14);
      // WAVE_FORMAT_EXTENSIBLE carries the real format in the sub-GUID.
      if (format == 0xFFFE && size >= 26) format = le16(b, body + 24);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) fail(path, pos, "data chunk before fmt chunk");
      if (channels != 1)
        fail(path, pos, "unsupported channel count " + std::to_string(channels) + " (mono required)");
      if (rate == 0) fail(path, pos, "zero sample rate");
      std::vector<double> samples;
      if (format == 1 && bits == 16) {
        samples.resize(size / 2);
        for (std::size_t i = 0; i < samples.size(); ++i)
          samples[i] = static_cast<std::int16_t>(le16(b, body + 2 * i)) / 32768.0;
      } else if (format == 3 && bits == 32) {
        samples.resize(size / 4);
        for (std::size_t i = 0; i < samples.size(); ++i) {
          const std::uint32_t u = le32(b, body + 4 * i);
          float f;
          std::memcpy(&f, &u, 4);
          samples[i] = f;
        }
      } else {
        fail(path, pos, "unsupported sample format " + std::to_string(format) + "/" +
                            std::to_string(bits) + " bit (PCM16 or float32 required)");
      }
      if (samples.empty()) fail(path, pos, "empty data chunk");
      try {
        return AudioBuffer(std::move(samples), rate);
      } catch (const ParameterError& e) {
        fail(path, body, e.what());
      }
    }
    pos = body + size + (size & 1);
  }
  fail(path, pos, have_fmt ? "no data chunk" : "no fmt chunk");
}

void write_wav(const std::string& path, const AudioBuffer& x) {
  const auto n = static_cast<std::uint32_t>(x.size());
  const auto rate = static_cast<std::uint32_t>(std::lround(x.sample_rate()));
  std::vector<unsigned char> b;
  b.reserve(44 + 4 * x.size());
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  put32(b, 36 + 4 * n);
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(b, 16);
  put16(b, 3);
  put16(b, 1);
  put32(b, rate);
  put32(b, rate * 4);
  put16(b, 4);
  put16(b, 32);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  put32(b, 4 * n);
  for (double s : x.samples()) {
    const float f = static_cast<float>(s);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    put32(b, u);
  }
  const std::string tmp = path + ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw IoError(path + ": write failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace yangsaf
