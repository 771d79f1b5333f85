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

#pragma once

#include <string>

#include "yangsaf/audio.hpp"

namespace yangsaf {

/// Reads a mono RIFF/WAVE file in 16-bit PCM or 32-bit IEEE float.
/// Throws IoError (with byte offset) on malformed input and on anything
/// other than one channel.
AudioBuffer read_wav(const std::string& path);

/// Writes 32-bit float mono. The file is written to a temporary name and
/// renamed, so a failed write leaves nothing behind.
void write_wav(const std::string& path, const AudioBuffer& x);

}  // namespace yangsaf
