// Copyright 2026 The tcdistill Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dataset directory layout:
//
//   <root>/meta.json          {"classes": C, "num_frames": N, "width": W, "height": H}
//   <root>/frames/%06d.ppm    binary P6, 8-bit
//   <root>/masks/%06d.pgm     optional, binary P5, pixel value = class index
//
// Frame indices are contiguous from 0. Real-valued pixels are rounded to the
// nearest byte on write.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>

#include "tcdistill/image.hpp"

namespace tcd {

/// Raised for malformed files and layout violations; message names the path.
class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string frame_file_name(std::size_t index, const char* extension);

ColorImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const ColorImage& img);

/// Reads a P5 mask and validates every value against `classes`.
ClassMask read_mask_pgm(const std::filesystem::path& path, std::size_t classes);
void write_mask_pgm(const std::filesystem::path& path, const ClassMask& mask);

/// Reads either P5 or P6 and reduces it to luma.
GrayImage read_gray(const std::filesystem::path& path);

VideoSequence load_sequence(const std::filesystem::path& root);
void save_sequence(const VideoSequence& seq, const std::filesystem::path& root);

}  // namespace tcd
