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

#include "tcdistill/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <vector>

#include <json.hpp>

namespace tcd {

namespace fs = std::filesystem;

namespace {

struct Pnm {
    char kind = 0;  // '5' or '6'
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> bytes;
};

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
    throw DatasetError(path.string() + ": " + what);
}

Pnm read_pnm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open");
    const std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t pos = 0;
    auto skip_space_and_comments = [&] {
        while (pos < raw.size()) {
            if (raw[pos] == '#') {
                while (pos < raw.size() && raw[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(raw[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    auto read_uint = [&]() -> std::size_t {
        skip_space_and_comments();
        if (pos >= raw.size() || !std::isdigit(static_cast<unsigned char>(raw[pos]))) {
            fail(path, "malformed header");
        }
        std::size_t v = 0;
        while (pos < raw.size() && std::isdigit(static_cast<unsigned char>(raw[pos]))) {
            v = v * 10 + static_cast<std::size_t>(raw[pos] - '0');
            if (v > (1u << 24)) fail(path, "header value too large");
            ++pos;
        }
        return v;
    };

    if (raw.size() < 2 || raw[0] != 'P' || (raw[1] != '5' && raw[1] != '6')) {
        fail(path, "not a binary PGM/PPM file");
    }
    Pnm pnm;
    pnm.kind = raw[1];
    pos = 2;
    pnm.width = read_uint();
    pnm.height = read_uint();
    const std::size_t maxval = read_uint();
    if (maxval != 255) fail(path, "only 8-bit (maxval 255) images are supported");
    if (pnm.width == 0 || pnm.height == 0) fail(path, "zero-area image");
    if (pos >= raw.size() || !std::isspace(static_cast<unsigned char>(raw[pos]))) {
        fail(path, "malformed header");
    }
    ++pos;
    const std::size_t channels = pnm.kind == '6' ? 3 : 1;
    const std::size_t need = pnm.width * pnm.height * channels;
    if (raw.size() - pos < need) fail(path, "truncated pixel data");
    pnm.bytes.assign(raw.begin() + static_cast<std::ptrdiff_t>(pos),
                     raw.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return pnm;
}

void write_pnm(const fs::path& path, char kind, std::size_t w, std::size_t h, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open for writing");
    out << 'P' << kind << '\n' << w << ' ' << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(path, "write failed");
}

std::uint8_t quantize(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

std::size_t meta_field(const nlohmann::json& meta, const char* key, const fs::path& path) {
    if (!meta.contains(key) || !meta[key].is_number_unsigned()) {
        fail(path, std::string("missing or non-integer field \"") + key + "\"");
    }
    return meta[key].get<std::size_t>();
}

}  // namespace

std::string frame_file_name(std::size_t index, const char* extension) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06zu.%s", index, extension);
    return buf;
}

ColorImage read_ppm(const fs::path& path) {
    Pnm pnm = read_pnm(path);
    if (pnm.kind != '6') fail(path, "expected P6 color image");
    std::vector<double> data(pnm.bytes.begin(), pnm.bytes.end());
    return ColorImage(pnm.width, pnm.height, std::move(data));
}

void write_ppm(const fs::path& path, const ColorImage& img) {
    std::vector<std::uint8_t> bytes(img.data().size());
    std::transform(img.data().begin(), img.data().end(), bytes.begin(), quantize);
    write_pnm(path, '6', img.width(), img.height(), bytes);
}

ClassMask read_mask_pgm(const fs::path& path, std::size_t classes) {
    Pnm pnm = read_pnm(path);
    if (pnm.kind != '5') fail(path, "expected P5 mask");
    for (std::uint8_t v : pnm.bytes) {
        if (v >= classes) {
            fail(path, "mask class index " + std::to_string(v) + " >= declared classes " + std::to_string(classes));
        }
    }
    return ClassMask(pnm.width, pnm.height, classes, std::move(pnm.bytes));
}

void write_mask_pgm(const fs::path& path, const ClassMask& mask) {
    write_pnm(path, '5', mask.width(), mask.height(), {mask.data().begin(), mask.data().end()});
}

GrayImage read_gray(const fs::path& path) {
    Pnm pnm = read_pnm(path);
    if (pnm.kind == '6') {
        std::vector<double> data(pnm.bytes.begin(), pnm.bytes.end());
        return to_gray(ColorImage(pnm.width, pnm.height, std::move(data)));
    }
    std::vector<double> data(pnm.bytes.begin(), pnm.bytes.end());
    return GrayImage(pnm.width, pnm.height, std::move(data));
}

VideoSequence load_sequence(const fs::path& root) {
    const fs::path meta_path = root / "meta.json";
    std::ifstream in(meta_path);
    if (!in) fail(meta_path, "cannot open");
    nlohmann::json meta;
    try {
        in >> meta;
    } catch (const nlohmann::json::exception& e) {
        fail(meta_path, std::string("invalid JSON: ") + e.what());
    }
    const std::size_t classes = meta_field(meta, "classes", meta_path);
    const std::size_t n = meta_field(meta, "num_frames", meta_path);
    const std::size_t w = meta_field(meta, "width", meta_path);
    const std::size_t h = meta_field(meta, "height", meta_path);
    if (classes < 1 || classes > ClassMask::max_classes) fail(meta_path, "classes must be in [1, 256]");

    const fs::path frame_dir = root / "frames";
    const fs::path mask_dir = root / "masks";
    const bool has_masks = fs::is_directory(mask_dir);

    std::vector<ColorImage> frames;
    std::vector<ClassMask> masks;
    for (std::size_t i = 0; i < n; ++i) {
        const fs::path fp = frame_dir / frame_file_name(i, "ppm");
        if (!fs::exists(fp)) fail(fp, "missing frame index " + frame_file_name(i, "ppm").substr(0, 6));
        ColorImage img = read_ppm(fp);
        if (img.width() != w || img.height() != h) {
            fail(fp, "dimension mismatch: " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                         " vs meta " + std::to_string(w) + "x" + std::to_string(h));
        }
        frames.push_back(std::move(img));
        if (has_masks) {
            const fs::path mp = mask_dir / frame_file_name(i, "pgm");
            if (!fs::exists(mp)) fail(mp, "missing mask index " + frame_file_name(i, "pgm").substr(0, 6));
            ClassMask m = read_mask_pgm(mp, classes);
            if (m.width() != w || m.height() != h) fail(mp, "dimension mismatch with meta");
            masks.push_back(std::move(m));
        }
    }
    // files beyond num_frames mean meta.json and the directory disagree
    if (fs::exists(frame_dir / frame_file_name(n, "ppm"))) {
        fail(frame_dir / frame_file_name(n, "ppm"), "frame beyond num_frames declared in meta.json");
    }
    return VideoSequence(std::move(frames), std::move(masks), classes);
}

void save_sequence(const VideoSequence& seq, const fs::path& root) {
    fs::create_directories(root / "frames");
    for (std::size_t i = 0; i < seq.size(); ++i) {
        write_ppm(root / "frames" / frame_file_name(i, "ppm"), seq.frame(i));
    }
    if (seq.has_truth()) {
        fs::create_directories(root / "masks");
        for (std::size_t i = 0; i < seq.size(); ++i) {
            write_mask_pgm(root / "masks" / frame_file_name(i, "pgm"), seq.truth(i));
        }
    }
    nlohmann::json meta = {
        {"classes", seq.classes()}, {"num_frames", seq.size()}, {"width", seq.width()}, {"height", seq.height()}};
    std::ofstream out(root / "meta.json");
    if (!out) fail(root / "meta.json", "cannot open for writing");
    out << meta.dump(2) << '\n';
}

}  // namespace tcd
