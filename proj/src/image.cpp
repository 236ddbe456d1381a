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

#include "tcdistill/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcd {

namespace {

void require_area(std::size_t width, std::size_t height, const char* what) {
    if (width == 0 || height == 0) {
        throw std::invalid_argument(std::string(what) + ": zero-area image");
    }
}

void require_size(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": data length " + std::to_string(got) +
                                    " does not match expected " + std::to_string(want));
    }
}

bool in_byte_range(double v) { return v >= 0.0 && v <= 255.0; }

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    require_area(width_, height_, "GrayImage");
    require_size(data_.size(), width_ * height_, "GrayImage");
    if (!std::all_of(data_.begin(), data_.end(), in_byte_range)) {
        throw std::invalid_argument("GrayImage: value outside [0, 255]");
    }
}

GrayImage GrayImage::filled(std::size_t width, std::size_t height, double value) {
    return GrayImage(width, height, std::vector<double>(width * height, value));
}

ColorImage::ColorImage(std::size_t width, std::size_t height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
    require_area(width_, height_, "ColorImage");
    require_size(data_.size(), 3 * width_ * height_, "ColorImage");
    if (!std::all_of(data_.begin(), data_.end(), in_byte_range)) {
        throw std::invalid_argument("ColorImage: channel value outside [0, 255]");
    }
}

ColorImage ColorImage::filled(std::size_t width, std::size_t height, double r, double g, double b) {
    std::vector<double> data(3 * width * height);
    for (std::size_t i = 0; i < width * height; ++i) {
        data[3 * i] = r;
        data[3 * i + 1] = g;
        data[3 * i + 2] = b;
    }
    return ColorImage(width, height, std::move(data));
}

ClassMask::ClassMask(std::size_t width, std::size_t height, std::size_t classes,
                     std::vector<std::uint8_t> data)
    : width_(width), height_(height), classes_(classes), data_(std::move(data)) {
    require_area(width_, height_, "ClassMask");
    require_size(data_.size(), width_ * height_, "ClassMask");
    if (classes_ == 0 || classes_ > max_classes) {
        throw std::invalid_argument("ClassMask: class count must be in [1, 256]");
    }
    for (std::uint8_t v : data_) {
        if (v >= classes_) {
            throw std::invalid_argument("ClassMask: class index " + std::to_string(v) +
                                        " >= declared classes " + std::to_string(classes_));
        }
    }
}

ClassMask ClassMask::filled(std::size_t width, std::size_t height, std::size_t classes, std::uint8_t label) {
    return ClassMask(width, height, classes, std::vector<std::uint8_t>(width * height, label));
}

SoftMask::SoftMask(std::size_t width, std::size_t height, std::size_t classes, std::vector<double> data)
    : width_(width), height_(height), classes_(classes), data_(std::move(data)) {
    require_area(width_, height_, "SoftMask");
    if (classes_ == 0) throw std::invalid_argument("SoftMask: zero classes");
    require_size(data_.size(), width_ * height_ * classes_, "SoftMask");
    for (std::size_t i = 0; i < pixels(); ++i) {
        double sum = 0.0;
        for (double p : pixel(i)) {
            if (!(p >= 0.0)) throw std::invalid_argument("SoftMask: negative or non-finite probability");
            sum += p;
        }
        if (std::fabs(sum - 1.0) > normalization_tolerance) {
            throw std::invalid_argument("SoftMask: pixel " + std::to_string(i) + " sums to " + std::to_string(sum));
        }
    }
}

SoftMask SoftMask::uniform(std::size_t width, std::size_t height, std::size_t classes) {
    if (classes == 0) throw std::invalid_argument("SoftMask: zero classes");
    return SoftMask(width, height, classes,
                    std::vector<double>(width * height * classes, 1.0 / static_cast<double>(classes)));
}

VideoSequence::VideoSequence(std::vector<ColorImage> frames, std::vector<ClassMask> truth, std::size_t classes)
    : frames_(std::move(frames)), truth_(std::move(truth)), classes_(classes) {
    for (const auto& f : frames_) {
        if (f.width() != width() || f.height() != height()) {
            throw std::invalid_argument("VideoSequence: frames differ in dimensions");
        }
    }
    if (truth_.empty()) return;
    if (truth_.size() != frames_.size()) {
        throw std::invalid_argument("VideoSequence: ground truth length differs from frame count");
    }
    for (const auto& m : truth_) {
        if (m.width() != width() || m.height() != height()) {
            throw std::invalid_argument("VideoSequence: ground truth dimensions differ from frames");
        }
        if (m.classes() != classes_) {
            throw std::invalid_argument("VideoSequence: ground truth class count differs from sequence");
        }
    }
}

GrayImage to_gray(const ColorImage& img) {
    std::vector<double> out(img.pixels());
    const auto rgb = img.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double y = 0.299 * rgb[3 * i] + 0.587 * rgb[3 * i + 1] + 0.114 * rgb[3 * i + 2];
        out[i] = std::clamp(y, 0.0, 255.0);
    }
    return GrayImage(img.width(), img.height(), std::move(out));
}

}  // namespace tcd
