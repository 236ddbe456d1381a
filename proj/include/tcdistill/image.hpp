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

// Raster types shared by every stage of the pipeline. All of them validate
// their invariants on construction and are immutable afterwards.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tcd {

/// Single-channel luminance image, values in [0, 255], row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(std::size_t width, std::size_t height, std::vector<double> data);
    static GrayImage filled(std::size_t width, std::size_t height, double value);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixels() const noexcept { return width_ * height_; }
    double at(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const GrayImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

/// Interleaved RGB image, each channel in [0, 255], row-major.
class ColorImage {
public:
    ColorImage() = default;
    ColorImage(std::size_t width, std::size_t height, std::vector<double> data);
    static ColorImage filled(std::size_t width, std::size_t height, double r, double g, double b);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t pixels() const noexcept { return width_ * height_; }
    double at(std::size_t x, std::size_t y, std::size_t channel) const noexcept {
        return data_[3 * (y * width_ + x) + channel];
    }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const ColorImage&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> data_;
};

/// Hard per-pixel class labels in [0, classes).
class ClassMask {
public:
    static constexpr std::size_t max_classes = 256;

    ClassMask() = default;
    ClassMask(std::size_t width, std::size_t height, std::size_t classes, std::vector<std::uint8_t> data);
    static ClassMask filled(std::size_t width, std::size_t height, std::size_t classes, std::uint8_t label);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t classes() const noexcept { return classes_; }
    std::size_t pixels() const noexcept { return width_ * height_; }
    std::uint8_t at(std::size_t x, std::size_t y) const noexcept { return data_[y * width_ + x]; }
    std::span<const std::uint8_t> data() const noexcept { return data_; }

    bool operator==(const ClassMask&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t classes_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Per-pixel class distributions; pixel i occupies data[i*C, (i+1)*C).
class SoftMask {
public:
    static constexpr double normalization_tolerance = 1e-6;

    SoftMask() = default;
    SoftMask(std::size_t width, std::size_t height, std::size_t classes, std::vector<double> data);
    static SoftMask uniform(std::size_t width, std::size_t height, std::size_t classes);

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    std::size_t classes() const noexcept { return classes_; }
    std::size_t pixels() const noexcept { return width_ * height_; }
    std::span<const double> pixel(std::size_t i) const noexcept {
        return std::span<const double>(data_).subspan(i * classes_, classes_);
    }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const SoftMask&) const = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::size_t classes_ = 0;
    std::vector<double> data_;
};

/// Ordered frames with optional aligned ground truth.
class VideoSequence {
public:
    VideoSequence() = default;
    VideoSequence(std::vector<ColorImage> frames, std::vector<ClassMask> truth, std::size_t classes);

    std::size_t size() const noexcept { return frames_.size(); }
    bool empty() const noexcept { return frames_.empty(); }
    std::size_t width() const noexcept { return frames_.empty() ? 0 : frames_.front().width(); }
    std::size_t height() const noexcept { return frames_.empty() ? 0 : frames_.front().height(); }
    std::size_t classes() const noexcept { return classes_; }
    bool has_truth() const noexcept { return !truth_.empty(); }

    const ColorImage& frame(std::size_t i) const { return frames_.at(i); }
    const ClassMask& truth(std::size_t i) const { return truth_.at(i); }
    std::span<const ColorImage> frames() const noexcept { return frames_; }
    std::span<const ClassMask> truths() const noexcept { return truth_; }

    bool operator==(const VideoSequence&) const = default;

private:
    std::vector<ColorImage> frames_;
    std::vector<ClassMask> truth_;
    std::size_t classes_ = 0;
};

/// BT.601 luma, clamped to [0, 255].
GrayImage to_gray(const ColorImage& img);

}  // namespace tcd
