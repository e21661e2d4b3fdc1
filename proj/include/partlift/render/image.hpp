/*
 * Copyright (C) 2026 The Partlift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "partlift/geometry/point_cloud.hpp"
#include "partlift/render/camera.hpp"

namespace partlift {

/// Row-major 8-bit RGB image.
struct RgbImage {
    ImageSize size;
    std::vector<Rgb> pixels;

    RgbImage() = default;
    RgbImage(ImageSize s, Rgb fill) : size(s), pixels(s.pixel_count(), fill) {}

    Rgb& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * size.width + x]; }
    const Rgb& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * size.width + x]; }
    friend bool operator==(const RgbImage&, const RgbImage&) = default;
};

/// Row-major binary mask; one byte per pixel, 0 or 1.
class Mask {
public:
    Mask() = default;
    explicit Mask(ImageSize size, bool fill = false) : size_(size), bits_(size.pixel_count(), fill ? 1 : 0) {}

    ImageSize size() const { return size_; }
    int width() const { return size_.width; }
    int height() const { return size_.height; }
    std::size_t pixel_count() const { return bits_.size(); }

    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }
    bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * size_.width + x] != 0; }
    void set(int x, int y, bool v) { bits_[static_cast<std::size_t>(y) * size_.width + x] = v ? 1 : 0; }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto b : bits_) c += b;
        return c;
    }
    bool any() const { return count() > 0; }

    /// In-place union; sizes must match.
    Mask& operator|=(const Mask& other) {
        if (other.size_ != size_) throw std::invalid_argument("mask size mismatch in union");
        for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] |= other.bits_[i];
        return *this;
    }

    friend bool operator==(const Mask&, const Mask&) = default;

private:
    ImageSize size_{0, 0};
    std::vector<std::uint8_t> bits_;
};

}  // namespace partlift
