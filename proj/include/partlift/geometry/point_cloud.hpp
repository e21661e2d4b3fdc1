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
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace partlift {

using Vec3 = Eigen::Vector3d;

/// Label value reserved for unlabeled / background points.
inline constexpr int kBackground = -1;

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Colored point set with optional per-point normals and part labels.
///
/// All attribute arrays have the same length N >= 1. Normals, when present,
/// are unit length. Instances are immutable; the with_* helpers return
/// modified copies.
class PointCloud {
public:
    PointCloud(std::vector<Vec3> positions,
               std::vector<Rgb> colors,
               std::optional<std::vector<Vec3>> normals = std::nullopt,
               std::optional<std::vector<int>> labels = std::nullopt);

    std::size_t size() const { return positions_.size(); }

    std::span<const Vec3> positions() const { return positions_; }
    std::span<const Rgb> colors() const { return colors_; }

    bool has_normals() const { return normals_.has_value(); }
    bool has_labels() const { return labels_.has_value(); }

    /// Throws std::logic_error when the attribute is absent.
    std::span<const Vec3> normals() const;
    std::span<const int> labels() const;

    PointCloud with_normals(std::vector<Vec3> normals) const;
    PointCloud with_labels(std::vector<int> labels) const;
    PointCloud with_colors(std::vector<Rgb> colors) const;
    PointCloud without_labels() const;

    Vec3 centroid() const;
    /// Largest distance from the centroid to any point.
    double bounding_radius() const;

private:
    std::vector<Vec3> positions_;
    std::vector<Rgb> colors_;
    std::optional<std::vector<Vec3>> normals_;
    std::optional<std::vector<int>> labels_;
};

}  // namespace partlift
