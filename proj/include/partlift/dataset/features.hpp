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

#include <string>
#include <vector>

#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

struct PartFeatures {
    int category = kBackground;
    std::size_t point_count = 0;
    /// Mean color of the members falling in the most populated 32-level RGB bin.
    Rgb dominant_color;
    std::string color_name;
    /// Axis-aligned bounding-box dimensions of the part.
    Vec3 extent = Vec3::Zero();
    /// Subset of {left,right,front,back,bottom,top}, or {center} when the part
    /// centroid lies inside the dead zone on every axis. Axes: x left->right,
    /// y front->back, z bottom->top.
    std::vector<std::string> relative_position;
    /// 1 for the part with the largest bounding-box volume.
    int size_rank = 0;
};

/// Closest entry of the built-in named-color table (Euclidean RGB).
std::string nearest_color_name(Rgb color);

/// Features for one labeled part. Throws std::invalid_argument when the
/// cloud has no labels or `category` does not occur.
PartFeatures extract_part_features(const PointCloud& cloud, int category);

/// Features for every non-background label, ordered by category id.
std::vector<PartFeatures> extract_all_part_features(const PointCloud& cloud);

}  // namespace partlift
