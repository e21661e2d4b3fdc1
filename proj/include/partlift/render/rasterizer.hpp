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
#include <limits>
#include <span>
#include <vector>

#include "partlift/geometry/knn.hpp"
#include "partlift/geometry/point_cloud.hpp"
#include "partlift/render/camera.hpp"
#include "partlift/render/image.hpp"

namespace partlift {

inline constexpr double kEmptyDepth = std::numeric_limits<double>::infinity();
inline constexpr std::int32_t kNoPoint = -1;

/// One rasterized view: color image, z-buffer, pixel -> point ownership and
/// per-point visibility. point_index[i] != kNoPoint exactly when depth[i] is
/// finite.
struct ViewRender {
    int view_index = 0;
    CameraPose pose;
    RgbImage image;
    std::vector<double> depth;
    std::vector<std::int32_t> point_index;
    std::vector<std::uint8_t> visible;
    /// Linear pixel index of each point's projection, kNoPoint when the
    /// point is behind the camera or projects outside the image.
    std::vector<std::int32_t> point_pixel;
    /// Absolute depth slack used for the visibility test.
    double depth_slack = 0.0;

    ImageSize size() const { return image.size; }
    std::size_t visible_count() const;
};

struct RenderSettings {
    int splat_radius_px = 2;
    /// Fraction of the scene diameter.
    double depth_tolerance = 0.01;
    /// Optional per-point surfel radii in world units. When non-empty (the
    /// cloud must then carry normals) every point additionally paints the
    /// disc of that radius in its tangent plane, at per-pixel plane depth
    /// plus the radius. Surfels fill the holes between sparse samples so
    /// hidden surfaces stop showing through; the offset keeps them from
    /// hiding samples of the surface they belong to.
    std::span<const double> surfel_radius;
};

/// Cap on the projected surfel footprint.
inline constexpr int kMaxSurfelRadiusPx = 64;

/// Surfel radii from local spacing: `scale` times the distance to the
/// farthest graph neighbor of each point.
std::vector<double> surfel_radii(const PointCloud& cloud, const NeighborGraph& graph, double scale = 1.0);

/// Point-splat z-buffer rasterization. Each point in front of the camera
/// paints a constant-depth disc of splat_radius_px (plus its oriented surfel
/// when surfel radii are given); the nearest depth wins and exact ties go to
/// the lower point index. A point is visible when its own center pixel lies
/// in the image and the final depth there is at least
/// depth(p) - depth_tolerance * scene_diameter.
ViewRender render_view(const PointCloud& cloud,
                       const CameraPose& pose,
                       const RenderSettings& settings = {},
                       int view_index = 0);

/// Renders every pose, fanning out over up to `jobs` threads. Output order
/// matches `poses` regardless of scheduling.
std::vector<ViewRender> render_views(const PointCloud& cloud,
                                     const std::vector<CameraPose>& poses,
                                     const RenderSettings& settings = {},
                                     int jobs = 1);

}  // namespace partlift
