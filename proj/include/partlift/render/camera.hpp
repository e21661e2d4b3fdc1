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
#include <vector>

#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

struct ImageSize {
    int width = 512;
    int height = 512;

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    friend bool operator==(const ImageSize&, const ImageSize&) = default;
};

/// Look-at pinhole camera with square pixels.
struct CameraPose {
    Vec3 eye = Vec3::Zero();
    Vec3 target = Vec3::UnitX();
    Vec3 up = Vec3::UnitZ();
    double vertical_fov_deg = 60.0;
    ImageSize image_size;

    /// Throws std::invalid_argument if eye == target, up is (near) parallel
    /// to the view direction, the fov is outside (0, 180) or the image is empty.
    void validate() const;
};

struct PixelProjection {
    double x = 0.0;  ///< continuous image column
    double y = 0.0;  ///< continuous image row (0 at the top)
    std::int64_t px = 0;  ///< floor(x)
    std::int64_t py = 0;  ///< floor(y)
    double depth = 0.0;   ///< distance along the camera forward axis

    bool in_bounds(const ImageSize& size) const {
        return px >= 0 && py >= 0 && px < size.width && py < size.height;
    }
};

/// Precomputed camera basis shared by project_point and the rasterizer so
/// both produce bit-identical projections.
class CameraFrame {
public:
    explicit CameraFrame(const CameraPose& pose);

    /// nullopt when the point is at or behind the eye plane.
    std::optional<PixelProjection> project(const Vec3& point) const;

    /// Ray through the center of pixel (x, y), scaled so its forward
    /// component is 1: eye + t * ray has depth t.
    Vec3 pixel_ray(int x, int y) const;

    const Vec3& eye() const { return eye_; }
    const Vec3& forward() const { return forward_; }
    double focal_px() const { return focal_px_; }

private:
    Vec3 eye_, right_, up_, forward_;
    double focal_px_;
    double cx_, cy_;
};

std::optional<PixelProjection> project_point(const Vec3& point, const CameraPose& pose);

/// K poses on a Fibonacci sphere of radius distance_factor * bounding radius
/// around the cloud centroid, all looking at the centroid.
std::vector<CameraPose> make_camera_rig(const PointCloud& cloud,
                                        int view_count,
                                        ImageSize image_size = {},
                                        double vertical_fov_deg = 60.0,
                                        double distance_factor = 2.2);

}  // namespace partlift
