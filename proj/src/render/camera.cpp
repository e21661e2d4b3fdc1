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

#include "partlift/render/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace partlift {

void CameraPose::validate() const {
    const Vec3 dir = target - eye;
    if (!(dir.norm() > 0.0)) throw std::invalid_argument("camera eye coincides with target");
    if (!(up.norm() > 0.0)) throw std::invalid_argument("camera up vector is zero");
    if (dir.normalized().cross(up.normalized()).norm() < 1e-9) {
        throw std::invalid_argument("camera up vector is parallel to the view direction");
    }
    if (!(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0)) {
        throw std::invalid_argument("vertical fov must lie in (0, 180) degrees");
    }
    if (image_size.width <= 0 || image_size.height <= 0) throw std::invalid_argument("image size must be positive");
}

CameraFrame::CameraFrame(const CameraPose& pose) {
    pose.validate();
    eye_ = pose.eye;
    forward_ = (pose.target - pose.eye).normalized();
    right_ = forward_.cross(pose.up).normalized();
    up_ = right_.cross(forward_);
    const double half_fov = pose.vertical_fov_deg * std::numbers::pi / 360.0;
    focal_px_ = 0.5 * pose.image_size.height / std::tan(half_fov);
    cx_ = 0.5 * pose.image_size.width;
    cy_ = 0.5 * pose.image_size.height;
}

std::optional<PixelProjection> CameraFrame::project(const Vec3& point) const {
    const Vec3 d = point - eye_;
    const double depth = d.dot(forward_);
    if (!(depth > 0.0)) return std::nullopt;
    PixelProjection out;
    out.depth = depth;
    out.x = cx_ + focal_px_ * d.dot(right_) / depth;
    out.y = cy_ - focal_px_ * d.dot(up_) / depth;
    // Keep the integer conversion defined for points near the eye plane.
    constexpr double kLimit = 1e12;
    out.px = static_cast<std::int64_t>(std::floor(std::clamp(out.x, -kLimit, kLimit)));
    out.py = static_cast<std::int64_t>(std::floor(std::clamp(out.y, -kLimit, kLimit)));
    return out;
}

Vec3 CameraFrame::pixel_ray(int x, int y) const {
    return forward_ + ((x + 0.5 - cx_) / focal_px_) * right_ - ((y + 0.5 - cy_) / focal_px_) * up_;
}

std::optional<PixelProjection> project_point(const Vec3& point, const CameraPose& pose) {
    return CameraFrame(pose).project(point);
}

std::vector<CameraPose> make_camera_rig(const PointCloud& cloud, int view_count, ImageSize image_size,
                                        double vertical_fov_deg, double distance_factor) {
    if (view_count <= 0) throw std::invalid_argument("view count must be positive");
    if (!(distance_factor > 0.0)) throw std::invalid_argument("distance factor must be positive");

    const Vec3 center = cloud.centroid();
    double radius = cloud.bounding_radius();
    if (!(radius > 0.0)) radius = 1.0;  // single point or all coincident
    const double distance = distance_factor * radius;
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));

    std::vector<CameraPose> poses;
    poses.reserve(static_cast<std::size_t>(view_count));
    for (int i = 0; i < view_count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / view_count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double theta = golden_angle * i;
        const Vec3 dir(r * std::cos(theta), r * std::sin(theta), z);

        CameraPose pose;
        pose.eye = center + distance * dir;
        pose.target = center;
        pose.up = std::abs(dir.z()) > 0.99 ? Vec3::UnitY() : Vec3::UnitZ();
        pose.vertical_fov_deg = vertical_fov_deg;
        pose.image_size = image_size;
        pose.validate();
        poses.push_back(pose);
    }
    return poses;
}

}  // namespace partlift
