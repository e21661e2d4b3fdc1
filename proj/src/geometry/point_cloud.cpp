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

#include "partlift/geometry/point_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace partlift {

PointCloud::PointCloud(std::vector<Vec3> positions,
                       std::vector<Rgb> colors,
                       std::optional<std::vector<Vec3>> normals,
                       std::optional<std::vector<int>> labels)
    : positions_(std::move(positions)),
      colors_(std::move(colors)),
      normals_(std::move(normals)),
      labels_(std::move(labels)) {
    const std::size_t n = positions_.size();
    if (n == 0) {
        throw std::invalid_argument("point cloud must contain at least one point");
    }
    if (colors_.size() != n) {
        throw std::invalid_argument("color count " + std::to_string(colors_.size()) +
                                    " does not match point count " + std::to_string(n));
    }
    if (normals_) {
        if (normals_->size() != n) {
            throw std::invalid_argument("normal count does not match point count");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs((*normals_)[i].norm() - 1.0) > 1e-6) {
                throw std::invalid_argument("normal " + std::to_string(i) + " is not unit length");
            }
        }
    }
    if (labels_ && labels_->size() != n) {
        throw std::invalid_argument("label count does not match point count");
    }
}

std::span<const Vec3> PointCloud::normals() const {
    if (!normals_) throw std::logic_error("point cloud has no normals");
    return *normals_;
}

std::span<const int> PointCloud::labels() const {
    if (!labels_) throw std::logic_error("point cloud has no labels");
    return *labels_;
}

PointCloud PointCloud::with_normals(std::vector<Vec3> normals) const {
    return PointCloud(positions_, colors_, std::move(normals), labels_);
}

PointCloud PointCloud::with_labels(std::vector<int> labels) const {
    return PointCloud(positions_, colors_, normals_, std::move(labels));
}

PointCloud PointCloud::with_colors(std::vector<Rgb> colors) const {
    return PointCloud(positions_, std::move(colors), normals_, labels_);
}

PointCloud PointCloud::without_labels() const {
    return PointCloud(positions_, colors_, normals_, std::nullopt);
}

Vec3 PointCloud::centroid() const {
    Vec3 sum = Vec3::Zero();
    for (const auto& p : positions_) sum += p;
    return sum / static_cast<double>(positions_.size());
}

double PointCloud::bounding_radius() const {
    const Vec3 c = centroid();
    double r2 = 0.0;
    for (const auto& p : positions_) r2 = std::max(r2, (p - c).squaredNorm());
    return std::sqrt(r2);
}

}  // namespace partlift
