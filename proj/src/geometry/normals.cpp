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

#include "partlift/geometry/normals.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <spdlog/spdlog.h>

namespace partlift {

PointCloud estimate_normals(const PointCloud& cloud, const NeighborGraph& graph,
                            std::vector<std::size_t>* degenerate) {
    if (graph.point_count() != cloud.size()) {
        throw std::invalid_argument("neighbor graph was built over a different cloud");
    }
    if (graph.k() < 3) throw std::invalid_argument("normal estimation requires k >= 3");

    const auto positions = cloud.positions();
    const Vec3 centroid = cloud.centroid();
    std::vector<Vec3> normals(cloud.size());
    std::size_t degenerate_count = 0;

    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const auto nbrs = graph.neighbors(i);
        const Vec3& p = positions[i];

        bool coincident = true;
        Vec3 mean = p;
        for (auto j : nbrs) {
            coincident = coincident && positions[j] == p;
            mean += positions[j];
        }
        if (coincident) {
            normals[i] = Vec3::UnitZ();
            ++degenerate_count;
            if (degenerate) degenerate->push_back(i);
            continue;
        }
        mean /= static_cast<double>(nbrs.size() + 1);

        Eigen::Matrix3d cov = (p - mean) * (p - mean).transpose();
        for (auto j : nbrs) {
            const Vec3 d = positions[j] - mean;
            cov += d * d.transpose();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov, Eigen::ComputeEigenvectors);
        Vec3 n = solver.eigenvectors().col(0).normalized();  // eigenvalues ascend
        if (n.dot(p - centroid) < 0.0) n = -n;
        normals[i] = n;
    }
    if (degenerate_count > 0) {
        spdlog::warn("estimate_normals: {} point(s) with degenerate neighborhoods fell back to (0,0,1)",
                     degenerate_count);
    }
    return cloud.with_normals(std::move(normals));
}

}  // namespace partlift
