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

#include <vector>

#include "partlift/geometry/knn.hpp"
#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

/// PCA normals: the eigenvector of the smallest eigenvalue of the covariance
/// of each point and its graph neighbors, oriented away from the cloud
/// centroid. Neighborhoods whose points all coincide get (0,0,1); their
/// indices are appended to `degenerate` when given and a warning is logged.
///
/// Requires graph.k() >= 3 and a graph built over `cloud`.
PointCloud estimate_normals(const PointCloud& cloud,
                            const NeighborGraph& graph,
                            std::vector<std::size_t>* degenerate = nullptr);

}  // namespace partlift
