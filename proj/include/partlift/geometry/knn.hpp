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
#include <span>
#include <vector>

#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

/// Exact k-nearest-neighbor lists. Row i holds the min(k, N-1) points
/// closest to point i (excluding i), ordered by ascending distance with
/// ties broken by lower index.
class NeighborGraph {
public:
    NeighborGraph(std::size_t point_count, std::size_t k, std::vector<std::uint32_t> adjacency);

    std::size_t point_count() const { return point_count_; }
    /// Requested neighbor count.
    std::size_t k() const { return k_; }
    /// Entries per row, min(k, N-1).
    std::size_t row_size() const { return row_size_; }

    std::span<const std::uint32_t> neighbors(std::size_t i) const {
        return {adjacency_.data() + i * row_size_, row_size_};
    }

private:
    std::size_t point_count_;
    std::size_t k_;
    std::size_t row_size_;
    std::vector<std::uint32_t> adjacency_;
};

/// Builds the exact k-NN graph with a kd-tree. Throws std::invalid_argument
/// for clouds with fewer than two points or k == 0.
NeighborGraph knn(const PointCloud& cloud, std::size_t k);

}  // namespace partlift
