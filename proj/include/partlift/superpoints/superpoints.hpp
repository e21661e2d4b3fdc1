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

#include "partlift/geometry/knn.hpp"
#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

/// Disjoint, exhaustive cover of point indices by nonempty groups.
class SuperpointPartition {
public:
    /// Builds the partition from a per-point id vector. Ids are compacted to
    /// [0, S) in order of first appearance. Throws if `assignment` is empty.
    static SuperpointPartition from_assignment(std::span<const std::uint32_t> assignment);

    std::size_t point_count() const { return assignment_.size(); }
    std::size_t superpoint_count() const { return members_.size(); }

    std::uint32_t superpoint_of(std::size_t point) const { return assignment_[point]; }
    std::span<const std::uint32_t> assignment() const { return assignment_; }
    /// Sorted member indices of superpoint i.
    std::span<const std::uint32_t> members(std::size_t i) const { return members_[i]; }

    /// Checks disjointness, coverage, nonemptiness and consistency between
    /// assignment and member lists. Throws std::logic_error on violation.
    void check_invariants() const;

private:
    std::vector<std::uint32_t> assignment_;
    std::vector<std::vector<std::uint32_t>> members_;
};

struct SuperpointParams {
    double normal_angle_deg = 30.0;
    /// Euclidean distance in 8-bit RGB space.
    double color_dist = 30.0;
    std::size_t min_size = 5;
};

/// Region growing over the (symmetrized) k-NN graph. An edge is traversable
/// when the unoriented normal angle and the RGB distance are both within
/// threshold. Components smaller than min_size are folded into the neighbor
/// component with the most members adjacent to them over color-compatible
/// graph edges, or stand alone when there is none.
SuperpointPartition build_superpoints(const PointCloud& cloud,
                                      const NeighborGraph& graph,
                                      const SuperpointParams& params = {});

/// Fraction of points carrying the majority ground-truth label of their superpoint.
double superpoint_purity(const SuperpointPartition& partition, std::span<const int> gt_labels);

}  // namespace partlift
