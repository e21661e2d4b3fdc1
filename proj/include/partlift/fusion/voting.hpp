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

#include "partlift/render/image.hpp"
#include "partlift/render/rasterizer.hpp"
#include "partlift/superpoints/superpoints.hpp"

namespace partlift {

/// Integer vote tallies for S superpoints and J categories:
/// hits(i, j) counts (point, view) pairs that are visible and fall inside
/// the category-j mask; visible(i) counts visible (point, view) pairs.
/// Merging is elementwise addition, so any view schedule gives the same sum.
struct VoteCounts {
    std::size_t superpoints = 0;
    std::size_t categories = 0;
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> visible;

    VoteCounts(std::size_t s, std::size_t j) : superpoints(s), categories(j), hits(s * j, 0), visible(s, 0) {}

    std::uint64_t hit(std::size_t i, std::size_t j) const { return hits[i * categories + j]; }
    VoteCounts& operator+=(const VoteCounts& other);
    friend bool operator==(const VoteCounts&, const VoteCounts&) = default;
};

/// Per-superpoint, per-category visible-in-mask fractions.
class ScoreMatrix {
public:
    /// Stored for superpoints never visible in any view; never equal to a real score.
    static constexpr double kUndefined = -1.0;

    ScoreMatrix() : ScoreMatrix(VoteCounts(0, 0)) {}
    explicit ScoreMatrix(const VoteCounts& counts);
    /// Direct construction; rows with visible_count 0 must hold kUndefined.
    ScoreMatrix(std::size_t superpoints, std::size_t categories, std::vector<double> scores,
                std::vector<std::uint64_t> visible_count);

    std::size_t superpoint_count() const { return superpoints_; }
    std::size_t category_count() const { return categories_; }

    double score(std::size_t i, std::size_t j) const { return scores_[i * categories_ + j]; }
    bool defined(std::size_t i) const { return visible_count_[i] > 0; }
    std::uint64_t visible_count(std::size_t i) const { return visible_count_[i]; }
    std::span<const double> row(std::size_t i) const { return {scores_.data() + i * categories_, categories_}; }

private:
    std::size_t superpoints_;
    std::size_t categories_;
    std::vector<double> scores_;
    std::vector<std::uint64_t> visible_count_;
};

/// Tallies one view. `category_masks[j]` is the category-j mask for this view.
VoteCounts count_view_votes(const SuperpointPartition& partition,
                            const ViewRender& render,
                            std::span<const Mask> category_masks);

/// masks[k][j] is the category-j mask of view k. Views are tallied
/// independently (on up to `jobs` threads) and merged by addition.
ScoreMatrix compute_scores(const SuperpointPartition& partition,
                           std::span<const ViewRender> renders,
                           const std::vector<std::vector<Mask>>& masks,
                           int jobs = 1);

struct LabelAssignment {
    std::vector<int> superpoint_label;
    std::vector<int> point_label;
};

/// Argmax over defined rows (lowest column wins ties); rows whose best score
/// is below `tau` or that are undefined become kBackground. When
/// `category_ids` is given, column j is reported as category_ids[j].
LabelAssignment assign_labels(const ScoreMatrix& scores,
                              const SuperpointPartition& partition,
                              double tau = 0.2,
                              std::span<const int> category_ids = {});

}  // namespace partlift
