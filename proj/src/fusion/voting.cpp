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

#include "partlift/fusion/voting.hpp"

#include <stdexcept>
#include <string>

#include "partlift/parallel.hpp"

namespace partlift {

VoteCounts& VoteCounts::operator+=(const VoteCounts& other) {
    if (other.superpoints != superpoints || other.categories != categories) {
        throw std::invalid_argument("cannot merge vote counts of different shapes");
    }
    for (std::size_t i = 0; i < hits.size(); ++i) hits[i] += other.hits[i];
    for (std::size_t i = 0; i < visible.size(); ++i) visible[i] += other.visible[i];
    return *this;
}

ScoreMatrix::ScoreMatrix(const VoteCounts& counts)
    : superpoints_(counts.superpoints),
      categories_(counts.categories),
      scores_(counts.superpoints * counts.categories, kUndefined),
      visible_count_(counts.visible) {
    for (std::size_t i = 0; i < superpoints_; ++i) {
        if (visible_count_[i] == 0) continue;
        const double denom = static_cast<double>(visible_count_[i]);
        for (std::size_t j = 0; j < categories_; ++j) {
            scores_[i * categories_ + j] = static_cast<double>(counts.hit(i, j)) / denom;
        }
    }
}

ScoreMatrix::ScoreMatrix(std::size_t superpoints, std::size_t categories, std::vector<double> scores,
                         std::vector<std::uint64_t> visible_count)
    : superpoints_(superpoints),
      categories_(categories),
      scores_(std::move(scores)),
      visible_count_(std::move(visible_count)) {
    if (scores_.size() != superpoints_ * categories_ || visible_count_.size() != superpoints_) {
        throw std::invalid_argument("score matrix dimensions are inconsistent");
    }
    for (std::size_t i = 0; i < superpoints_; ++i) {
        for (std::size_t j = 0; j < categories_; ++j) {
            const double s = scores_[i * categories_ + j];
            if (visible_count_[i] == 0 ? s != kUndefined : !(s >= 0.0 && s <= 1.0)) {
                throw std::invalid_argument("score (" + std::to_string(i) + ", " + std::to_string(j) +
                                            ") violates the score range invariant");
            }
        }
    }
}

VoteCounts count_view_votes(const SuperpointPartition& partition, const ViewRender& render,
                            std::span<const Mask> category_masks) {
    if (render.visible.size() != partition.point_count()) {
        throw std::invalid_argument("render and partition cover different point counts");
    }
    for (const auto& m : category_masks) {
        if (m.size() != render.size()) {
            throw std::invalid_argument("mask dimensions differ from view " + std::to_string(render.view_index));
        }
    }
    const std::size_t categories = category_masks.size();
    VoteCounts counts(partition.superpoint_count(), categories);
    for (std::size_t p = 0; p < partition.point_count(); ++p) {
        if (!render.visible[p]) continue;
        const std::size_t sp = partition.superpoint_of(p);
        ++counts.visible[sp];
        const auto pixel = render.point_pixel[p];
        for (std::size_t j = 0; j < categories; ++j) {
            if (category_masks[j][static_cast<std::size_t>(pixel)]) ++counts.hits[sp * categories + j];
        }
    }
    return counts;
}

ScoreMatrix compute_scores(const SuperpointPartition& partition, std::span<const ViewRender> renders,
                           const std::vector<std::vector<Mask>>& masks, int jobs) {
    if (masks.size() != renders.size()) {
        throw std::invalid_argument("expected one mask set per view (" + std::to_string(renders.size()) + "), got " +
                                    std::to_string(masks.size()));
    }
    const std::size_t categories = masks.empty() ? 0 : masks.front().size();
    for (const auto& view_masks : masks) {
        if (view_masks.size() != categories) throw std::invalid_argument("views disagree on category count");
    }
    std::vector<VoteCounts> per_view(renders.size(), VoteCounts(partition.superpoint_count(), categories));
    parallel_for(renders.size(), jobs,
                 [&](std::size_t k) { per_view[k] = count_view_votes(partition, renders[k], masks[k]); });
    VoteCounts total(partition.superpoint_count(), categories);
    for (const auto& c : per_view) total += c;
    return ScoreMatrix(total);
}

LabelAssignment assign_labels(const ScoreMatrix& scores, const SuperpointPartition& partition, double tau,
                              std::span<const int> category_ids) {
    if (scores.superpoint_count() != partition.superpoint_count()) {
        throw std::invalid_argument("score matrix and partition disagree on superpoint count");
    }
    if (!category_ids.empty() && category_ids.size() != scores.category_count()) {
        throw std::invalid_argument("category id list does not match score columns");
    }
    LabelAssignment out;
    out.superpoint_label.assign(scores.superpoint_count(), kBackground);
    for (std::size_t i = 0; i < scores.superpoint_count(); ++i) {
        if (!scores.defined(i) || scores.category_count() == 0) continue;
        std::size_t best = 0;
        for (std::size_t j = 1; j < scores.category_count(); ++j) {
            if (scores.score(i, j) > scores.score(i, best)) best = j;
        }
        if (scores.score(i, best) >= tau) {
            out.superpoint_label[i] = category_ids.empty() ? static_cast<int>(best) : category_ids[best];
        }
    }
    out.point_label.resize(partition.point_count());
    for (std::size_t p = 0; p < partition.point_count(); ++p) {
        out.point_label[p] = out.superpoint_label[partition.superpoint_of(p)];
    }
    return out;
}

}  // namespace partlift
