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

#include <span>
#include <string>

#include "partlift/fusion/voting.hpp"
#include "partlift/gateway/segmenter.hpp"

namespace partlift {

/// Intersection over union; two empty masks count as a perfect match (1.0).
double mask_iou(const Mask& a, const Mask& b);

/// Pixels whose owning point carries `category` in `point_label`.
Mask projection_mask(const ViewRender& render, std::span<const int> point_label, int category);

struct ExplanationCandidate {
    int view_index = 0;
    std::string text;
    double iou = 0.0;
};

/// View-guided scoring: ranks each view's explanation by the IoU between its
/// mask and the projection of the fused labels for `category`; the lowest
/// view index wins ties. Requires one response per render.
ExplanationCandidate select_explanation(std::span<const ViewRender> renders,
                                        std::span<const SegmentResponse> responses,
                                        const LabelAssignment& labels,
                                        int category);

}  // namespace partlift
