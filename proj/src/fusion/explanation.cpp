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

#include "partlift/fusion/explanation.hpp"

#include <stdexcept>

namespace partlift {

double mask_iou(const Mask& a, const Mask& b) {
    if (a.size() != b.size()) throw std::invalid_argument("mask_iou: dimension mismatch");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.pixel_count(); ++i) {
        inter += a[i] && b[i];
        uni += a[i] || b[i];
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

Mask projection_mask(const ViewRender& render, std::span<const int> point_label, int category) {
    Mask mask(render.size());
    for (std::size_t i = 0; i < render.point_index.size(); ++i) {
        const auto owner = render.point_index[i];
        if (owner != kNoPoint && point_label[static_cast<std::size_t>(owner)] == category) mask.set(i, true);
    }
    return mask;
}

ExplanationCandidate select_explanation(std::span<const ViewRender> renders,
                                        std::span<const SegmentResponse> responses, const LabelAssignment& labels,
                                        int category) {
    if (renders.size() != responses.size()) {
        throw std::invalid_argument("select_explanation needs one response per view");
    }
    if (renders.empty()) throw std::invalid_argument("select_explanation needs at least one view");
    ExplanationCandidate best;
    best.iou = -1.0;
    for (std::size_t k = 0; k < renders.size(); ++k) {
        const double iou = mask_iou(projection_mask(renders[k], labels.point_label, category), responses[k].mask);
        if (iou > best.iou || (iou == best.iou && renders[k].view_index < best.view_index)) {
            best.view_index = renders[k].view_index;
            best.text = responses[k].explanation;
            best.iou = iou;
        }
    }
    return best;
}

}  // namespace partlift
