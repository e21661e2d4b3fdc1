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

#include <string>

#include "partlift/gateway/segmenter.hpp"

namespace partlift {

SegmentResponse oracle_segment(const PointCloud& cloud, const ViewRender& render, int category,
                               const std::string& part_name) {
    if (category < 0) {
        throw GatewayError(GatewayErrorKind::UnknownCategory, "category id " + std::to_string(category), "",
                           render.view_index);
    }
    if (!cloud.has_labels()) throw std::invalid_argument("oracle segmentation requires ground-truth labels");
    if (render.visible.size() != cloud.size()) throw std::invalid_argument("render was produced for another cloud");

    const auto labels = cloud.labels();
    SegmentResponse response;
    response.mask = Mask(render.size());
    for (std::size_t i = 0; i < render.point_index.size(); ++i) {
        const auto owner = render.point_index[i];
        if (owner != kNoPoint && labels[static_cast<std::size_t>(owner)] == category) response.mask.set(i, true);
    }
    const std::string name = part_name.empty() ? "part " + std::to_string(category) : part_name;
    response.explanation = "The highlighted region is the " + name + " of the object.";
    response.has_segmentation = true;
    return response;
}

OracleSegmenter::OracleSegmenter(const PointCloud& cloud, std::span<const ViewRender> renders,
                                 std::map<std::string, int> query_categories, std::map<int, std::string> part_names)
    : cloud_(cloud),
      renders_(renders),
      query_categories_(std::move(query_categories)),
      part_names_(std::move(part_names)) {
    if (!cloud_.has_labels()) throw std::invalid_argument("oracle backend requires ground-truth labels");
}

SegmentResponse OracleSegmenter::segment(const SegmentRequest& request) const {
    auto it = query_categories_.find(request.query_id);
    if (it == query_categories_.end()) {
        throw GatewayError(GatewayErrorKind::UnknownCategory, "no category registered for query", request.query_id,
                           request.view_index);
    }
    if (!part_names_.empty() && !part_names_.contains(it->second)) {
        throw GatewayError(GatewayErrorKind::UnknownCategory, "category id " + std::to_string(it->second),
                           request.query_id, request.view_index);
    }
    if (request.view_index < 0 || static_cast<std::size_t>(request.view_index) >= renders_.size()) {
        throw GatewayError(GatewayErrorKind::InvalidRequest, "view index out of range", request.query_id,
                           request.view_index);
    }
    const ViewRender& render = renders_[static_cast<std::size_t>(request.view_index)];
    if (request.image.size != render.size()) {
        throw GatewayError(GatewayErrorKind::InvalidRequest, "image size differs from the render", request.query_id,
                           request.view_index);
    }
    auto name_it = part_names_.find(it->second);
    try {
        return oracle_segment(cloud_, render, it->second, name_it == part_names_.end() ? "" : name_it->second);
    } catch (const GatewayError& e) {
        throw GatewayError(e.kind(), "category id " + std::to_string(it->second), request.query_id,
                           request.view_index);
    }
}

}  // namespace partlift
