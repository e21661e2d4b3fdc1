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

#include <fstream>
#include <sstream>

#include "partlift/gateway/segmenter.hpp"
#include "partlift/render/png_io.hpp"

namespace partlift {

ReplaySegmenter::ReplaySegmenter(std::filesystem::path directory) : directory_(std::move(directory)) {}

std::filesystem::path ReplaySegmenter::mask_path(const std::filesystem::path& dir, const std::string& query_id,
                                                 int view) {
    return dir / (query_id + "_view" + std::to_string(view) + ".png");
}

std::filesystem::path ReplaySegmenter::text_path(const std::filesystem::path& dir, const std::string& query_id,
                                                 int view) {
    return dir / (query_id + "_view" + std::to_string(view) + ".txt");
}

SegmentResponse ReplaySegmenter::segment(const SegmentRequest& request) const {
    const auto png = mask_path(directory_, request.query_id, request.view_index);
    if (!std::filesystem::exists(png)) {
        throw GatewayError(GatewayErrorKind::MaskNotFound, png.string(), request.query_id, request.view_index);
    }
    SegmentResponse response;
    try {
        response.mask = read_mask_png(png);
    } catch (const PngError& e) {
        throw GatewayError(GatewayErrorKind::Io, e.what(), request.query_id, request.view_index);
    }
    if (response.mask.size() != request.image.size) {
        throw GatewayError(GatewayErrorKind::ProtocolViolation, "replayed mask size differs from the request image",
                           request.query_id, request.view_index);
    }
    const auto txt = text_path(directory_, request.query_id, request.view_index);
    if (std::ifstream in{txt}) {
        std::ostringstream ss;
        ss << in.rdbuf();
        response.explanation = ss.str();
        while (!response.explanation.empty() &&
               (response.explanation.back() == '\n' || response.explanation.back() == '\r')) {
            response.explanation.pop_back();
        }
    }
    response.has_segmentation = true;
    return response;
}

}  // namespace partlift
