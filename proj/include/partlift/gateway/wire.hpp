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
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "partlift/gateway/segmenter.hpp"

namespace partlift {

class ProtocolError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Row-major run lengths alternating false/true, starting with a
/// (possibly zero) false run.
std::vector<std::uint64_t> rle_encode(const Mask& mask);
/// Throws ProtocolError when the runs do not sum to width * height.
Mask rle_decode(std::span<const std::uint64_t> runs, ImageSize size);

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws ProtocolError on malformed input.
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// POST /segment body: image_png, instruction, query_id, view_index.
nlohmann::json encode_request(const SegmentRequest& request);
SegmentRequest decode_request(const nlohmann::json& body);

/// Response body: rle, width, height, explanation, has_segmentation.
nlohmann::json encode_response(const SegmentResponse& response);
/// Validates field types, the RLE pixel count and the has_segmentation
/// invariant. Throws ProtocolError on any violation.
SegmentResponse decode_response(const nlohmann::json& body);

}  // namespace partlift
