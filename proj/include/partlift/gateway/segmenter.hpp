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

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "partlift/geometry/point_cloud.hpp"
#include "partlift/render/image.hpp"
#include "partlift/render/rasterizer.hpp"

namespace partlift {

struct SegmentRequest {
    RgbImage image;
    std::string instruction;
    std::string query_id;
    int view_index = 0;

    /// Throws std::invalid_argument for an empty image or instruction.
    void validate() const;
};

struct SegmentResponse {
    Mask mask;
    std::string explanation;
    /// False when the segmenter produced text only; the mask is then all-false.
    bool has_segmentation = true;

    /// Throws std::invalid_argument when the mask size differs from
    /// `expected` or has_segmentation is false with a nonempty mask.
    void validate(ImageSize expected) const;
};

enum class GatewayErrorKind {
    InvalidRequest,
    UnknownCategory,
    MaskNotFound,
    Io,
    Connect,
    Timeout,
    HttpStatus,
    ProtocolViolation,
};

const char* to_string(GatewayErrorKind kind);

class GatewayError : public std::runtime_error {
public:
    GatewayError(GatewayErrorKind kind, const std::string& message, std::string query_id, int view_index,
                 int attempts = 1);

    GatewayErrorKind kind() const { return kind_; }
    const std::string& query_id() const { return query_id_; }
    int view_index() const { return view_index_; }
    int attempts() const { return attempts_; }

private:
    GatewayErrorKind kind_;
    std::string query_id_;
    int view_index_;
    int attempts_;
};

/// The instruction-driven segmenter contract: one image plus one instruction
/// in, one binary mask plus explanation out. Implementations must tolerate
/// concurrent calls.
class Segmenter {
public:
    virtual ~Segmenter() = default;
    virtual SegmentResponse segment(const SegmentRequest& request) const = 0;
};

/// Ground-truth mask: pixels owned by a point of `category`. Throws
/// GatewayError(UnknownCategory) for negative ids and std::invalid_argument
/// when the cloud carries no labels.
SegmentResponse oracle_segment(const PointCloud& cloud,
                               const ViewRender& render,
                               int category,
                               const std::string& part_name = {});

/// Oracle backend bound to one object: query ids map to category ids and
/// view indices select the matching render.
class OracleSegmenter final : public Segmenter {
public:
    OracleSegmenter(const PointCloud& cloud,
                    std::span<const ViewRender> renders,
                    std::map<std::string, int> query_categories,
                    std::map<int, std::string> part_names = {});

    SegmentResponse segment(const SegmentRequest& request) const override;

private:
    const PointCloud& cloud_;
    std::span<const ViewRender> renders_;
    std::map<std::string, int> query_categories_;
    std::map<int, std::string> part_names_;
};

/// Reads `<query_id>_view<k>.png` (8-bit gray, 255 = true) and an optional
/// `<query_id>_view<k>.txt` explanation from a directory.
class ReplaySegmenter final : public Segmenter {
public:
    explicit ReplaySegmenter(std::filesystem::path directory);

    SegmentResponse segment(const SegmentRequest& request) const override;

    static std::filesystem::path mask_path(const std::filesystem::path& dir, const std::string& query_id, int view);
    static std::filesystem::path text_path(const std::filesystem::path& dir, const std::string& query_id, int view);

private:
    std::filesystem::path directory_;
};

}  // namespace partlift
