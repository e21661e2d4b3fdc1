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
#include <string>

#include <json.hpp>

#include "partlift/gateway/remote.hpp"
#include "partlift/render/camera.hpp"
#include "partlift/superpoints/superpoints.hpp"

namespace partlift {

struct BackendSpec {
    enum class Kind { Oracle, Replay, Remote };
    Kind kind = Kind::Oracle;
    /// Mask directory for Replay, base URL for Remote.
    std::string location;

    /// "oracle", "replay:<dir>" or "remote:<url>".
    static BackendSpec parse(const std::string& text);
    std::string to_string() const;
};

struct PipelineConfig {
    int views = 10;
    ImageSize image_size{512, 512};
    double fov_deg = 60.0;
    double distance_factor = 2.2;
    int splat_radius_px = 2;
    /// Oriented surfel radius as a multiple of the farthest k-NN distance;
    /// 0 renders plain fixed-size discs only.
    double surfel_scale = 1.0;
    double depth_tolerance = 0.01;
    std::size_t knn_k = 10;
    SuperpointParams superpoints;
    double tau = 0.2;
    BackendSpec backend;
    RemoteOptions remote;
    int jobs = 4;
    std::uint64_t seed = 0;

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;

    nlohmann::json to_json() const;
    /// Overlays the keys present in `doc` onto `base`.
    static PipelineConfig from_json(const nlohmann::json& doc, PipelineConfig base);
    static PipelineConfig from_json(const nlohmann::json& doc);
};

}  // namespace partlift
