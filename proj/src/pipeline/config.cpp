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

#include "partlift/pipeline/config.hpp"

#include <optional>
#include <stdexcept>

namespace partlift {

BackendSpec BackendSpec::parse(const std::string& text) {
    if (text == "oracle") return {Kind::Oracle, ""};
    auto with_arg = [&](const std::string& prefix, Kind kind) -> std::optional<BackendSpec> {
        if (text.rfind(prefix, 0) != 0) return std::nullopt;
        std::string arg = text.substr(prefix.size());
        if (arg.empty()) throw std::invalid_argument("backend '" + text + "' is missing its argument");
        return BackendSpec{kind, std::move(arg)};
    };
    if (auto b = with_arg("replay:", Kind::Replay)) return *b;
    if (auto b = with_arg("remote:", Kind::Remote)) return *b;
    throw std::invalid_argument("unknown backend '" + text + "' (expected oracle, replay:<dir> or remote:<url>)");
}

std::string BackendSpec::to_string() const {
    switch (kind) {
        case Kind::Oracle: return "oracle";
        case Kind::Replay: return "replay:" + location;
        case Kind::Remote: return "remote:" + location;
    }
    return "";
}

void PipelineConfig::validate() const {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid config: " + what); };
    if (views < 1) fail("views must be >= 1");
    if (image_size.width < 1 || image_size.height < 1) fail("image size must be positive");
    if (!(fov_deg > 0.0 && fov_deg < 180.0)) fail("fov must lie in (0, 180)");
    if (!(distance_factor > 0.0)) fail("distance_factor must be positive");
    if (splat_radius_px < 1) fail("splat_radius must be >= 1");
    if (!(surfel_scale >= 0.0)) fail("surfel_scale must be nonnegative");
    if (!(depth_tolerance > 0.0)) fail("depth_tolerance must be positive");
    if (knn_k < 3) fail("knn_k must be >= 3");
    if (!(superpoints.normal_angle_deg >= 0.0 && superpoints.normal_angle_deg <= 90.0)) {
        fail("normal_angle_deg must lie in [0, 90]");
    }
    if (!(superpoints.color_dist >= 0.0)) fail("color_dist must be nonnegative");
    if (superpoints.min_size < 1) fail("min_superpoint_size must be >= 1");
    if (!(tau >= 0.0 && tau <= 1.0)) fail("tau must lie in [0, 1]");
    if (jobs < 1) fail("jobs must be >= 1");
    if (!(remote.timeout_s > 0.0)) fail("timeout must be positive");
    if (remote.retries < 0) fail("retries must be nonnegative");
}

nlohmann::json PipelineConfig::to_json() const {
    return nlohmann::json{
        {"views", views},
        {"image_size", {image_size.width, image_size.height}},
        {"fov", fov_deg},
        {"distance_factor", distance_factor},
        {"splat_radius", splat_radius_px},
        {"surfel_scale", surfel_scale},
        {"depth_tolerance", depth_tolerance},
        {"knn_k", knn_k},
        {"normal_angle_deg", superpoints.normal_angle_deg},
        {"color_dist", superpoints.color_dist},
        {"min_superpoint_size", superpoints.min_size},
        {"tau", tau},
        {"backend", backend.to_string()},
        {"timeout", remote.timeout_s},
        {"retries", remote.retries},
        {"jobs", jobs},
        {"seed", seed},
    };
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc) { return from_json(doc, PipelineConfig{}); }

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc, PipelineConfig c) {
    if (!doc.is_object()) throw std::invalid_argument("config document must be a JSON object");
    try {
        if (doc.contains("views")) c.views = doc["views"].get<int>();
        if (doc.contains("image_size")) {
            const auto& s = doc["image_size"];
            if (s.is_array()) {
                c.image_size = {s.at(0).get<int>(), s.at(1).get<int>()};
            } else {
                c.image_size = {s.get<int>(), s.get<int>()};
            }
        }
        if (doc.contains("fov")) c.fov_deg = doc["fov"].get<double>();
        if (doc.contains("distance_factor")) c.distance_factor = doc["distance_factor"].get<double>();
        if (doc.contains("splat_radius")) c.splat_radius_px = doc["splat_radius"].get<int>();
        if (doc.contains("surfel_scale")) c.surfel_scale = doc["surfel_scale"].get<double>();
        if (doc.contains("depth_tolerance")) c.depth_tolerance = doc["depth_tolerance"].get<double>();
        if (doc.contains("knn_k")) c.knn_k = doc["knn_k"].get<std::size_t>();
        if (doc.contains("normal_angle_deg")) c.superpoints.normal_angle_deg = doc["normal_angle_deg"].get<double>();
        if (doc.contains("color_dist")) c.superpoints.color_dist = doc["color_dist"].get<double>();
        if (doc.contains("min_superpoint_size")) c.superpoints.min_size = doc["min_superpoint_size"].get<std::size_t>();
        if (doc.contains("tau")) c.tau = doc["tau"].get<double>();
        if (doc.contains("backend")) c.backend = BackendSpec::parse(doc["backend"].get<std::string>());
        if (doc.contains("timeout")) c.remote.timeout_s = doc["timeout"].get<double>();
        if (doc.contains("retries")) c.remote.retries = doc["retries"].get<int>();
        if (doc.contains("jobs")) c.jobs = doc["jobs"].get<int>();
        if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("config has a field of the wrong type: ") + e.what());
    }
    return c;
}

}  // namespace partlift
