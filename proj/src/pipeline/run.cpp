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

#include <chrono>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "partlift/dataset/manifest.hpp"
#include "partlift/geometry/knn.hpp"
#include "partlift/geometry/normals.hpp"
#include "partlift/geometry/ply.hpp"
#include "partlift/gateway/remote.hpp"
#include "partlift/parallel.hpp"
#include "partlift/pipeline/pipeline.hpp"

namespace partlift {

std::string sanitize_id(const std::string& id) {
    std::string out = id.empty() ? "object" : id;
    for (auto& c : out) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '.' ||
                        c == '_' || c == '-';
        if (!ok) c = '_';
    }
    return out;
}

std::unique_ptr<Segmenter> make_segmenter(const PipelineConfig& config, const PointCloud& cloud,
                                          std::span<const ViewRender> renders, std::span<const QuerySpec> queries,
                                          const std::map<int, std::string>& part_names) {
    switch (config.backend.kind) {
        case BackendSpec::Kind::Oracle: {
            std::map<std::string, int> query_categories;
            for (const auto& q : queries) query_categories[q.query_id] = q.category;
            return std::make_unique<OracleSegmenter>(cloud, renders, std::move(query_categories), part_names);
        }
        case BackendSpec::Kind::Replay: return std::make_unique<ReplaySegmenter>(config.backend.location);
        case BackendSpec::Kind::Remote: return std::make_unique<RemoteSegmenter>(config.backend.location, config.remote);
    }
    throw std::logic_error("unhandled backend kind");
}

PreparedCloud prepare_cloud(const PointCloud& cloud, const PipelineConfig& config) {
    if (cloud.size() < 2) {
        return {cloud, SuperpointPartition::from_assignment(std::vector<std::uint32_t>(cloud.size(), 0)), {}};
    }
    const NeighborGraph graph = knn(cloud, config.knn_k);
    PointCloud oriented = cloud.has_normals() ? cloud : estimate_normals(cloud, graph);
    SuperpointPartition partition = build_superpoints(oriented, graph, config.superpoints);
    std::vector<double> radii;
    if (config.surfel_scale > 0.0) radii = surfel_radii(oriented, graph, config.surfel_scale);
    return {std::move(oriented), std::move(partition), std::move(radii)};
}

ObjectPrediction predict_object(const PointCloud& input, std::span<const QuerySpec> queries,
                                const PipelineConfig& config, const std::map<int, std::string>& part_names) {
    config.validate();
    ObjectPrediction out;
    PreparedCloud prepared = prepare_cloud(input, config);
    const PointCloud& cloud = prepared.cloud;
    out.partition = std::move(prepared.partition);

    const auto poses = make_camera_rig(cloud, config.views, config.image_size, config.fov_deg, config.distance_factor);
    RenderSettings settings;
    settings.splat_radius_px = config.splat_radius_px;
    settings.depth_tolerance = config.depth_tolerance;
    settings.surfel_radius = prepared.surfel_radius;
    const std::vector<ViewRender> renders = render_views(cloud, poses, settings, config.jobs);

    out.visible_any.assign(cloud.size(), 0);
    for (const auto& r : renders) {
        for (std::size_t p = 0; p < cloud.size(); ++p) out.visible_any[p] |= r.visible[p];
    }

    std::set<int> category_set;
    for (const auto& q : queries) {
        if (q.category >= 0) category_set.insert(q.category);
    }
    out.categories.assign(category_set.begin(), category_set.end());
    if (queries.empty()) out.warnings.push_back("no instructions: every point is labeled background");

    // responses[q * K + k]
    const std::size_t view_count = renders.size();
    std::vector<SegmentResponse> responses(queries.size() * view_count);
    if (!queries.empty()) {
        const auto segmenter = make_segmenter(config, cloud, renders, queries, part_names);
        parallel_for(responses.size(), config.jobs, [&](std::size_t slot) {
            const QuerySpec& q = queries[slot / view_count];
            const ViewRender& render = renders[slot % view_count];
            SegmentRequest request{render.image, q.instruction, q.query_id, render.view_index};
            SegmentResponse response = segmenter->segment(request);
            try {
                response.validate(render.size());
            } catch (const std::invalid_argument& e) {
                throw GatewayError(GatewayErrorKind::ProtocolViolation, e.what(), q.query_id, render.view_index);
            }
            responses[slot] = std::move(response);
        });
    }

    // Several instructions may target one category; their masks are unioned.
    std::vector<std::vector<Mask>> masks(view_count, std::vector<Mask>(out.categories.size(), Mask(config.image_size)));
    for (std::size_t q = 0; q < queries.size(); ++q) {
        if (queries[q].category < 0) continue;
        const auto j = static_cast<std::size_t>(
            std::lower_bound(out.categories.begin(), out.categories.end(), queries[q].category) -
            out.categories.begin());
        for (std::size_t k = 0; k < view_count; ++k) {
            const auto& r = responses[q * view_count + k];
            if (r.has_segmentation) masks[k][j] |= r.mask;
        }
    }
    for (std::size_t j = 0; j < out.categories.size(); ++j) {
        bool any = false;
        for (std::size_t k = 0; k < view_count && !any; ++k) any = masks[k][j].any();
        if (!any) {
            out.warnings.push_back("category " + std::to_string(out.categories[j]) +
                                   " received an empty mask in every view");
        }
    }

    out.scores = compute_scores(out.partition, renders, masks, config.jobs);
    out.labels = assign_labels(out.scores, out.partition, config.tau, out.categories);

    for (std::size_t q = 0; q < queries.size(); ++q) {
        std::span<const SegmentResponse> per_view(responses.data() + q * view_count, view_count);
        out.explanations.push_back(select_explanation(renders, per_view, out.labels, queries[q].category));
    }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) { return std::chrono::duration<double, std::milli>(Clock::now() - t).count(); }

}  // namespace

int cmd_run(const std::filesystem::path& manifest_path, const PipelineConfig& config,
            const std::filesystem::path& out_dir, bool colorize) {
    std::vector<ManifestEntry> entries;
    try {
        config.validate();
        entries = load_manifest(manifest_path);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitBadInput;
    }
    const auto manifest_dir = manifest_path.parent_path();
    for (const auto& e : entries) {
        const auto ply = e.resolved_ply_path(manifest_dir);
        if (!std::filesystem::is_regular_file(ply)) {
            spdlog::error("object '{}': point cloud '{}' is not readable", e.object_id, ply.string());
            return kExitBadInput;
        }
    }
    if (entries.empty()) spdlog::warn("manifest '{}' lists no objects", manifest_path.string());

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        spdlog::error("cannot create output directory '{}': {}", out_dir.string(), ec.message());
        return kExitBadInput;
    }

    nlohmann::json log = {{"config", config.to_json()}, {"manifest", manifest_path.string()}};
    nlohmann::json objects = nlohmann::json::array();
    nlohmann::json failures = nlohmann::json::array();
    bool input_error = false;

    for (const auto& entry : entries) {
        const auto started = Clock::now();
        const std::string id = sanitize_id(entry.object_id);
        nlohmann::json record = {{"object_id", entry.object_id}};
        try {
            const PointCloud cloud = load_ply(entry.resolved_ply_path(manifest_dir), entry.label_property);
            std::vector<QuerySpec> queries;
            for (std::size_t i = 0; i < entry.instructions.size(); ++i) {
                queries.push_back({id + "_q" + std::to_string(i), entry.instructions[i].query,
                                   entry.instructions[i].category});
            }
            const ObjectPrediction pred = predict_object(cloud, queries, config, entry.part_names);
            for (const auto& w : pred.warnings) spdlog::warn("object '{}': {}", entry.object_id, w);

            const PointCloud labeled =
                PointCloud({cloud.positions().begin(), cloud.positions().end()},
                           {cloud.colors().begin(), cloud.colors().end()}, std::nullopt, pred.labels.point_label);
            write_ply(labeled, out_dir / (id + ".ply"));
            if (colorize) write_ply(labeled, out_dir / (id + "_colorized.ply"), true);

            nlohmann::json explanations = nlohmann::json::array();
            for (std::size_t q = 0; q < queries.size(); ++q) {
                const auto& ex = pred.explanations[q];
                std::ofstream txt(out_dir / (queries[q].query_id + ".txt"), std::ios::trunc);
                txt << "view_index: " << ex.view_index << "\n"
                    << "iou: " << ex.iou << "\n"
                    << ex.text << "\n";
                if (!txt) throw std::runtime_error("cannot write explanation for " + queries[q].query_id);
                explanations.push_back({{"query_id", queries[q].query_id},
                                        {"category", queries[q].category},
                                        {"view_index", ex.view_index},
                                        {"iou", ex.iou}});
            }

            std::map<int, std::size_t> labeled_points;
            for (int l : pred.labels.point_label) ++labeled_points[l];
            nlohmann::json label_counts = nlohmann::json::object();
            for (const auto& [l, c] : labeled_points) label_counts[std::to_string(l)] = c;
            std::size_t undefined = 0;
            for (std::size_t i = 0; i < pred.scores.superpoint_count(); ++i) undefined += !pred.scores.defined(i);

            record["status"] = "ok";
            record["points"] = cloud.size();
            record["superpoints"] = pred.partition.superpoint_count();
            record["superpoints_never_visible"] = undefined;
            record["categories"] = pred.categories;
            record["label_counts"] = label_counts;
            record["explanations"] = explanations;
            record["warnings"] = pred.warnings;
        } catch (const std::exception& e) {
            const bool is_input = dynamic_cast<const PlyError*>(&e) != nullptr;
            input_error = input_error || is_input;
            spdlog::error("object '{}' failed: {}", entry.object_id, e.what());
            record["status"] = "failed";
            record["error"] = e.what();
            failures.push_back({{"object_id", entry.object_id}, {"error", e.what()}});
        }
        record["elapsed_ms"] = ms_since(started);
        objects.push_back(record);
    }

    log["objects"] = objects;
    log["failures"] = failures;
    std::ofstream(out_dir / "run_log.json", std::ios::trunc) << log.dump(2) << "\n";

    if (input_error) return kExitBadInput;
    return failures.empty() ? kExitOk : kExitObjectFailures;
}

}  // namespace partlift
