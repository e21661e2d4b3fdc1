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
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "partlift/fusion/explanation.hpp"
#include "partlift/fusion/voting.hpp"
#include "partlift/gateway/segmenter.hpp"
#include "partlift/pipeline/config.hpp"
#include "partlift/superpoints/superpoints.hpp"

namespace partlift {

/// One instruction to answer for an object.
struct QuerySpec {
    std::string query_id;
    std::string instruction;
    int category = kBackground;
};

struct ObjectPrediction {
    SuperpointPartition partition;
    /// Sorted distinct query categories; column j of `scores` is categories[j].
    std::vector<int> categories;
    ScoreMatrix scores;
    LabelAssignment labels;
    /// One per query, in query order.
    std::vector<ExplanationCandidate> explanations;
    /// visible_any[p] is set when p is visible in at least one view.
    std::vector<std::uint8_t> visible_any;
    std::vector<std::string> warnings;
};

/// Builds the backend selected by config.backend. The oracle backend reads
/// ground-truth labels from `cloud` and keeps references to `cloud` and
/// `renders`, which must outlive it.
std::unique_ptr<Segmenter> make_segmenter(const PipelineConfig& config,
                                          const PointCloud& cloud,
                                          std::span<const ViewRender> renders,
                                          std::span<const QuerySpec> queries,
                                          const std::map<int, std::string>& part_names = {});

/// Per-object geometry shared by rendering and fusion.
struct PreparedCloud {
    PointCloud cloud;  ///< input cloud, with estimated normals when it had none
    SuperpointPartition partition;
    std::vector<double> surfel_radius;  ///< empty for one-point clouds or surfel_scale 0
};

/// k-NN region growing (estimating normals when the cloud has none), or a
/// single superpoint for one-point clouds.
PreparedCloud prepare_cloud(const PointCloud& cloud, const PipelineConfig& config);

/// Render -> segment -> fuse -> explain for one object. Per-view rendering
/// and per-(query, view) segmentation fan out over config.jobs threads; all
/// merges are order independent so the result does not depend on jobs.
/// Gateway failures propagate as GatewayError.
ObjectPrediction predict_object(const PointCloud& cloud,
                                std::span<const QuerySpec> queries,
                                const PipelineConfig& config,
                                const std::map<int, std::string>& part_names = {});

/// Exit codes shared by the CLI commands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitObjectFailures = 1;
inline constexpr int kExitBadInput = 2;

/// Processes every manifest object and writes, per object, `<id>.ply` (input
/// geometry with predicted `label`), `<id>_q<i>.txt` explanations, and a
/// `run_log.json` for the whole run. Exit 0 on success, 1 when some object
/// failed, 2 when inputs are unreadable.
int cmd_run(const std::filesystem::path& manifest, const PipelineConfig& config,
            const std::filesystem::path& out_dir, bool colorize = false);

/// Scores `<pred_dir>/<id>.ply` against the manifest's labeled clouds, prints
/// the report and writes it to `report_path` (default
/// `<pred_dir>/eval_report.json`). Exit 2 names the first missing prediction.
int cmd_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& manifest,
             const std::filesystem::path& report_path = {}, bool include_background = false);

/// Writes `<out>/<shape>_s<seed>.ply` and merges its entry into `<out>/manifest.json`.
int cmd_synth(const std::string& shape, std::size_t points, std::uint64_t seed, const std::filesystem::path& out);

/// File-system-safe object id (characters outside [A-Za-z0-9._-] become '_').
std::string sanitize_id(const std::string& id);

}  // namespace partlift
