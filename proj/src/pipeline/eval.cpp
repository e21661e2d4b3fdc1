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
#include <iostream>

#include <spdlog/spdlog.h>

#include "partlift/dataset/manifest.hpp"
#include "partlift/dataset/metrics.hpp"
#include "partlift/geometry/ply.hpp"
#include "partlift/pipeline/pipeline.hpp"
#include "partlift/pipeline/synth.hpp"

namespace partlift {

int cmd_eval(const std::filesystem::path& pred_dir, const std::filesystem::path& manifest_path,
             const std::filesystem::path& report_path, bool include_background) {
    std::vector<ManifestEntry> entries;
    try {
        entries = load_manifest(manifest_path);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitBadInput;
    }
    for (const auto& entry : entries) {
        const auto pred = pred_dir / (sanitize_id(entry.object_id) + ".ply");
        if (!std::filesystem::is_regular_file(pred)) {
            spdlog::error("missing prediction for object '{}' ({})", entry.object_id, pred.string());
            return kExitBadInput;
        }
    }

    std::vector<std::vector<int>> predictions, ground_truth;
    std::map<int, std::string> part_to_category;
    std::map<int, std::string> part_names;
    try {
        for (const auto& entry : entries) {
            const PointCloud gt = load_ply(entry.resolved_ply_path(manifest_path.parent_path()), entry.label_property);
            const PointCloud pred = load_ply(pred_dir / (sanitize_id(entry.object_id) + ".ply"));
            if (!gt.has_labels()) {
                throw std::runtime_error("object '" + entry.object_id + "' has no '" + entry.label_property + "' labels");
            }
            if (!pred.has_labels()) throw std::runtime_error("prediction for '" + entry.object_id + "' has no labels");
            if (pred.size() != gt.size()) {
                throw std::runtime_error("prediction for '" + entry.object_id + "' has " + std::to_string(pred.size()) +
                                         " points, ground truth " + std::to_string(gt.size()));
            }
            auto register_part = [&](int part) {
                if (part < 0) return;
                auto [it, inserted] = part_to_category.try_emplace(part, entry.object_category);
                if (!inserted && it->second != entry.object_category) {
                    throw std::runtime_error("part id " + std::to_string(part) + " is used by object categories '" +
                                             it->second + "' and '" + entry.object_category + "'");
                }
            };
            for (int l : gt.labels()) register_part(l);
            for (const auto& ins : entry.instructions) register_part(ins.category);
            for (const auto& [id, name] : entry.part_names) {
                register_part(id);
                part_names.emplace(id, name);
            }
            ground_truth.emplace_back(gt.labels().begin(), gt.labels().end());
            predictions.emplace_back(pred.labels().begin(), pred.labels().end());
        }
        // Predicted ids outside every object's vocabulary are a hard error in category_miou.
        const EvalReport report = category_miou(predictions, ground_truth, part_to_category, {include_background});
        const nlohmann::json doc = report.to_json(part_to_category, part_names);
        const auto out = report_path.empty() ? pred_dir / "eval_report.json" : report_path;
        std::ofstream(out, std::ios::trunc) << doc.dump(2) << "\n";
        std::cout << doc.dump(2) << std::endl;
    } catch (const std::exception& e) {
        spdlog::error("evaluation failed: {}", e.what());
        return kExitBadInput;
    }
    return kExitOk;
}

int cmd_synth(const std::string& shape_name, std::size_t points, std::uint64_t seed, const std::filesystem::path& out) {
    try {
        const SynthShape shape = parse_synth_shape(shape_name);
        const SynthObject object = make_synthetic(shape, points, seed);
        std::filesystem::create_directories(out);
        const std::string object_id = std::string(to_string(shape)) + "_s" + std::to_string(seed);
        const std::string ply_name = object_id + ".ply";
        write_ply(object.cloud, out / ply_name);

        const auto manifest_path = out / "manifest.json";
        std::vector<ManifestEntry> entries;
        if (std::filesystem::exists(manifest_path)) entries = load_manifest(manifest_path);
        ManifestEntry entry = synthetic_manifest_entry(object, object_id, ply_name, seed);
        auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.object_id == object_id; });
        if (it != entries.end()) {
            *it = std::move(entry);
        } else {
            entries.push_back(std::move(entry));
        }
        save_manifest(entries, manifest_path);
        spdlog::info("wrote {} ({} points) and updated {}", (out / ply_name).string(), points, manifest_path.string());
    } catch (const std::invalid_argument& e) {
        spdlog::error("{}", e.what());
        return kExitBadInput;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitObjectFailures;
    }
    return kExitOk;
}

}  // namespace partlift
