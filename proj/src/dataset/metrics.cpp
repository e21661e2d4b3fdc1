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

#include "partlift/dataset/metrics.hpp"

#include <stdexcept>

#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

namespace {

struct Pooled {
    std::uint64_t intersection = 0;
    std::uint64_t union_ = 0;
};

}  // namespace

EvalReport category_miou(const std::vector<std::vector<int>>& predictions,
                         const std::vector<std::vector<int>>& ground_truth,
                         const std::map<int, std::string>& part_to_object_category, const EvalOptions& options) {
    if (predictions.size() != ground_truth.size()) {
        throw std::invalid_argument("prediction and ground-truth object counts differ");
    }
    auto check_label = [&](int label) {
        if (label != kBackground && !part_to_object_category.contains(label)) {
            throw std::invalid_argument("part id " + std::to_string(label) + " is not in the part map");
        }
    };

    std::map<int, Pooled> parts;
    std::map<std::string, Pooled> background;
    for (const auto& [part, _] : part_to_object_category) parts[part];

    for (std::size_t o = 0; o < predictions.size(); ++o) {
        const auto& pred = predictions[o];
        const auto& gt = ground_truth[o];
        if (pred.size() != gt.size()) {
            throw std::invalid_argument("object " + std::to_string(o) + ": prediction has " + std::to_string(pred.size()) +
                                        " points, ground truth " + std::to_string(gt.size()));
        }
        std::string object_category;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            check_label(pred[i]);
            check_label(gt[i]);
            if (object_category.empty() && gt[i] != kBackground) object_category = part_to_object_category.at(gt[i]);
            if (pred[i] == gt[i]) {
                if (pred[i] != kBackground) {
                    ++parts[pred[i]].intersection;
                    ++parts[pred[i]].union_;
                }
            } else {
                if (pred[i] != kBackground) ++parts[pred[i]].union_;
                if (gt[i] != kBackground) ++parts[gt[i]].union_;
            }
        }
        if (options.include_background && !object_category.empty()) {
            Pooled& bg = background[object_category];
            for (std::size_t i = 0; i < pred.size(); ++i) {
                const bool p = pred[i] == kBackground, g = gt[i] == kBackground;
                bg.intersection += p && g;
                bg.union_ += p || g;
            }
        }
    }

    EvalReport report;
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (const auto& [part, pooled] : parts) {
        if (pooled.union_ == 0) continue;
        const double iou = static_cast<double>(pooled.intersection) / static_cast<double>(pooled.union_);
        report.per_part_miou[part] = iou;
        auto& s = sums[part_to_object_category.at(part)];
        s.first += iou;
        ++s.second;
    }
    for (const auto& [category, pooled] : background) {
        if (pooled.union_ == 0) continue;
        const double iou = static_cast<double>(pooled.intersection) / static_cast<double>(pooled.union_);
        report.background_iou[category] = iou;
        auto& s = sums[category];
        s.first += iou;
        ++s.second;
    }
    double total = 0.0;
    for (const auto& [category, s] : sums) {
        report.per_object_category_miou[category] = s.first / static_cast<double>(s.second);
        total += report.per_object_category_miou[category];
    }
    report.overall = sums.empty() ? 0.0 : total / static_cast<double>(sums.size());
    return report;
}

nlohmann::json EvalReport::to_json(const std::map<int, std::string>& part_to_object_category,
                                   const std::map<int, std::string>& part_names) const {
    nlohmann::json categories = nlohmann::json::object();
    for (const auto& [category, miou] : per_object_category_miou) {
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& [part, iou] : per_part_miou) {
            if (part_to_object_category.at(part) != category) continue;
            nlohmann::json row = {{"part", part}, {"iou", iou}};
            if (auto it = part_names.find(part); it != part_names.end()) row["name"] = it->second;
            parts.push_back(row);
        }
        nlohmann::json entry = {{"miou", miou}, {"parts", parts}};
        if (auto it = background_iou.find(category); it != background_iou.end()) entry["background_iou"] = it->second;
        categories[category] = entry;
    }
    nlohmann::json per_part = nlohmann::json::object();
    for (const auto& [part, iou] : per_part_miou) per_part[std::to_string(part)] = iou;
    return nlohmann::json{{"overall", overall}, {"per_object_category", categories}, {"per_part", per_part}};
}

}  // namespace partlift
