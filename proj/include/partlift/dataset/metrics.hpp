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

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace partlift {

struct EvalReport {
    std::map<int, double> per_part_miou;
    std::map<std::string, double> per_object_category_miou;
    /// Mean of per_object_category_miou.
    double overall = 0.0;
    /// Only filled when background is included (object category -> IoU).
    std::map<std::string, double> background_iou;

    /// Table layout: per-part rows grouped under their object category.
    nlohmann::json to_json(const std::map<int, std::string>& part_to_object_category,
                           const std::map<int, std::string>& part_names = {}) const;
};

struct EvalOptions {
    /// Count background (-1) as an extra part of every object category.
    bool include_background = false;
};

/// Category mIoU. Intersection and union counts for each part are pooled
/// over all objects before dividing; object-category scores average their
/// parts (parts with an empty union are skipped) and `overall` averages the
/// object categories. Throws std::invalid_argument on shape mismatch or on
/// a non-background label missing from `part_to_object_category`.
EvalReport category_miou(const std::vector<std::vector<int>>& predictions,
                         const std::vector<std::vector<int>>& ground_truth,
                         const std::map<int, std::string>& part_to_object_category,
                         const EvalOptions& options = {});

}  // namespace partlift
