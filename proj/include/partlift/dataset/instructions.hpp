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
#include <vector>

#include "partlift/dataset/features.hpp"

namespace partlift {

enum class QueryType { Normal, ThreeD };

const char* to_string(QueryType type);
/// Accepts "normal" and "three_d"; throws std::invalid_argument otherwise.
QueryType parse_query_type(const std::string& text);

struct InstructionRecord {
    std::string query;
    QueryType query_type = QueryType::Normal;
    std::string object_id;
    int category = kBackground;
    std::string gt_mask_ref;
};

/// Query templates with {part}, {color}, {location}, {dims} and {size_rank}
/// slots. `normal` templates name the part; `three_d` templates describe it
/// through features extracted from the point cloud.
struct TemplateSet {
    std::vector<std::string> normal;
    std::vector<std::string> three_d;

    static const TemplateSet& defaults();
};

/// Fills every template of both families and returns them in a
/// seed-dependent order (normal queries first). Throws std::invalid_argument
/// when either family is empty or a template uses an unknown or empty slot.
std::vector<InstructionRecord> generate_instructions(const PartFeatures& features,
                                                     const std::string& part_name,
                                                     const TemplateSet& templates,
                                                     std::uint64_t seed,
                                                     const std::string& object_id = {});

}  // namespace partlift
