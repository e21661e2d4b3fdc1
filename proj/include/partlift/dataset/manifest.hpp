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
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "partlift/dataset/instructions.hpp"

namespace partlift {

class ManifestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ManifestInstruction {
    std::string query;
    QueryType query_type = QueryType::Normal;
    int category = kBackground;
};

/// One object of a split file.
struct ManifestEntry {
    std::string object_id;
    std::string object_category;
    /// As written in the file; see resolved_ply_path().
    std::filesystem::path ply_path;
    std::vector<ManifestInstruction> instructions;
    std::string label_property = "label";
    /// Optional part display names (category id -> name).
    std::map<int, std::string> part_names;

    std::filesystem::path resolved_ply_path(const std::filesystem::path& manifest_dir) const {
        return ply_path.is_absolute() ? ply_path : manifest_dir / ply_path;
    }
};

nlohmann::json to_json(const ManifestEntry& entry);
/// Throws ManifestError on missing or mistyped fields.
ManifestEntry entry_from_json(const nlohmann::json& doc);

/// Reads a split file: a JSON array of entries (a single object is also accepted).
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);
void save_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path);

}  // namespace partlift
