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

#include "partlift/dataset/manifest.hpp"

#include <fstream>

namespace partlift {

nlohmann::json to_json(const ManifestEntry& entry) {
    nlohmann::json instructions = nlohmann::json::array();
    for (const auto& ins : entry.instructions) {
        instructions.push_back({{"query", ins.query}, {"query_type", to_string(ins.query_type)}, {"category", ins.category}});
    }
    nlohmann::json doc = {
        {"object_id", entry.object_id},
        {"object_category", entry.object_category},
        {"ply_path", entry.ply_path.generic_string()},
        {"instructions", instructions},
        {"label_property", entry.label_property},
    };
    if (!entry.part_names.empty()) {
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& [id, name] : entry.part_names) parts.push_back({{"id", id}, {"name", name}});
        doc["parts"] = parts;
    }
    return doc;
}

namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* key, nlohmann::json::value_t type) {
    if (!doc.contains(key)) throw ManifestError(std::string("manifest entry missing field '") + key + "'");
    const auto& v = doc[key];
    const bool ok = type == nlohmann::json::value_t::number_integer ? v.is_number_integer() : v.type() == type;
    if (!ok) throw ManifestError(std::string("manifest field '") + key + "' has the wrong type");
    return v;
}

}  // namespace

ManifestEntry entry_from_json(const nlohmann::json& doc) {
    using vt = nlohmann::json::value_t;
    if (!doc.is_object()) throw ManifestError("manifest entry is not a JSON object");
    ManifestEntry e;
    e.object_id = field(doc, "object_id", vt::string).get<std::string>();
    e.object_category = field(doc, "object_category", vt::string).get<std::string>();
    e.ply_path = field(doc, "ply_path", vt::string).get<std::string>();
    if (doc.contains("label_property")) e.label_property = field(doc, "label_property", vt::string).get<std::string>();
    for (const auto& ins : field(doc, "instructions", vt::array)) {
        ManifestInstruction mi;
        mi.query = field(ins, "query", vt::string).get<std::string>();
        try {
            mi.query_type = parse_query_type(field(ins, "query_type", vt::string).get<std::string>());
        } catch (const std::invalid_argument& ex) {
            throw ManifestError(ex.what());
        }
        mi.category = field(ins, "category", vt::number_integer).get<int>();
        if (mi.query.empty()) throw ManifestError("manifest instruction with empty query in '" + e.object_id + "'");
        e.instructions.push_back(std::move(mi));
    }
    if (doc.contains("parts")) {
        for (const auto& part : field(doc, "parts", vt::array)) {
            e.part_names[field(part, "id", vt::number_integer).get<int>()] =
                field(part, "name", vt::string).get<std::string>();
        }
    }
    return e;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ManifestError("cannot open manifest '" + path.string() + "'");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ManifestError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
    }
    std::vector<ManifestEntry> entries;
    if (doc.is_array()) {
        for (const auto& d : doc) entries.push_back(entry_from_json(d));
    } else {
        entries.push_back(entry_from_json(doc));
    }
    return entries;
}

void save_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& e : entries) doc.push_back(to_json(e));
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ManifestError("cannot write manifest '" + path.string() + "'");
    out << doc.dump(2) << "\n";
}

}  // namespace partlift
