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

#include "partlift/dataset/instructions.hpp"

#include <cstdio>
#include <map>
#include <random>
#include <stdexcept>

namespace partlift {

const char* to_string(QueryType type) { return type == QueryType::Normal ? "normal" : "three_d"; }

QueryType parse_query_type(const std::string& text) {
    if (text == "normal") return QueryType::Normal;
    if (text == "three_d") return QueryType::ThreeD;
    throw std::invalid_argument("unknown query type '" + text + "'");
}

const TemplateSet& TemplateSet::defaults() {
    static const TemplateSet kDefaults{
        {
            "Which part of this object is the {part}?",
            "Segment the {part} of this object.",
            "Where is the {part} located on this object?",
            "Can you find the {part} in this object?",
            "Please highlight the {part}.",
            "Which part of this object would you call the {part}? Explain why.",
        },
        {
            "Segment the {color} part at the {location} of the object.",
            "Which {color} part sits at the {location}?",
            "Find the {size_rank} part of this object; it is {color}.",
            "Which part of the object measures roughly {dims}?",
            "Highlight the part at the {location} whose size is about {dims}.",
            "Which part is the {size_rank} one and appears {color}?",
        },
    };
    return kDefaults;
}

namespace {

std::string ordinal_size(int rank) {
    switch (rank) {
        case 1: return "largest";
        case 2: return "second largest";
        case 3: return "third largest";
        default: break;
    }
    if (rank <= 0) return "";
    const int mod100 = rank % 100;
    const char* suffix = (mod100 >= 11 && mod100 <= 13) ? "th"
                         : rank % 10 == 1               ? "st"
                         : rank % 10 == 2               ? "nd"
                         : rank % 10 == 3               ? "rd"
                                                        : "th";
    return std::to_string(rank) + suffix + " largest";
}

std::string location_phrase(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

std::string dims_phrase(const Vec3& e) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%.2f x %.2f x %.2f", e.x(), e.y(), e.z());
    return buf;
}

std::string fill(const std::string& tmpl, const std::map<std::string, std::string>& slots) {
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        const auto open = tmpl.find('{', pos);
        if (open == std::string::npos) {
            out.append(tmpl, pos);
            break;
        }
        const auto close = tmpl.find('}', open);
        if (close == std::string::npos) throw std::invalid_argument("unterminated slot in template '" + tmpl + "'");
        out.append(tmpl, pos, open - pos);
        const std::string name = tmpl.substr(open + 1, close - open - 1);
        auto it = slots.find(name);
        if (it == slots.end() || it->second.empty()) {
            throw std::invalid_argument("template slot '{" + name + "}' has no value");
        }
        out += it->second;
        pos = close + 1;
    }
    return out;
}

// Fisher-Yates driven directly by mt19937_64, whose output sequence is fixed
// by the standard (unlike std::shuffle / distributions).
template <class T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

std::vector<InstructionRecord> generate_instructions(const PartFeatures& features, const std::string& part_name,
                                                     const TemplateSet& templates, std::uint64_t seed,
                                                     const std::string& object_id) {
    if (templates.normal.empty() || templates.three_d.empty()) {
        throw std::invalid_argument("template set needs at least one normal and one 3D template");
    }
    const std::map<std::string, std::string> slots = {
        {"part", part_name},
        {"color", features.color_name},
        {"location", location_phrase(features.relative_position)},
        {"dims", dims_phrase(features.extent)},
        {"size_rank", ordinal_size(features.size_rank)},
    };

    std::mt19937_64 rng(seed);
    std::vector<InstructionRecord> out;
    for (auto [family, type] : {std::pair{&templates.normal, QueryType::Normal},
                                std::pair{&templates.three_d, QueryType::ThreeD}}) {
        std::vector<InstructionRecord> group;
        for (const auto& tmpl : *family) {
            group.push_back(InstructionRecord{fill(tmpl, slots), type, object_id, features.category, ""});
        }
        seeded_shuffle(group, rng);
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

}  // namespace partlift
