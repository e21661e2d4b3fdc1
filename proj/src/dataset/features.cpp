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

#include "partlift/dataset/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace partlift {
namespace {

struct NamedColor {
    const char* name;
    Rgb rgb;
};

constexpr std::array<NamedColor, 12> kNamedColors = {{
    {"red", {255, 0, 0}},
    {"green", {0, 255, 0}},
    {"blue", {0, 0, 255}},
    {"yellow", {255, 255, 0}},
    {"orange", {255, 165, 0}},
    {"purple", {128, 0, 128}},
    {"pink", {255, 192, 203}},
    {"cyan", {0, 255, 255}},
    {"brown", {139, 69, 19}},
    {"white", {255, 255, 255}},
    {"black", {0, 0, 0}},
    {"gray", {128, 128, 128}},
}};

constexpr double kDeadZone = 0.1;

struct PartStats {
    std::size_t count = 0;
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());
    Vec3 sum = Vec3::Zero();
    std::map<int, std::array<std::uint64_t, 4>> bins;  // packed bin -> (count, r, g, b sums)

    double volume() const { return (hi - lo).prod(); }
};

std::map<int, PartStats> collect(const PointCloud& cloud) {
    if (!cloud.has_labels()) throw std::invalid_argument("part features require labels");
    std::map<int, PartStats> parts;
    const auto labels = cloud.labels();
    const auto positions = cloud.positions();
    const auto colors = cloud.colors();
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        if (labels[i] < 0) continue;
        PartStats& s = parts[labels[i]];
        ++s.count;
        s.lo = s.lo.cwiseMin(positions[i]);
        s.hi = s.hi.cwiseMax(positions[i]);
        s.sum += positions[i];
        const Rgb c = colors[i];
        const int bin = ((c.r >> 3) << 10) | ((c.g >> 3) << 5) | (c.b >> 3);
        auto& b = s.bins[bin];
        ++b[0];
        b[1] += c.r;
        b[2] += c.g;
        b[3] += c.b;
    }
    return parts;
}

PartFeatures describe(int category, const PartStats& s, const Vec3& object_center, const Vec3& object_extent) {
    PartFeatures f;
    f.category = category;
    f.point_count = s.count;
    f.extent = s.hi - s.lo;

    auto mode = s.bins.begin();
    for (auto it = s.bins.begin(); it != s.bins.end(); ++it) {
        if (it->second[0] > mode->second[0]) mode = it;
    }
    const auto& m = mode->second;
    auto mean = [&](std::uint64_t sum) {
        return static_cast<std::uint8_t>(std::lround(static_cast<double>(sum) / static_cast<double>(m[0])));
    };
    f.dominant_color = Rgb{mean(m[1]), mean(m[2]), mean(m[3])};
    f.color_name = nearest_color_name(f.dominant_color);

    const Vec3 centroid = s.sum / static_cast<double>(s.count);
    const std::array<std::array<const char*, 2>, 3> words = {{{"left", "right"}, {"front", "back"}, {"bottom", "top"}}};
    for (int axis : {2, 0, 1}) {
        const double offset = centroid[axis] - object_center[axis];
        const double dead = kDeadZone * object_extent[axis];
        if (offset > dead) f.relative_position.emplace_back(words[axis][1]);
        if (offset < -dead) f.relative_position.emplace_back(words[axis][0]);
    }
    if (f.relative_position.empty()) f.relative_position.emplace_back("center");
    return f;
}

std::vector<PartFeatures> describe_all(const PointCloud& cloud, const std::map<int, PartStats>& parts) {
    const auto positions = cloud.positions();
    Vec3 lo = positions[0], hi = positions[0];
    for (const auto& p : positions) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec3 center = cloud.centroid();
    const Vec3 extent = hi - lo;

    std::vector<PartFeatures> out;
    for (const auto& [category, stats] : parts) out.push_back(describe(category, stats, center, extent));

    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return parts.at(out[a].category).volume() > parts.at(out[b].category).volume();
    });
    for (std::size_t rank = 0; rank < order.size(); ++rank) out[order[rank]].size_rank = static_cast<int>(rank) + 1;
    return out;
}

}  // namespace

std::string nearest_color_name(Rgb color) {
    const NamedColor* best = nullptr;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (const auto& nc : kNamedColors) {
        const double dr = double(color.r) - nc.rgb.r, dg = double(color.g) - nc.rgb.g, db = double(color.b) - nc.rgb.b;
        const double d2 = dr * dr + dg * dg + db * db;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = &nc;
        }
    }
    return best->name;
}

PartFeatures extract_part_features(const PointCloud& cloud, int category) {
    const auto parts = collect(cloud);
    if (!parts.contains(category)) {
        throw std::invalid_argument("category " + std::to_string(category) + " does not occur in the cloud");
    }
    for (auto& f : describe_all(cloud, parts)) {
        if (f.category == category) return f;
    }
    throw std::logic_error("unreachable");
}

std::vector<PartFeatures> extract_all_part_features(const PointCloud& cloud) {
    return describe_all(cloud, collect(cloud));
}

}  // namespace partlift
