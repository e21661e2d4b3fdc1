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

#include "partlift/pipeline/synth.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include "partlift/dataset/features.hpp"
#include "partlift/dataset/instructions.hpp"

namespace partlift {

SynthShape parse_synth_shape(const std::string& name) {
    if (name == "two_part_cylinder") return SynthShape::TwoPartCylinder;
    if (name == "lidded_pot") return SynthShape::LiddedPot;
    if (name == "four_leg_chair") return SynthShape::FourLegChair;
    throw std::invalid_argument("unknown shape '" + name + "'");
}

const char* to_string(SynthShape shape) {
    switch (shape) {
        case SynthShape::TwoPartCylinder: return "two_part_cylinder";
        case SynthShape::LiddedPot: return "lidded_pot";
        case SynthShape::FourLegChair: return "four_leg_chair";
    }
    return "";
}

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

struct Surface {
    double area;
    int label;
    Rgb color;
    std::function<Vec3(double, double)> at;  // (u, v) in [0,1)^2 -> point
};

Surface cylinder_wall(double r, double z0, double z1, int label, Rgb color) {
    return {kTau * r * (z1 - z0), label, color, [=](double u, double v) {
                return Vec3(r * std::cos(kTau * u), r * std::sin(kTau * u), z0 + (z1 - z0) * v);
            }};
}

Surface annulus(double r0, double r1, double z, int label, Rgb color) {
    return {std::numbers::pi * (r1 * r1 - r0 * r0), label, color, [=](double u, double v) {
                const double r = std::sqrt(r0 * r0 + v * (r1 * r1 - r0 * r0));
                return Vec3(r * std::cos(kTau * u), r * std::sin(kTau * u), z);
            }};
}

Surface rectangle(const Vec3& origin, const Vec3& e1, const Vec3& e2, int label, Rgb color) {
    return {e1.cross(e2).norm(), label, color, [=](double u, double v) { return Vec3(origin + u * e1 + v * e2); }};
}

enum BoxFace : unsigned { kBottom = 1, kTop = 2, kXMin = 4, kXMax = 8, kYMin = 16, kYMax = 32, kAll = 63 };

void add_box(std::vector<Surface>& out, const Vec3& lo, const Vec3& hi, unsigned faces, int label, Rgb color) {
    const Vec3 d = hi - lo;
    const Vec3 ex(d.x(), 0, 0), ey(0, d.y(), 0), ez(0, 0, d.z());
    if (faces & kBottom) out.push_back(rectangle(lo, ex, ey, label, color));
    if (faces & kTop) out.push_back(rectangle(lo + ez, ex, ey, label, color));
    if (faces & kXMin) out.push_back(rectangle(lo, ey, ez, label, color));
    if (faces & kXMax) out.push_back(rectangle(lo + ex, ey, ez, label, color));
    if (faces & kYMin) out.push_back(rectangle(lo, ex, ez, label, color));
    if (faces & kYMax) out.push_back(rectangle(lo + ey, ex, ez, label, color));
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

PointCloud sample(const std::vector<Surface>& surfaces, std::size_t points, std::uint64_t seed) {
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& s : surfaces) cumulative.push_back(total += s.area);

    std::mt19937_64 rng(seed);
    std::vector<Vec3> positions;
    std::vector<Rgb> colors;
    std::vector<int> labels;
    positions.reserve(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double pick = uniform01(rng) * total;
        std::size_t s = 0;
        while (s + 1 < surfaces.size() && cumulative[s] <= pick) ++s;
        const double u = uniform01(rng), v = uniform01(rng);
        positions.push_back(surfaces[s].at(u, v));
        colors.push_back(surfaces[s].color);
        labels.push_back(surfaces[s].label);
    }
    return PointCloud(std::move(positions), std::move(colors), std::nullopt, std::move(labels));
}

}  // namespace

SynthObject make_synthetic(SynthShape shape, std::size_t points, std::uint64_t seed) {
    if (points < 100) throw std::invalid_argument("synthetic shapes need at least 100 points");
    std::vector<Surface> surfaces;
    SynthObject out{PointCloud({Vec3::Zero()}, {Rgb{}}), "", {}};

    switch (shape) {
        case SynthShape::TwoPartCylinder: {
            const Rgb body{40, 80, 200}, cap{200, 40, 40};
            surfaces.push_back(cylinder_wall(0.5, 0.0, 1.0, 0, body));
            surfaces.push_back(annulus(0.0, 0.5, 0.0, 0, body));
            surfaces.push_back(annulus(0.2, 0.5, 1.0, 0, body));
            surfaces.push_back(cylinder_wall(0.2, 1.0, 1.4, 1, cap));
            surfaces.push_back(annulus(0.0, 0.2, 1.4, 1, cap));
            out.object_category = "bottle";
            out.part_names = {{0, "body"}, {1, "cap"}};
            break;
        }
        case SynthShape::LiddedPot: {
            // The lid sits inside the open body, below the rim at z = 0.8.
            const Rgb body{60, 160, 80}, lid{220, 200, 40};
            surfaces.push_back(cylinder_wall(0.5, 0.0, 0.8, 2, body));
            surfaces.push_back(annulus(0.0, 0.5, 0.0, 2, body));
            surfaces.push_back(annulus(0.0, 0.46, 0.68, 3, lid));
            surfaces.push_back(cylinder_wall(0.07, 0.68, 0.74, 3, lid));
            surfaces.push_back(annulus(0.0, 0.07, 0.74, 3, lid));
            out.object_category = "pot";
            out.part_names = {{2, "body"}, {3, "lid"}};
            break;
        }
        case SynthShape::FourLegChair: {
            const Rgb seat{200, 120, 40}, back{40, 90, 200}, leg{90, 60, 30};
            add_box(surfaces, {-0.5, -0.5, 0.45}, {0.5, 0.5, 0.55}, kAll, 4, seat);
            add_box(surfaces, {-0.5, 0.4, 0.55}, {0.5, 0.5, 1.3}, kAll & ~kBottom, 5, back);
            for (double x : {-0.46, 0.38}) {
                for (double y : {-0.46, 0.38}) {
                    add_box(surfaces, {x, y, 0.0}, {x + 0.08, y + 0.08, 0.45}, kAll & ~kTop, 6, leg);
                }
            }
            out.object_category = "chair";
            out.part_names = {{4, "seat"}, {5, "back"}, {6, "leg"}};
            break;
        }
    }
    out.cloud = sample(surfaces, points, seed);
    return out;
}

ManifestEntry synthetic_manifest_entry(const SynthObject& object, const std::string& object_id,
                                       const std::string& ply_path, std::uint64_t seed) {
    ManifestEntry entry;
    entry.object_id = object_id;
    entry.object_category = object.object_category;
    entry.ply_path = ply_path;
    entry.part_names = object.part_names;
    for (const auto& features : extract_all_part_features(object.cloud)) {
        const auto& name = object.part_names.at(features.category);
        for (auto& rec : generate_instructions(features, name, TemplateSet::defaults(), seed, object_id)) {
            entry.instructions.push_back({rec.query, rec.query_type, rec.category});
        }
    }
    return entry;
}

}  // namespace partlift
