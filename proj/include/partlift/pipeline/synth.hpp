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
#include <map>
#include <string>

#include "partlift/dataset/manifest.hpp"
#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

enum class SynthShape { TwoPartCylinder, LiddedPot, FourLegChair };

/// "two_part_cylinder", "lidded_pot", "four_leg_chair".
SynthShape parse_synth_shape(const std::string& name);
const char* to_string(SynthShape shape);

struct SynthObject {
    PointCloud cloud;
    std::string object_category;
    std::map<int, std::string> part_names;
};

/// Samples `points` surface points (z up, roughly unit scale) with one flat
/// color and one globally unique label per part:
///   two_part_cylinder (bottle): body 0, cap 1
///   lidded_pot (pot):           body 2, lid 3 (lid recessed below the rim)
///   four_leg_chair (chair):     seat 4, back 5, leg 6
/// Deterministic for a given seed. Requires points >= 100.
SynthObject make_synthetic(SynthShape shape, std::size_t points, std::uint64_t seed);

/// Manifest entry with template-generated instructions for every part.
ManifestEntry synthetic_manifest_entry(const SynthObject& object, const std::string& object_id,
                                       const std::string& ply_path, std::uint64_t seed);

}  // namespace partlift
