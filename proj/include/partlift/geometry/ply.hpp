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
#include <stdexcept>
#include <string>

#include "partlift/geometry/point_cloud.hpp"

namespace partlift {

class PlyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads an ASCII or little-endian binary PLY. Requires x,y,z,red,green,blue
/// on the vertex element; nx,ny,nz and a scalar `label_property` are picked
/// up when present.
PointCloud load_ply(const std::filesystem::path& path,
                    const std::string& label_property = "label");

/// Writes little-endian binary PLY (double positions/normals, uchar colors,
/// int label). With colorize_by_label the colors are replaced by
/// label_color(label).
void write_ply(const PointCloud& cloud,
               const std::filesystem::path& path,
               bool colorize_by_label = false,
               const std::string& label_property = "label");

/// Fixed palette used for label colorization; kBackground maps to gray.
Rgb label_color(int label);

}  // namespace partlift
