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

#include "partlift/geometry/ply.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

namespace partlift {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::size_t byte_size(ScalarType t) {
    switch (t) {
        case ScalarType::Int8:
        case ScalarType::UInt8: return 1;
        case ScalarType::Int16:
        case ScalarType::UInt16: return 2;
        case ScalarType::Int32:
        case ScalarType::UInt32:
        case ScalarType::Float32: return 4;
        case ScalarType::Float64: return 8;
    }
    return 0;
}

ScalarType parse_type(const std::string& name) {
    static const std::unordered_map<std::string, ScalarType> kTypes = {
        {"char", ScalarType::Int8},     {"int8", ScalarType::Int8},
        {"uchar", ScalarType::UInt8},   {"uint8", ScalarType::UInt8},
        {"short", ScalarType::Int16},   {"int16", ScalarType::Int16},
        {"ushort", ScalarType::UInt16}, {"uint16", ScalarType::UInt16},
        {"int", ScalarType::Int32},     {"int32", ScalarType::Int32},
        {"uint", ScalarType::UInt32},   {"uint32", ScalarType::UInt32},
        {"float", ScalarType::Float32}, {"float32", ScalarType::Float32},
        {"double", ScalarType::Float64}, {"float64", ScalarType::Float64},
    };
    auto it = kTypes.find(name);
    if (it == kTypes.end()) throw PlyError("malformed header: unknown property type '" + name + "'");
    return it->second;
}

double read_binary(const char* p, ScalarType t) {
    switch (t) {
        case ScalarType::Int8: { std::int8_t v; std::memcpy(&v, p, 1); return v; }
        case ScalarType::UInt8: { std::uint8_t v; std::memcpy(&v, p, 1); return v; }
        case ScalarType::Int16: { std::int16_t v; std::memcpy(&v, p, 2); return v; }
        case ScalarType::UInt16: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
        case ScalarType::Int32: { std::int32_t v; std::memcpy(&v, p, 4); return v; }
        case ScalarType::UInt32: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
        case ScalarType::Float32: { float v; std::memcpy(&v, p, 4); return v; }
        case ScalarType::Float64: { double v; std::memcpy(&v, p, 8); return v; }
    }
    return 0.0;
}

struct Property {
    std::string name;
    ScalarType type;
    bool is_list = false;
};

struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;

    std::size_t stride() const {
        std::size_t s = 0;
        for (const auto& p : properties) s += byte_size(p.type);
        return s;
    }
    bool has_list() const {
        for (const auto& p : properties) {
            if (p.is_list) return true;
        }
        return false;
    }
    int index_of(const std::string& n) const {
        for (std::size_t i = 0; i < properties.size(); ++i) {
            if (properties[i].name == n) return static_cast<int>(i);
        }
        return -1;
    }
};

struct Header {
    bool binary = false;
    std::vector<Element> elements;
};

Header parse_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 3) != "ply") {
        throw PlyError("malformed header: missing 'ply' magic");
    }
    Header h;
    bool have_format = false;
    while (true) {
        if (!std::getline(in, line)) throw PlyError("malformed header: missing end_header");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw.empty() || kw == "comment" || kw == "obj_info") continue;
        if (kw == "end_header") break;
        if (kw == "format") {
            std::string fmt, version;
            ls >> fmt >> version;
            if (fmt == "ascii") {
                h.binary = false;
            } else if (fmt == "binary_little_endian") {
                h.binary = true;
            } else {
                throw PlyError("malformed header: unsupported format '" + fmt + "'");
            }
            have_format = true;
        } else if (kw == "element") {
            Element e;
            long long count = -1;
            ls >> e.name >> count;
            if (e.name.empty() || count < 0) throw PlyError("malformed header: bad element line '" + line + "'");
            e.count = static_cast<std::size_t>(count);
            h.elements.push_back(std::move(e));
        } else if (kw == "property") {
            if (h.elements.empty()) throw PlyError("malformed header: property before element");
            std::string type, name;
            ls >> type;
            bool is_list = false;
            if (type == "list") {
                std::string count_type;
                ls >> count_type >> type;
                parse_type(count_type);
                is_list = true;
            }
            ls >> name;
            if (name.empty()) throw PlyError("malformed header: property without name");
            h.elements.back().properties.push_back({name, parse_type(type), is_list});
        } else {
            throw PlyError("malformed header: unexpected keyword '" + kw + "'");
        }
    }
    if (!have_format) throw PlyError("malformed header: missing format line");
    return h;
}

}  // namespace

PointCloud load_ply(const std::filesystem::path& path, const std::string& label_property) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PlyError("cannot open '" + path.string() + "'");

    Header h = parse_header(in);

    std::size_t vertex_pos = h.elements.size();
    for (std::size_t i = 0; i < h.elements.size(); ++i) {
        if (h.elements[i].name == "vertex") {
            vertex_pos = i;
            break;
        }
    }
    if (vertex_pos == h.elements.size()) throw PlyError("malformed header: no vertex element");
    const Element& vertex = h.elements[vertex_pos];
    // Elements after the vertex block are never read.
    for (std::size_t e = 0; e <= vertex_pos; ++e) {
        if (h.elements[e].has_list()) {
            throw PlyError("unsupported list property on element '" + h.elements[e].name + "'");
        }
    }

    std::array<int, 6> mandatory{};
    const std::array<const char*, 6> kMandatory = {"x", "y", "z", "red", "green", "blue"};
    for (std::size_t i = 0; i < kMandatory.size(); ++i) {
        mandatory[i] = vertex.index_of(kMandatory[i]);
        if (mandatory[i] < 0) throw PlyError(std::string("missing property '") + kMandatory[i] + "'");
    }
    const std::array<int, 3> normal_idx = {vertex.index_of("nx"), vertex.index_of("ny"), vertex.index_of("nz")};
    const bool has_normals = normal_idx[0] >= 0 && normal_idx[1] >= 0 && normal_idx[2] >= 0;
    const int label_idx = vertex.index_of(label_property);

    const std::size_t n = vertex.count;
    if (n == 0) throw PlyError("malformed header: vertex element is empty");
    const std::size_t nprops = vertex.properties.size();
    std::vector<double> values(nprops);

    std::vector<Vec3> positions(n);
    std::vector<Rgb> colors(n);
    std::vector<Vec3> normals(has_normals ? n : 0);
    std::vector<int> labels(label_idx >= 0 ? n : 0);

    auto store = [&](std::size_t row) {
        positions[row] = Vec3(values[mandatory[0]], values[mandatory[1]], values[mandatory[2]]);
        colors[row] = Rgb{static_cast<std::uint8_t>(values[mandatory[3]]),
                          static_cast<std::uint8_t>(values[mandatory[4]]),
                          static_cast<std::uint8_t>(values[mandatory[5]])};
        if (has_normals) {
            normals[row] = Vec3(values[normal_idx[0]], values[normal_idx[1]], values[normal_idx[2]]);
        }
        if (label_idx >= 0) labels[row] = static_cast<int>(values[label_idx]);
    };

    if (h.binary) {
        for (std::size_t e = 0; e < vertex_pos; ++e) {
            in.seekg(static_cast<std::streamoff>(h.elements[e].count * h.elements[e].stride()), std::ios::cur);
        }
        const std::size_t stride = vertex.stride();
        std::vector<char> buffer(stride * n);
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        if (static_cast<std::size_t>(in.gcount()) != buffer.size()) {
            throw PlyError("truncated payload: expected " + std::to_string(n) + " vertices");
        }
        for (std::size_t row = 0; row < n; ++row) {
            const char* p = buffer.data() + row * stride;
            for (std::size_t k = 0; k < nprops; ++k) {
                values[k] = read_binary(p, vertex.properties[k].type);
                p += byte_size(vertex.properties[k].type);
            }
            store(row);
        }
    } else {
        std::string line;
        for (std::size_t e = 0; e < vertex_pos; ++e) {
            for (std::size_t r = 0; r < h.elements[e].count; ++r) {
                if (!std::getline(in, line)) throw PlyError("truncated payload in element '" + h.elements[e].name + "'");
            }
        }
        for (std::size_t row = 0; row < n; ++row) {
            do {
                if (!std::getline(in, line)) {
                    throw PlyError("truncated payload: expected " + std::to_string(n) + " vertices, found " +
                                   std::to_string(row));
                }
            } while (line.find_first_not_of(" \t\r") == std::string::npos);
            std::istringstream ls(line);
            for (std::size_t k = 0; k < nprops; ++k) {
                if (!(ls >> values[k])) {
                    throw PlyError("malformed payload: vertex " + std::to_string(row) + " property '" +
                                   vertex.properties[k].name + "'");
                }
            }
            store(row);
        }
    }

    // Normals from float-precision files are renormalized; a file carrying
    // zero normals is treated as having none.
    std::optional<std::vector<Vec3>> opt_normals;
    if (has_normals) {
        bool usable = true;
        for (auto& nrm : normals) {
            const double len = nrm.norm();
            if (!(len > 1e-12)) {
                usable = false;
                break;
            }
            if (std::abs(len - 1.0) > 1e-9) nrm /= len;
        }
        if (usable) opt_normals = std::move(normals);
    }
    std::optional<std::vector<int>> opt_labels;
    if (label_idx >= 0) opt_labels = std::move(labels);
    return PointCloud(std::move(positions), std::move(colors), std::move(opt_normals), std::move(opt_labels));
}

Rgb label_color(int label) {
    static constexpr std::array<Rgb, 20> kPalette = {{
        {230, 25, 75},   {60, 180, 75},   {0, 130, 200},   {255, 225, 25},  {245, 130, 48},
        {145, 30, 180},  {70, 240, 240},  {240, 50, 230},  {210, 245, 60},  {250, 190, 212},
        {0, 128, 128},   {220, 190, 255}, {170, 110, 40},  {255, 250, 200}, {128, 0, 0},
        {170, 255, 195}, {128, 128, 0},   {255, 215, 180}, {0, 0, 128},     {0, 0, 0},
    }};
    if (label < 0) return Rgb{128, 128, 128};
    return kPalette[static_cast<std::size_t>(label) % kPalette.size()];
}

void write_ply(const PointCloud& cloud, const std::filesystem::path& path, bool colorize_by_label,
               const std::string& label_property) {
    if (colorize_by_label && !cloud.has_labels()) {
        throw PlyError("colorize_by_label requested but the cloud has no labels");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PlyError("cannot open '" + path.string() + "' for writing");

    const std::size_t n = cloud.size();
    out << "ply\nformat binary_little_endian 1.0\n"
        << "element vertex " << n << "\n"
        << "property double x\nproperty double y\nproperty double z\n"
        << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    if (cloud.has_normals()) out << "property double nx\nproperty double ny\nproperty double nz\n";
    if (cloud.has_labels()) out << "property int " << label_property << "\n";
    out << "end_header\n";

    std::vector<char> row;
    const auto positions = cloud.positions();
    const auto colors = cloud.colors();
    auto put = [&row](const auto& v) {
        const char* p = reinterpret_cast<const char*>(&v);
        row.insert(row.end(), p, p + sizeof(v));
    };
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        put(positions[i].x());
        put(positions[i].y());
        put(positions[i].z());
        const Rgb c = colorize_by_label ? label_color(cloud.labels()[i]) : colors[i];
        put(c.r);
        put(c.g);
        put(c.b);
        if (cloud.has_normals()) {
            const Vec3& nrm = cloud.normals()[i];
            put(nrm.x());
            put(nrm.y());
            put(nrm.z());
        }
        if (cloud.has_labels()) put(static_cast<std::int32_t>(cloud.labels()[i]));
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw PlyError("write failed for '" + path.string() + "'");
}

}  // namespace partlift
