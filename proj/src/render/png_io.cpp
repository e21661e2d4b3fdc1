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

#include "partlift/render/png_io.hpp"

#include <cstring>
#include <string>

#include <png.h>

namespace partlift {
namespace {

struct ImageGuard {
    png_image image;
    ImageGuard() {
        std::memset(&image, 0, sizeof(image));
        image.version = PNG_IMAGE_VERSION;
    }
    ~ImageGuard() { png_image_free(&image); }
};

}  // namespace

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
    ImageGuard g;
    g.image.width = static_cast<png_uint_32>(image.size.width);
    g.image.height = static_cast<png_uint_32>(image.size.height);
    g.image.format = PNG_FORMAT_RGB;
    static_assert(sizeof(Rgb) == 3);

    png_alloc_size_t size = 0;
    if (!png_image_write_to_memory(&g.image, nullptr, &size, 0, image.pixels.data(), 0, nullptr)) {
        throw PngError(std::string("png encode failed: ") + g.image.message);
    }
    std::vector<std::uint8_t> out(size);
    if (!png_image_write_to_memory(&g.image, out.data(), &size, 0, image.pixels.data(), 0, nullptr)) {
        throw PngError(std::string("png encode failed: ") + g.image.message);
    }
    out.resize(size);
    return out;
}

RgbImage decode_png_rgb(const std::vector<std::uint8_t>& bytes) {
    ImageGuard g;
    if (!png_image_begin_read_from_memory(&g.image, bytes.data(), bytes.size())) {
        throw PngError(std::string("png decode failed: ") + g.image.message);
    }
    g.image.format = PNG_FORMAT_RGB;
    RgbImage out(ImageSize{static_cast<int>(g.image.width), static_cast<int>(g.image.height)}, Rgb{});
    if (!png_image_finish_read(&g.image, nullptr, out.pixels.data(), 0, nullptr)) {
        throw PngError(std::string("png decode failed: ") + g.image.message);
    }
    return out;
}

void write_png(const RgbImage& image, const std::filesystem::path& path) {
    ImageGuard g;
    g.image.width = static_cast<png_uint_32>(image.size.width);
    g.image.height = static_cast<png_uint_32>(image.size.height);
    g.image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&g.image, path.c_str(), 0, image.pixels.data(), 0, nullptr)) {
        throw PngError("cannot write '" + path.string() + "': " + g.image.message);
    }
}

Mask read_mask_png(const std::filesystem::path& path) {
    ImageGuard g;
    if (!png_image_begin_read_from_file(&g.image, path.c_str())) {
        throw PngError("cannot read '" + path.string() + "': " + g.image.message);
    }
    g.image.format = PNG_FORMAT_GRAY;
    const ImageSize size{static_cast<int>(g.image.width), static_cast<int>(g.image.height)};
    std::vector<std::uint8_t> gray(size.pixel_count());
    if (!png_image_finish_read(&g.image, nullptr, gray.data(), 0, nullptr)) {
        throw PngError("cannot decode '" + path.string() + "': " + g.image.message);
    }
    Mask mask(size);
    for (std::size_t i = 0; i < gray.size(); ++i) mask.set(i, gray[i] > 127);
    return mask;
}

void write_mask_png(const Mask& mask, const std::filesystem::path& path) {
    ImageGuard g;
    g.image.width = static_cast<png_uint_32>(mask.width());
    g.image.height = static_cast<png_uint_32>(mask.height());
    g.image.format = PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> gray(mask.pixel_count());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask[i] ? 255 : 0;
    if (!png_image_write_to_file(&g.image, path.c_str(), 0, gray.data(), 0, nullptr)) {
        throw PngError("cannot write '" + path.string() + "': " + g.image.message);
    }
}

}  // namespace partlift
