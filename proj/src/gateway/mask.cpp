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

#include <limits>

#include <openssl/evp.h>

#include "partlift/gateway/segmenter.hpp"
#include "partlift/gateway/wire.hpp"
#include "partlift/render/png_io.hpp"

namespace partlift {

void SegmentRequest::validate() const {
    if (image.size.pixel_count() == 0 || image.pixels.size() != image.size.pixel_count()) {
        throw std::invalid_argument("segment request image is empty or inconsistent");
    }
    if (instruction.empty()) throw std::invalid_argument("segment request instruction is empty");
}

void SegmentResponse::validate(ImageSize expected) const {
    if (mask.size() != expected) {
        throw std::invalid_argument("mask is " + std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                                    ", expected " + std::to_string(expected.width) + "x" +
                                    std::to_string(expected.height));
    }
    if (!has_segmentation && mask.any()) {
        throw std::invalid_argument("response without segmentation carries a nonempty mask");
    }
}

const char* to_string(GatewayErrorKind kind) {
    switch (kind) {
        case GatewayErrorKind::InvalidRequest: return "invalid request";
        case GatewayErrorKind::UnknownCategory: return "unknown category";
        case GatewayErrorKind::MaskNotFound: return "mask not found";
        case GatewayErrorKind::Io: return "io error";
        case GatewayErrorKind::Connect: return "connect error";
        case GatewayErrorKind::Timeout: return "timeout";
        case GatewayErrorKind::HttpStatus: return "http status";
        case GatewayErrorKind::ProtocolViolation: return "protocol violation";
    }
    return "unknown";
}

GatewayError::GatewayError(GatewayErrorKind kind, const std::string& message, std::string query_id, int view_index,
                           int attempts)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message + " (query '" + query_id + "', view " +
                         std::to_string(view_index) + ")"),
      kind_(kind),
      query_id_(std::move(query_id)),
      view_index_(view_index),
      attempts_(attempts) {}

std::vector<std::uint64_t> rle_encode(const Mask& mask) {
    std::vector<std::uint64_t> runs;
    bool current = false;
    std::uint64_t length = 0;
    for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
        if (mask[i] == current) {
            ++length;
        } else {
            runs.push_back(length);
            current = !current;
            length = 1;
        }
    }
    runs.push_back(length);
    return runs;
}

Mask rle_decode(std::span<const std::uint64_t> runs, ImageSize size) {
    const std::uint64_t expected = size.pixel_count();
    std::uint64_t total = 0;
    for (auto r : runs) {
        if (r > expected - std::min(total, expected)) {
            throw ProtocolError("rle runs exceed " + std::to_string(expected) + " pixels");
        }
        total += r;
    }
    if (total != expected) {
        throw ProtocolError("rle covers " + std::to_string(total) + " pixels, expected " + std::to_string(expected));
    }
    Mask mask(size);
    std::size_t pos = 0;
    bool value = false;
    for (auto r : runs) {
        if (value) {
            for (std::size_t i = 0; i < r; ++i) mask.set(pos + i, true);
        }
        pos += r;
        value = !value;
    }
    return mask;
}

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    std::string out(4 * ((bytes.size() + 2) / 3), '\0');
    const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), bytes.data(),
                                        static_cast<int>(bytes.size()));
    out.resize(static_cast<std::size_t>(written));
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    if (text.size() % 4 != 0) throw ProtocolError("base64 length is not a multiple of 4");
    if (text.size() > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
        throw ProtocolError("base64 payload too large");
    }
    std::vector<std::uint8_t> out(3 * (text.size() / 4));
    const int written = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(text.data()),
                                        static_cast<int>(text.size()));
    if (written < 0) throw ProtocolError("invalid base64 payload");
    // EVP_DecodeBlock counts the zero bytes produced by '=' padding.
    std::size_t padding = 0;
    if (!text.empty() && text.back() == '=') ++padding;
    if (text.size() > 1 && text[text.size() - 2] == '=') ++padding;
    out.resize(static_cast<std::size_t>(written) - padding);
    return out;
}

nlohmann::json encode_request(const SegmentRequest& request) {
    const auto png = encode_png(request.image);
    return nlohmann::json{
        {"image_png", base64_encode(png)},
        {"instruction", request.instruction},
        {"query_id", request.query_id},
        {"view_index", request.view_index},
    };
}

SegmentRequest decode_request(const nlohmann::json& body) {
    if (!body.is_object()) throw ProtocolError("request body is not a JSON object");
    for (const char* key : {"image_png", "instruction", "query_id"}) {
        if (!body.contains(key) || !body[key].is_string()) {
            throw ProtocolError(std::string("request field '") + key + "' missing or not a string");
        }
    }
    if (!body.contains("view_index") || !body["view_index"].is_number_integer()) {
        throw ProtocolError("request field 'view_index' missing or not an integer");
    }
    SegmentRequest request;
    try {
        request.image = decode_png_rgb(base64_decode(body["image_png"].get<std::string>()));
    } catch (const PngError& e) {
        throw ProtocolError(e.what());
    }
    request.instruction = body["instruction"].get<std::string>();
    request.query_id = body["query_id"].get<std::string>();
    request.view_index = body["view_index"].get<int>();
    return request;
}

nlohmann::json encode_response(const SegmentResponse& response) {
    return nlohmann::json{
        {"rle", rle_encode(response.mask)},
        {"width", response.mask.width()},
        {"height", response.mask.height()},
        {"explanation", response.explanation},
        {"has_segmentation", response.has_segmentation},
    };
}

SegmentResponse decode_response(const nlohmann::json& body) {
    if (!body.is_object()) throw ProtocolError("response body is not a JSON object");
    if (!body.contains("rle") || !body["rle"].is_array()) throw ProtocolError("response field 'rle' missing");
    for (const char* key : {"width", "height"}) {
        if (!body.contains(key) || !body[key].is_number_integer() || body[key].get<long long>() <= 0 ||
            body[key].get<long long>() > std::numeric_limits<int>::max()) {
            throw ProtocolError(std::string("response field '") + key + "' missing or not a positive integer");
        }
    }
    if (!body.contains("explanation") || !body["explanation"].is_string()) {
        throw ProtocolError("response field 'explanation' missing or not a string");
    }
    if (!body.contains("has_segmentation") || !body["has_segmentation"].is_boolean()) {
        throw ProtocolError("response field 'has_segmentation' missing or not a boolean");
    }
    std::vector<std::uint64_t> runs;
    runs.reserve(body["rle"].size());
    for (const auto& v : body["rle"]) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
            throw ProtocolError("rle entries must be nonnegative integers");
        }
        runs.push_back(v.get<std::uint64_t>());
    }
    SegmentResponse response;
    response.mask = rle_decode(runs, ImageSize{body["width"].get<int>(), body["height"].get<int>()});
    response.explanation = body["explanation"].get<std::string>();
    response.has_segmentation = body["has_segmentation"].get<bool>();
    if (!response.has_segmentation && response.mask.any()) {
        throw ProtocolError("has_segmentation is false but the mask is nonempty");
    }
    return response;
}

}  // namespace partlift
